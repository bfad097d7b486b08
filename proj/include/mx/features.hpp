#pragma once

#include <Eigen/Core>

#include "mx/observation.hpp"
#include "mx/params.hpp"
#include "mx/tile.hpp"

namespace mx {

// Local game-state features for one tile, in fixed order:
//   [ S, 1/S, 1-1/S, L, 1/L, 1-1/L, U[t-2], U[t-1], U[t], U[t+1], U[t+2], 1 ]
// with S the total unshown count. Adjacency entries are zero for honors and
// beyond suit boundaries.
Eigen::Matrix<double, kNumHeldFeatures, 1> tile_features(Tile t, const UnshownCounter& u,
                                                         int game_length);

// All 34 feature rows stacked.
Eigen::Matrix<double, kNumTileKinds, kNumHeldFeatures> feature_matrix(const UnshownCounter& u,
                                                                      int game_length);

// Fixed-order dot product with a 12-weight vector. Both the scalar and the
// vectorized evaluation paths use this so reductions associate identically.
inline double dot_features(const double* row, const Eigen::VectorXd& w) {
  double acc = 0.0;
  for (int j = 0; j < kNumHeldFeatures; ++j) acc += row[j] * w[j];
  return acc;
}

}  // namespace mx
