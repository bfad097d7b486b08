#include "mx/features.hpp"

#include <stdexcept>

namespace mx {

Eigen::Matrix<double, kNumHeldFeatures, 1> tile_features(Tile t, const UnshownCounter& u,
                                                         int game_length) {
  if (game_length < 1) throw std::invalid_argument("game length must be >= 1");
  double s = static_cast<double>(u.total());
  if (s < 1) throw std::invalid_argument("no unshown tiles left");
  double l = static_cast<double>(game_length);
  Eigen::Matrix<double, kNumHeldFeatures, 1> z;
  z[0] = s;
  z[1] = 1.0 / s;
  z[2] = 1.0 - 1.0 / s;
  z[3] = l;
  z[4] = 1.0 / l;
  z[5] = 1.0 - 1.0 / l;
  for (int off = -2; off <= 2; ++off) {
    int j = 8 + off;
    int k = t.index + off;
    bool in_suit = t.is_suited() && k >= 0 && k / 9 == t.index / 9;
    bool center = off == 0;
    z[j] = (center || in_suit) ? static_cast<double>(u.counts[center ? t.index : k]) : 0.0;
  }
  z[11] = 1.0;
  return z;
}

Eigen::Matrix<double, kNumTileKinds, kNumHeldFeatures> feature_matrix(const UnshownCounter& u,
                                                                      int game_length) {
  Eigen::Matrix<double, kNumTileKinds, kNumHeldFeatures> x;
  for (int k = 0; k < kNumTileKinds; ++k) {
    x.row(k) = tile_features(Tile(k), u, game_length).transpose();
  }
  return x;
}

}  // namespace mx
