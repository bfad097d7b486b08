#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "mx/calc.hpp"
#include "mx/goal.hpp"
#include "mx/observation.hpp"
#include "mx/params.hpp"

namespace mx {

inline constexpr double kIllegalLogit = -1e300;

// Dense encoding of a goal set for the parallel form. Rows beyond the real
// goal count are identity padding: the indicator forces every product factor
// to one, the branch mask selects the zero coefficient, and `valid` excludes
// the row downstream.
struct VectorizedState {
  int rows = 0;
  Eigen::MatrixXd fan_ind;   // rows x 80, goal fan indicators
  Eigen::MatrixXd mt_ind;    // rows x 34, Eq-style real-data indicator
  Eigen::MatrixXd mt_cnt;    // rows x 34, missing copies
  Eigen::MatrixXd bm_pung;   // rows x 34 \  one-hot branch mask
  Eigen::MatrixXd bm_chow;   // rows x 34   (pung-able, chow-able, neither)
  Eigen::MatrixXd bm_none;   // rows x 34 /
  Eigen::MatrixXd redund;    // rows x 34, redundant-tile indicator (H)
  Eigen::MatrixXd features;  // 34 x 12 (X)
  Eigen::VectorXd unshown;   // 34 (U)
  Eigen::VectorXd valid;     // rows
  double sum_unshown = 0.0;
  int game_length = 1;
  std::array<uint8_t, kNumTileKinds> hand{};  // discard legality mask
};

VectorizedState vectorize(const Observation& obs, const GoalSet& gs, int rows = kDefaultGoalCap);

// Parallel Algorithm 1: one value per row; real rows equal goal_value.
Eigen::VectorXd forward_goal_values(const VectorizedState& vs, const ParameterSet& p);

// Parallel Algorithm 2: 34 discard logits (H-weighted value sums scaled by
// the tile preference). Argmax over held kinds matches select_discard.
Eigen::VectorXd forward_discard_logits(const VectorizedState& vs, const Eigen::VectorXd& values,
                                       const ParameterSet& p);

int argmax_discard(const Eigen::VectorXd& logits, const std::array<uint8_t, kNumTileKinds>& hand);

// Five reaction logits (pass, chows, pung); illegal entries get the large
// negative sentinel so a legality mask can drop them from any loss.
Eigen::VectorXd forward_action_logits(const Observation& obs, const ParameterSet& p,
                                      int cap = kDefaultGoalCap);

struct DiffReport {
  int n = 0;
  int argmax_mismatches = 0;
  double max_rel_dev = 0.0;
  uint64_t seed = 0;
  std::string first_divergence;  // empty when clean
};

// Differential test between the sequential calculation component and the
// parallel form: random reachable states, random parameters (negative
// entries included), value vectors and argmax decisions compared.
DiffReport differential_test(int n_states, uint64_t seed, int cap = kDefaultGoalCap,
                             int threads = 0);

std::string diff_report_json(const DiffReport& r);

}  // namespace mx
