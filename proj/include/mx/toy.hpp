#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <vector>

#include "mx/rng.hpp"

namespace mx {
namespace toy {

// Minimal mountain car, canonical dynamics constants:
//   position in [-1.2, 0.6], velocity in [-0.07, 0.07], goal at 0.5,
//   force 0.001, gravity term 0.0025 * cos(3 * position),
//   start position uniform in [-0.6, -0.4], start velocity 0.
// Two actions: 0 accelerates left, 1 accelerates right.
struct MountainCar {
  double position = -0.5;
  double velocity = 0.0;

  void reset(Rng& rng);
  bool step(int action);  // true when the goal is reached
};

// Infinite-deck blackjack. Player sees (sum, usable ace, dealer upcard);
// actions are hit (1) and stick (0); dealer draws to 17.
struct Blackjack {
  int player_sum = 0;
  bool usable_ace = false;
  int dealer_card = 1;  // ace = 1

  void reset(Rng& rng);
  // Returns (done, reward in {-1, 0, +1}); dealer plays out on stick.
  std::pair<bool, int> step(int action, Rng& rng);

 private:
  int dealer_hidden_ = 1;
};

// One masked state-action pair: the partition cell, a scalar side input
// (the player sum for threshold templates, unused otherwise) and the label.
struct Datum {
  int cell = 0;
  double x = 0.0;
  int action = 0;  // binary
};

// A parameterized two-action template over a one-hot state partition. The
// decision margin is theta[cell] for logit cells and theta[cell] - x for
// threshold cells; the action is 1 when the margin is positive.
struct TemplateSpec {
  enum class Kind { CellLogit, Threshold };
  Kind kind = Kind::CellLogit;
  int n_cells = 0;
  Eigen::VectorXd init;  // starting parameters

  double margin(const Eigen::VectorXd& theta, const Datum& d) const {
    return kind == Kind::CellLogit ? theta[d.cell] : theta[d.cell] - d.x;
  }
  int decode(const Eigen::VectorXd& theta, const Datum& d) const {
    return margin(theta, d) > 0.0 ? 1 : 0;
  }
};

struct FitResult {
  Eigen::VectorXd params;
  double agreement = 0.0;            // fraction of log actions reproduced
  std::vector<bool> visited;         // cells seen in the log
  std::vector<int> disagreements;    // datum indices still mispredicted
};

// Gradient descent on the sigmoid-relaxed cross entropy of the masked
// template. Unvisited cells keep their initialization.
FitResult fit_template(const TemplateSpec& spec, const std::vector<Datum>& data,
                       double learning_rate = 0.5, int epochs = 400, uint64_t seed = 0);

// Mountain car template: four cells indexed by (position >= 0, velocity >= 0).
inline int mc_cell(double position, double velocity) {
  return (position >= 0.0 ? 2 : 0) + (velocity >= 0.0 ? 1 : 0);
}
TemplateSpec mc_template();

// The energy-pumping instance: accelerate along the velocity sign.
Eigen::VectorXd mc_push_along_velocity();

// Rolls episodes of the template policy; returns the visited data. Episodes
// are truncated at 200 steps.
std::vector<Datum> mc_generate(const Eigen::VectorXd& theta, int episodes, uint64_t seed,
                               bool* all_reached_goal = nullptr);

// Blackjack template: 20 cells indexed by (usable ace, dealer card 1..10);
// hit while the player sum is below the cell threshold.
inline int bj_cell(bool usable, int dealer_card) { return (usable ? 10 : 0) + dealer_card - 1; }
TemplateSpec bj_template();

// Optimal stand-or-hit thresholds from exact dealer-outcome DP.
Eigen::VectorXd bj_optimal_thresholds();

std::vector<Datum> bj_generate(const Eigen::VectorXd& thresholds, int episodes, uint64_t seed);

}  // namespace toy
}  // namespace mx
