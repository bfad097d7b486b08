#pragma once

#include <cstdint>
#include <vector>

#include "mx/fan.hpp"
#include "mx/observation.hpp"
#include "mx/tile.hpp"

namespace mx {

inline constexpr int kDefaultGoalCap = 64;
inline constexpr int kGoalHorizon = 6;  // scoring goals searched up to this distance

// One tile kind the goal still needs.
struct GoalMissing {
  Tile tile;
  uint8_t count = 1;      // copies still to acquire
  bool pung_able = false; // the hand already holds exactly two copies bound for a pung
  bool chow_able = false; // the hand holds the other two tiles of the chow
};

struct GoalRedundant {
  Tile tile;
  uint8_t count = 1;
};

// A concrete winning target: missing tiles M, redundant tiles R, fans.
struct Goal {
  std::vector<GoalMissing> missing;     // ascending tile index
  std::vector<GoalRedundant> redundant; // ascending tile index
  std::vector<uint8_t> fans;            // ascending catalog ids
  int shanten = 0;                      // D = |M| counting copies
  int fan_points = 0;
  TileMultiset target;                  // concealed part of the winning hand

  bool redundant_contains(Tile t) const {
    for (const auto& r : redundant) {
      if (r.tile == t) return true;
    }
    return false;
  }
};

struct GoalSet {
  std::vector<Goal> goals;  // ascending D, see ordering note in propose_goals
  UnshownCounter unshown;
};

// The goal proposer. Enumerates winning targets outward from the hand in
// ascending distance D and returns up to `cap` of them. Within one distance
// level goals are ordered by descending fan points, then by the smallest
// missing-tile index, then by target tiles; the order is total so caps are
// reproducible. When no target reaches the eight-point threshold within the
// horizon, the nearest structurally complete targets are returned instead.
GoalSet propose_goals(const Observation& obs, int cap = kDefaultGoalCap);

// D of the nearest goal.
int shanten_distance(const Observation& obs);

// Test oracle: every scoring goal with D <= max_d found by brute-force tile
// substitution (remove j, add j tiles in all ways) rather than by the plan
// search. Throws std::runtime_error when the enumeration exceeds `budget`
// candidate targets.
std::vector<Goal> exhaustive_goal_oracle(const Observation& obs, int max_d,
                                         int64_t budget = 80'000'000);

struct CoverageRow {
  int cap = 0;
  double recall = 0.0;     // fraction of oracle min-D goals proposed at this cap
  double mean_seconds = 0.0;
};

// Recall of minimum-distance goals and mean search time per cap.
std::vector<CoverageRow> coverage_stats(const std::vector<Observation>& states,
                                        const std::vector<int>& caps);

}  // namespace mx
