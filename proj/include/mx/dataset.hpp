#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mx/selfplay.hpp"

namespace mx {

enum class Split : uint8_t { Train = 0, Validation = 1, Test = 2 };

// Goal payload needed to evaluate and differentiate values. Score-only
// positions leave `redundant` empty.
struct CompactGoal {
  struct Miss {
    uint8_t tile;
    uint8_t count;
    uint8_t branch;  // 0 pung-able, 1 chow-able, 2 neither
  };
  std::vector<Miss> missing;
  std::vector<uint8_t> fans;
  std::vector<uint8_t> redundant;  // tile kinds, the H row
};

struct CompactPosition {
  std::vector<CompactGoal> goals;
};

// One restricted decision point, with every goal search already run.
struct VecExample {
  bool is_reaction = false;
  uint8_t label = 0;  // combined output index
  int game_id = 0;
  uint16_t game_length = 1;
  std::array<uint8_t, kNumTileKinds> unshown{};

  // discard decisions
  CompactPosition main;
  std::array<uint8_t, kNumTileKinds> hand{};

  // reaction decisions
  struct ClaimBranch {
    uint8_t slot = 0;  // output index of the claim
    CompactPosition post_claim;
    std::array<uint8_t, kNumTileKinds> post_hand{};
    std::vector<std::pair<uint8_t, CompactPosition>> post_discard;  // per candidate tile
  };
  CompactPosition pass_position;  // score-only
  std::vector<ClaimBranch> claims;
};

struct Dataset {
  std::vector<VecExample> examples;              // restricted states only
  std::array<std::vector<int>, 3> split_index;   // indices into examples per split
  std::array<int64_t, 3> forced_counts{};        // single-action states per split
  int cap = kDefaultGoalCap;

  const std::vector<int>& of(Split s) const { return split_index[static_cast<int>(s)]; }
  int64_t forced(Split s) const { return forced_counts[static_cast<int>(s)]; }
};

// Deterministic per-game split assignment; fractions must sum to one.
std::vector<Split> split_per_game(int n_games, const std::array<double, 3>& fractions,
                                  uint64_t seed);

// Replays every log, runs the goal search for each restricted decision point
// (including the hypothetical claim branches) and packs the results. States
// with a single legal action only bump the forced counters: their prediction
// is always correct and their loss is identically zero.
Dataset build_dataset(const std::vector<GameLog>& logs, const std::array<double, 3>& fractions,
                      uint64_t seed, int cap = kDefaultGoalCap, int threads = 0);

CompactGoal compact_goal(const Goal& g, bool keep_redundant);
CompactPosition compact_position(const GoalSet& gs, bool keep_redundant);

// Vectorizes one raw example the same way build_dataset does (nullopt when
// the state has fewer than two legal actions).
std::optional<VecExample> vectorize_example(const TrainingExample& ex, int cap);

}  // namespace mx
