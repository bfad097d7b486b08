#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mx/calc.hpp"
#include "mx/params.hpp"
#include "mx/rng.hpp"
#include "mx/table.hpp"

namespace mx {

// A per-decision record inside a game log. `action` is the policy's choice
// before kong resolution, so labels live in the 39-way output space.
struct DecisionRecord {
  int seat = -1;
  int step = 0;       // table step at decision time
  uint64_t digest = 0;
  Action action;
};

struct GameLog {
  int game_id = 0;
  uint64_t seed = 0;
  std::vector<Event> events;
  std::vector<DecisionRecord> decisions;
  int winner = -1;
  std::vector<uint8_t> winning_fans;
};

std::string game_log_to_json(const GameLog& log);
GameLog game_log_from_json(const std::string& line);
void save_logs(const std::vector<GameLog>& logs, const std::string& path);  // JSON lines
std::vector<GameLog> load_logs(const std::string& path);

// A decision policy for one seat.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual Action act(const Observation& obs) = 0;
  // Whether to declare a reachable win. Winning is treated as terminal and
  // non-strategic, so the default takes every legal win. `claimed` is set
  // when the win would take another seat's discard.
  virtual bool wants_win(const Observation& obs, bool by_claim, Tile claimed) {
    (void)obs;
    (void)by_claim;
    (void)claimed;
    return true;
  }
};

// The baseline target agent: plays exclusively toward seven pairs, never
// claims, and breaks ties between equally redundant tiles with a fixed
// 34-tile order.
class SevenPairsPolicy : public Policy {
 public:
  SevenPairsPolicy();  // order loaded from data/psi1_tile_order.json
  explicit SevenPairsPolicy(std::array<uint8_t, kNumTileKinds> order);
  Action act(const Observation& obs) override;
  const std::array<uint8_t, kNumTileKinds>& order() const { return order_; }
  // Discards that keep the pair count maximal; the tie set the fixed order
  // resolves.
  std::vector<Tile> candidate_discards(const TileMultiset& hand) const;

 private:
  std::array<uint8_t, kNumTileKinds> order_{};  // tile kinds, most-preferred first
  std::array<int, kNumTileKinds> rank_{};       // rank_[kind] = position in order_
};

std::array<uint8_t, kNumTileKinds> load_psi1_order(const std::string& path);
std::array<uint8_t, kNumTileKinds> default_psi1_order();  // descending tile index

// The fitted search agent: goal search plus the parameterized calculation.
class FrameworkPolicy : public Policy {
 public:
  explicit FrameworkPolicy(ParameterSet params, int cap = kDefaultGoalCap)
      : params_(std::move(params)), cap_(cap) {}
  Action act(const Observation& obs) override;
  const ParameterSet& params() const { return params_; }

 private:
  ParameterSet params_;
  int cap_;
};

// Uniform random legal play; used for sampling and invariant sweeps.
class RandomPolicy : public Policy {
 public:
  explicit RandomPolicy(uint64_t seed, double claim_prob = 0.35)
      : rng_(seed), claim_prob_(claim_prob) {}
  Action act(const Observation& obs) override;

 private:
  Rng rng_;
  double claim_prob_;
};

// The 136-tile wall a seed deals from; back() is drawn first.
std::vector<Tile> shuffled_wall(uint64_t seed);

// Runs one game; policies act per seat, wins are declared greedily whenever
// the eight-point threshold is reachable, kongs auto-execute.
GameLog run_game(const std::array<Policy*, kNumSeats>& policies, uint64_t seed, int game_id);

// Policy factory so parallel self-play can own per-game policy instances.
using PolicyFactory = std::function<std::unique_ptr<Policy>(int seat, uint64_t seed)>;

std::vector<GameLog> run_selfplay(const PolicyFactory& factory, int n_games, uint64_t seed,
                                  int threads = 0);

PolicyFactory seven_pairs_factory();
PolicyFactory framework_factory(ParameterSet params, int cap = kDefaultGoalCap);
PolicyFactory random_factory(double claim_prob = 0.35);

struct TrainingExample {
  Observation obs;
  Action label;
  int game_id = 0;
};

// Replays logs, checks every decision digest, and emits one example per
// decision point. Throws std::runtime_error on a replay mismatch.
std::vector<TrainingExample> ingest_logs(const std::vector<GameLog>& logs);

struct FanFrequencyTable {
  std::array<double, kNumFans> frequency{};  // occurrences per winning hand
  int total_wins = 0;
};

FanFrequencyTable fan_frequency(const std::vector<GameLog>& logs);

// Decision states sampled from seeded random-policy games; used by the
// differential test and the coverage study. When `discard_only` is set,
// reaction points are skipped. min_step skips the opening decisions where
// goal search is at its slowest.
std::vector<Observation> sample_decision_states(int n, uint64_t seed, bool discard_only = false,
                                                int min_step = 0);

}  // namespace mx
