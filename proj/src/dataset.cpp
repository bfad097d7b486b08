#include "mx/dataset.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "mx/rng.hpp"

namespace mx {

std::vector<Split> split_per_game(int n_games, const std::array<double, 3>& fractions,
                                  uint64_t seed) {
  double sum = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("split fractions must sum to 1");
  std::vector<int> order(n_games);
  for (int i = 0; i < n_games; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  int n_train = static_cast<int>(fractions[0] * n_games + 0.5);
  int n_val = static_cast<int>(fractions[1] * n_games + 0.5);
  n_train = std::min(n_train, n_games);
  n_val = std::min(n_val, n_games - n_train);
  std::vector<Split> split(n_games, Split::Test);
  for (int i = 0; i < n_train; ++i) split[order[i]] = Split::Train;
  for (int i = n_train; i < n_train + n_val; ++i) split[order[i]] = Split::Validation;
  return split;
}

CompactGoal compact_goal(const Goal& g, bool keep_redundant) {
  CompactGoal out;
  out.missing.reserve(g.missing.size());
  for (const GoalMissing& m : g.missing) {
    uint8_t branch = m.pung_able ? 0 : m.chow_able ? 1 : 2;
    out.missing.push_back(CompactGoal::Miss{m.tile.index, m.count, branch});
  }
  out.fans = g.fans;
  if (keep_redundant) {
    out.redundant.reserve(g.redundant.size());
    for (const GoalRedundant& r : g.redundant) out.redundant.push_back(r.tile.index);
  }
  return out;
}

CompactPosition compact_position(const GoalSet& gs, bool keep_redundant) {
  CompactPosition out;
  out.goals.reserve(gs.goals.size());
  for (const Goal& g : gs.goals) out.goals.push_back(compact_goal(g, keep_redundant));
  return out;
}

std::optional<VecExample> vectorize_example(const TrainingExample& ex, int cap) {
  const Observation& obs = ex.obs;
  std::vector<Action> legal = legal_actions(obs);
  if (legal.size() < 2) return std::nullopt;

  VecExample ve;
  ve.label = static_cast<uint8_t>(ex.label.output_index());
  ve.game_id = ex.game_id;
  ve.game_length = static_cast<uint16_t>(obs.game_length);
  UnshownCounter u = compute_unshown(obs);
  for (int k = 0; k < kNumTileKinds; ++k) ve.unshown[k] = static_cast<uint8_t>(u.counts[k]);

  if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) {
    ve.is_reaction = false;
    ve.hand = obs.hand.counts;
    ve.main = compact_position(propose_goals(obs, cap), true);
    return ve;
  }

  ve.is_reaction = true;
  ve.pass_position = compact_position(propose_goals(obs, cap), false);
  for (const Action& a : legal) {
    if (a.tag == Action::Tag::Pass) continue;
    VecExample::ClaimBranch branch;
    branch.slot = static_cast<uint8_t>(a.output_index());
    Observation claimed = claim_observation(obs, a);
    branch.post_hand = claimed.hand.counts;
    branch.post_claim = compact_position(propose_goals(claimed, cap), true);
    for (int k = 0; k < kNumTileKinds; ++k) {
      if (claimed.hand.counts[k] == 0) continue;
      Observation after = discard_observation(claimed, Tile(k));
      branch.post_discard.emplace_back(static_cast<uint8_t>(k),
                                       compact_position(propose_goals(after, cap), false));
    }
    ve.claims.push_back(std::move(branch));
  }
  return ve;
}

Dataset build_dataset(const std::vector<GameLog>& logs, const std::array<double, 3>& fractions,
                      uint64_t seed, int cap, int threads) {
  Dataset ds;
  ds.cap = cap;
  std::vector<Split> splits = split_per_game(static_cast<int>(logs.size()), fractions, seed);

  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::vector<VecExample>> per_game(logs.size());
  std::array<std::atomic<int64_t>, 3> forced{{{0}, {0}, {0}}};
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mu;

  auto worker = [&]() {
    while (!failed.load()) {
      int i = next.fetch_add(1);
      if (i >= static_cast<int>(logs.size())) break;
      try {
        std::vector<GameLog> one{logs[i]};
        std::vector<TrainingExample> raw = ingest_logs(one);
        int split = static_cast<int>(splits[i]);
        for (const TrainingExample& ex : raw) {
          auto ve = vectorize_example(ex, cap);
          if (!ve) {
            forced[split].fetch_add(1);
            continue;
          }
          per_game[i].push_back(std::move(*ve));
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mu);
        failed = true;
        error = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed) throw std::runtime_error("dataset build failed: " + error);

  for (size_t i = 0; i < logs.size(); ++i) {
    int split = static_cast<int>(splits[i]);
    for (auto& ve : per_game[i]) {
      ds.split_index[split].push_back(static_cast<int>(ds.examples.size()));
      ds.examples.push_back(std::move(ve));
    }
  }
  for (int s = 0; s < 3; ++s) ds.forced_counts[s] = forced[s].load();
  return ds;
}

}  // namespace mx
