#include "mx/vectorized.hpp"

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mx/features.hpp"
#include "mx/rng.hpp"
#include "mx/selfplay.hpp"

namespace mx {

VectorizedState vectorize(const Observation& obs, const GoalSet& gs, int rows) {
  int n = static_cast<int>(gs.goals.size());
  if (n > rows) throw std::invalid_argument("goal set exceeds row count");
  VectorizedState vs;
  vs.rows = rows;
  vs.fan_ind = Eigen::MatrixXd::Zero(rows, kNumFans);
  vs.mt_ind = Eigen::MatrixXd::Zero(rows, kNumTileKinds);
  vs.mt_cnt = Eigen::MatrixXd::Zero(rows, kNumTileKinds);
  vs.bm_pung = Eigen::MatrixXd::Zero(rows, kNumTileKinds);
  vs.bm_chow = Eigen::MatrixXd::Zero(rows, kNumTileKinds);
  vs.bm_none = Eigen::MatrixXd::Ones(rows, kNumTileKinds);  // padding: no-op branch
  vs.redund = Eigen::MatrixXd::Zero(rows, kNumTileKinds);
  vs.valid = Eigen::VectorXd::Zero(rows);
  vs.unshown = Eigen::VectorXd::Zero(kNumTileKinds);
  for (int k = 0; k < kNumTileKinds; ++k) vs.unshown[k] = gs.unshown.counts[k];
  vs.sum_unshown = static_cast<double>(gs.unshown.total());
  vs.game_length = obs.game_length;
  vs.features = feature_matrix(gs.unshown, obs.game_length);
  vs.hand = obs.hand.counts;
  for (int g = 0; g < n; ++g) {
    const Goal& goal = gs.goals[g];
    vs.valid[g] = 1.0;
    for (uint8_t f : goal.fans) vs.fan_ind(g, f) = 1.0;
    for (const GoalMissing& m : goal.missing) {
      int t = m.tile.index;
      vs.mt_ind(g, t) = 1.0;
      vs.mt_cnt(g, t) = m.count;
      vs.bm_none(g, t) = 0.0;
      if (m.pung_able) {
        vs.bm_pung(g, t) = 1.0;
      } else if (m.chow_able) {
        vs.bm_chow(g, t) = 1.0;
      } else {
        vs.bm_none(g, t) = 1.0;
      }
    }
    for (const GoalRedundant& r : goal.redundant) vs.redund(g, r.tile.index) = 1.0;
  }
  return vs;
}

Eigen::VectorXd forward_goal_values(const VectorizedState& vs, const ParameterSet& p) {
  Eigen::VectorXd out(vs.rows);
  const bool draw_net = p.draw_model == ProbModel::Network;
  const bool disc_net = p.discard_model == ProbModel::Network;
  for (int g = 0; g < vs.rows; ++g) {
    double prod = 1.0;
    for (int t = 0; t < kNumTileKinds; ++t) {
      double punit = (vs.mt_cnt(g, t) * vs.unshown[t]) / vs.sum_unshown;
      double z[kNumHeldFeatures];
      for (int j = 0; j < kNumHeldFeatures; ++j) z[j] = vs.features(t, j);
      double p_draw = draw_net ? punit * dot_features(z, p.held) : punit;
      double p_disc = disc_net ? punit * dot_features(z, p.held_discard) : punit;
      double cp = 3.0 * vs.bm_pung(g, t) + 1.0 * vs.bm_chow(g, t) + 0.0 * vs.bm_none(g, t);
      double p_meld = p_disc * cp;
      double factor = vs.mt_ind(g, t) * (p_draw + p_meld) + (1.0 - vs.mt_ind(g, t));
      prod *= factor;
    }
    double fw = 0.0;
    for (int f = 0; f < kNumFans; ++f) fw += vs.fan_ind(g, f) * p.fan[f];
    out[g] = 100.0 * prod * fw;
  }
  return out;
}

Eigen::VectorXd forward_discard_logits(const VectorizedState& vs, const Eigen::VectorXd& values,
                                       const ParameterSet& p) {
  Eigen::VectorXd logits(kNumTileKinds);
  for (int t = 0; t < kNumTileKinds; ++t) {
    double acc = 0.0;
    for (int g = 0; g < vs.rows; ++g) acc += vs.valid[g] * vs.redund(g, t) * values[g];
    logits[t] = acc * p.tile[t];
  }
  return logits;
}

int argmax_discard(const Eigen::VectorXd& logits, const std::array<uint8_t, kNumTileKinds>& hand) {
  int best = -1;
  for (int t = 0; t < kNumTileKinds; ++t) {
    if (hand[t] == 0) continue;
    if (best < 0 || logits[t] > logits[best]) best = t;
  }
  if (best < 0) throw std::invalid_argument("empty hand");
  return best;
}

namespace {

double masked_value_sum(const VectorizedState& vs, const Eigen::VectorXd& values) {
  double acc = 0.0;
  for (int g = 0; g < vs.rows; ++g) acc += vs.valid[g] * values[g];
  return acc;
}

double position_score_parallel(const Observation& obs, const ParameterSet& p, int cap) {
  GoalSet gs = propose_goals(obs, cap);
  VectorizedState vs = vectorize(obs, gs, cap);
  return masked_value_sum(vs, forward_goal_values(vs, p));
}

}  // namespace

Eigen::VectorXd forward_action_logits(const Observation& obs, const ParameterSet& p, int cap) {
  if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) {
    throw std::invalid_argument("not a reaction decision point");
  }
  Eigen::VectorXd logits = Eigen::VectorXd::Constant(kReactionOutputs, kIllegalLogit);
  for (const Action& a : legal_actions(obs)) {
    int slot = a.output_index() - kNumTileKinds;
    if (a.tag == Action::Tag::Pass) {
      logits[slot] = position_score_parallel(obs, p, cap);
      continue;
    }
    Observation claimed = claim_observation(obs, a);
    GoalSet gs = propose_goals(claimed, cap);
    VectorizedState vs = vectorize(claimed, gs, cap);
    Eigen::VectorXd values = forward_goal_values(vs, p);
    Eigen::VectorXd dlogits = forward_discard_logits(vs, values, p);
    int t = argmax_discard(dlogits, claimed.hand.counts);
    logits[slot] = position_score_parallel(discard_observation(claimed, Tile(t)), p, cap);
  }
  return logits;
}

// ---------------------------------------------------------------------------
// Differential testing

namespace {

ParameterSet random_params(Rng& rng, int config) {
  ParameterSet p;
  p.draw_model = (config & 1) ? ProbModel::Network : ProbModel::Uniform;
  p.discard_model = (config & 2) ? ProbModel::Network : ProbModel::Uniform;
  auto fill = [&rng](Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1.5, 2.5);
  };
  fill(p.fan);
  fill(p.held);
  fill(p.tile);
  fill(p.held_discard);
  return p;
}

double rel_dev(double a, double b) {
  if (a == b) return 0.0;
  double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
  return std::fabs(a - b) / scale;
}

}  // namespace

DiffReport differential_test(int n_states, uint64_t seed, int cap, int threads) {
  if (n_states < 1) throw std::invalid_argument("need at least one state");
  // A fixed share of reaction states keeps the expensive claim branches
  // covered without dominating the runtime.
  int n_react = n_states / 10;
  int n_disc = n_states - n_react;
  std::vector<Observation> states = sample_decision_states(n_disc, seed, true, 8);
  if (n_react > 0) {
    auto all = sample_decision_states(n_react * 12, derive_seed(seed, 7), false, 8);
    for (const auto& obs : all) {
      if (obs.last_event.kind == LastEvent::Kind::OtherDiscard &&
          legal_actions(obs).size() >= 2) {
        states.push_back(obs);
        if (static_cast<int>(states.size()) == n_states) break;
      }
    }
    // top up with discard states when claimable ones are scarce
    int missing = n_states - static_cast<int>(states.size());
    if (missing > 0) {
      auto extra = sample_decision_states(missing, derive_seed(seed, 13), true, 8);
      states.insert(states.end(), extra.begin(), extra.end());
    }
  }

  DiffReport report;
  report.n = n_states;
  report.seed = seed;
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<DiffReport> partial(threads);
  std::vector<int> first_bad(threads, -1);
  std::vector<std::string> bad_msg(threads);

  auto run_state = [&](int i, DiffReport& local, int tid) {
    const Observation& obs = states[i];
    Rng rng(derive_seed(seed, 1000 + i));
    ParameterSet p = random_params(rng, i % 4);
    auto note = [&](const std::string& what) {
      local.argmax_mismatches++;
      if (first_bad[tid] < 0 || i < first_bad[tid]) {
        first_bad[tid] = i;
        bad_msg[tid] = "state " + std::to_string(i) + ": " + what;
      }
    };
    if (obs.last_event.kind == LastEvent::Kind::OtherDiscard) {
      auto evals = evaluate_reactions(obs, p, cap);
      Eigen::VectorXd logits = forward_action_logits(obs, p, cap);
      Action cc = select_reaction(obs, p, cap);
      int best = -1;
      for (int s = 0; s < kReactionOutputs; ++s) {
        if (logits[s] <= kIllegalLogit) continue;
        if (best < 0 || logits[s] > logits[best]) best = s;
      }
      Action nn = Action::from_output_index(kNumTileKinds + best);
      if (!(cc == nn)) note("reaction argmax differs");
      for (const auto& ev : evals) {
        int slot = ev.action.output_index() - kNumTileKinds;
        local.max_rel_dev = std::max(local.max_rel_dev, rel_dev(ev.score, logits[slot]));
      }
    } else {
      GoalSet gs = propose_goals(obs, cap);
      std::vector<double> cc_values = goal_values(gs, obs.game_length, p);
      VectorizedState vs = vectorize(obs, gs, cap);
      Eigen::VectorXd nn_values = forward_goal_values(vs, p);
      for (size_t g = 0; g < cc_values.size(); ++g) {
        local.max_rel_dev = std::max(local.max_rel_dev, rel_dev(cc_values[g], nn_values[g]));
      }
      Tile cc_tile = select_discard(gs, cc_values, obs.hand, p);
      Eigen::VectorXd dlogits = forward_discard_logits(vs, nn_values, p);
      int nn_tile = argmax_discard(dlogits, obs.hand.counts);
      if (cc_tile.index != nn_tile) note("discard argmax differs");
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      while (true) {
        int i = next.fetch_add(1);
        if (i >= n_states) break;
        run_state(i, partial[t], t);
      }
    });
  }
  for (auto& th : pool) th.join();
  int best_bad = -1;
  for (int t = 0; t < threads; ++t) {
    report.argmax_mismatches += partial[t].argmax_mismatches;
    report.max_rel_dev = std::max(report.max_rel_dev, partial[t].max_rel_dev);
    if (first_bad[t] >= 0 && (best_bad < 0 || first_bad[t] < best_bad)) {
      best_bad = first_bad[t];
      report.first_divergence = bad_msg[t];
    }
  }
  return report;
}

std::string diff_report_json(const DiffReport& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["argmax_mismatches"] = r.argmax_mismatches;
  j["max_rel_dev"] = r.max_rel_dev;
  j["seed"] = r.seed;
  if (!r.first_divergence.empty()) j["first_divergence"] = r.first_divergence;
  return j.dump(2);
}

}  // namespace mx
