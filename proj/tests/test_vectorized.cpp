#include "doctest.h"
#include "mx/rng.hpp"
#include "mx/selfplay.hpp"
#include "mx/vectorized.hpp"

#include <cmath>

using namespace mx;

namespace {

Observation obs_with(const std::string& hand) {
  Observation obs;
  obs.seat = 0;
  obs.hand = parse_hand(hand);
  obs.last_event = LastEvent{LastEvent::Kind::SelfDraw, obs.hand.expand().front(), -1};
  return obs;
}

ParameterSet random_params(uint64_t seed, bool negatives) {
  ParameterSet p;
  Rng rng(seed);
  auto fill = [&](Eigen::VectorXd& v) {
    for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform(negatives ? -1.5 : 0.1, 2.5);
  };
  fill(p.fan);
  fill(p.held);
  fill(p.tile);
  fill(p.held_discard);
  return p;
}

}  // namespace

TEST_CASE("padding rows are inert") {
  Observation obs = obs_with("C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD RD");
  GoalSet gs = propose_goals(obs, 12);
  int n = static_cast<int>(gs.goals.size());
  REQUIRE(n <= 12);
  VectorizedState vs = vectorize(obs, gs, 64);
  ParameterSet p = random_params(11, true);
  Eigen::VectorXd v64 = forward_goal_values(vs, p);
  // padding products collapse to one and the zero fan row kills the value
  for (int g = n; g < 64; ++g) CHECK(v64[g] == 0.0);
  CHECK(vs.valid.sum() == doctest::Approx(double(n)));

  // appending padding never changes the real outputs
  VectorizedState tight = vectorize(obs, gs, n);
  Eigen::VectorXd vn = forward_goal_values(tight, p);
  for (int g = 0; g < n; ++g) CHECK(v64[g] == vn[g]);
  Eigen::VectorXd d64 = forward_discard_logits(vs, v64, p);
  Eigen::VectorXd dn = forward_discard_logits(tight, vn, p);
  for (int t = 0; t < kNumTileKinds; ++t) CHECK(d64[t] == dn[t]);
}

TEST_CASE("empty goal set forwards to all-zero values") {
  Observation obs = obs_with("C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD RD");
  GoalSet gs = propose_goals(obs, 4);
  gs.goals.clear();
  VectorizedState vs = vectorize(obs, gs, 16);
  ParameterSet p = random_params(12, true);
  Eigen::VectorXd v = forward_goal_values(vs, p);
  for (int g = 0; g < 16; ++g) CHECK(v[g] == 0.0);
}

TEST_CASE("branch mask encodes the 3/1/0 source coefficients") {
  Observation obs = obs_with("D5 D5 C1 C2 C3 B1 B2 B3 B7 B7 EW EW WD RD");
  GoalSet gs = propose_goals(obs, 64);
  VectorizedState vs = vectorize(obs, gs, 64);
  for (size_t g = 0; g < gs.goals.size(); ++g) {
    for (const auto& m : gs.goals[g].missing) {
      double bp = vs.bm_pung(g, m.tile.index);
      double bc = vs.bm_chow(g, m.tile.index);
      double bn = vs.bm_none(g, m.tile.index);
      CHECK(bp + bc + bn == 1.0);  // one hot
      if (m.pung_able) CHECK(bp == 1.0);
      if (!m.pung_able && m.chow_able) CHECK(bc == 1.0);
      if (!m.pung_able && !m.chow_able) CHECK(bn == 1.0);
    }
  }
}

TEST_CASE("sequential and parallel values agree bit for bit on sampled states") {
  auto states = sample_decision_states(60, 0xd1f, true, 12);
  double max_dev = 0.0;
  int mismatches = 0;
  for (size_t i = 0; i < states.size(); ++i) {
    const Observation& obs = states[i];
    ParameterSet p = random_params(1000 + i, true);
    p.draw_model = i % 2 ? ProbModel::Network : ProbModel::Uniform;
    p.discard_model = i % 4 < 2 ? ProbModel::Uniform : ProbModel::Network;
    GoalSet gs = propose_goals(obs, 64);
    auto cc = goal_values(gs, obs.game_length, p);
    VectorizedState vs = vectorize(obs, gs, 64);
    Eigen::VectorXd nn = forward_goal_values(vs, p);
    for (size_t g = 0; g < cc.size(); ++g) {
      double dev = std::fabs(cc[g] - nn[g]);
      if (dev > 0) dev /= std::max(std::fabs(cc[g]), std::fabs(nn[g]));
      max_dev = std::max(max_dev, dev);
    }
    Tile t_cc = select_discard(gs, cc, obs.hand, p);
    int t_nn = argmax_discard(forward_discard_logits(vs, nn, p), obs.hand.counts);
    if (t_cc.index != t_nn) mismatches++;
  }
  CHECK(max_dev <= 1e-9);
  CHECK(mismatches == 0);
}

TEST_CASE("reaction logits mirror the sequential reaction scores") {
  auto states = sample_decision_states(300, 0xd20, false, 10);
  int tested = 0;
  for (const Observation& obs : states) {
    if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) continue;
    if (legal_actions(obs).size() < 2) continue;
    ParameterSet p = random_params(500 + tested, true);
    auto evals = evaluate_reactions(obs, p, 32);
    Eigen::VectorXd logits = forward_action_logits(obs, p, 32);
    int finite = 0;
    for (int s = 0; s < kReactionOutputs; ++s) finite += logits[s] > kIllegalLogit ? 1 : 0;
    CHECK(finite == static_cast<int>(evals.size()));
    for (const auto& ev : evals) {
      int slot = ev.action.output_index() - kNumTileKinds;
      double dev = std::fabs(ev.score - logits[slot]);
      if (dev > 0) dev /= std::max({std::fabs(ev.score), std::fabs(logits[slot]), 1e-300});
      CHECK(dev <= 1e-9);
    }
    if (++tested >= 10) break;
  }
  CHECK(tested >= 5);
}

TEST_CASE("pass-only reaction has exactly one finite logit") {
  Observation obs = obs_with("C1 C4 C7 D2 D5 D8 B3 B6 B9 EW SW WW WD");
  obs.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("RD"), 2};
  Eigen::VectorXd logits = forward_action_logits(obs, ParameterSet(), 16);
  int finite = 0;
  for (int s = 0; s < kReactionOutputs; ++s) finite += logits[s] > kIllegalLogit ? 1 : 0;
  CHECK(finite == 1);
  CHECK(logits[0] > kIllegalLogit);  // the pass slot
}

TEST_CASE("differential test runs clean on a small sample") {
  DiffReport rep = differential_test(150, 0xabcdef, 64, 2);
  CHECK(rep.n == 150);
  CHECK(rep.argmax_mismatches == 0);
  CHECK(rep.max_rel_dev <= 1e-9);
  std::string js = diff_report_json(rep);
  CHECK(js.find("argmax_mismatches") != std::string::npos);
}
