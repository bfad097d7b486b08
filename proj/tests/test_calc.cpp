#include "doctest.h"
#include "mx/calc.hpp"
#include "mx/features.hpp"
#include "mx/selfplay.hpp"

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

ParameterSet bias_only_held() {
  ParameterSet p;
  p.held.setZero();
  p.held[kNumHeldFeatures - 1] = 1.0;  // bias only: the draw model collapses to uniform
  return p;
}

}  // namespace

TEST_CASE("tile features in fixed order") {
  Observation obs = obs_with("C1 C2 C3 D1 D2 D3 B1 B2 B3 EW EW SW B9");
  UnshownCounter u = compute_unshown(obs);
  REQUIRE(u.total() == 123);
  auto z = tile_features(parse_tile("C5"), u, 1);
  CHECK(z[0] == doctest::Approx(123.0));
  CHECK(z[1] == doctest::Approx(1.0 / 123.0));
  CHECK(z[2] == doctest::Approx(122.0 / 123.0));
  CHECK(z[3] == doctest::Approx(1.0));
  CHECK(z[4] == doctest::Approx(1.0));
  CHECK(z[5] == doctest::Approx(0.0));
  CHECK(z[11] == doctest::Approx(1.0));

  // honors have no neighbors
  auto ze = tile_features(parse_tile("EW"), u, 5);
  CHECK(ze[6] == 0.0);
  CHECK(ze[7] == 0.0);
  CHECK(ze[8] == doctest::Approx(double(u[parse_tile("EW")])));
  CHECK(ze[9] == 0.0);
  CHECK(ze[10] == 0.0);

  // suit boundary clips below
  auto zd = tile_features(parse_tile("D1"), u, 5);
  CHECK(zd[6] == 0.0);
  CHECK(zd[7] == 0.0);
  CHECK(zd[8] == doctest::Approx(double(u[parse_tile("D1")])));
  CHECK(zd[9] == doctest::Approx(double(u[parse_tile("D2")])));
}

TEST_CASE("acquisition probability") {
  Observation obs = obs_with("C1 C2 C3 D1 D2 D3 B1 B2 B3 EW EW SW B9");
  UnshownCounter u = compute_unshown(obs);

  // exhausted tile
  u.counts[parse_tile("WD").index] = 0;
  GoalMissing m{parse_tile("WD"), 1, false, false};
  auto ap = acquisition_probability(m, u, 3, ParameterSet());
  CHECK(ap.draw == 0.0);
  CHECK(ap.meld == 0.0);

  // pung-able: meld mass is three times the uniform discard mass
  UnshownCounter u2;
  for (int k = 0; k < kNumTileKinds; ++k) u2.counts[k] = 3;
  u2.counts[0] += -3 + 2;  // make the total an even 100
  REQUIRE(u2.total() == 101);
  u2.counts[0]--;
  REQUIRE(u2.total() == 100);
  GoalMissing mp{parse_tile("D5"), 1, true, false};
  u2.counts[parse_tile("D5").index] = 2;
  // keep the total at 100 for easy arithmetic
  u2.counts[parse_tile("D6").index] += 1;
  REQUIRE(u2.total() == 100);
  auto ap2 = acquisition_probability(mp, u2, 4, bias_only_held());
  CHECK(ap2.meld == doctest::Approx(3.0 * 0.02));
  CHECK(ap2.draw == doctest::Approx(0.02));  // bias-only weights reduce to uniform
}

TEST_CASE("goal value with no missing tiles is 100 times the fan weight") {
  Goal g;
  g.fans = {fan::kSevenPairs};
  UnshownCounter u;
  for (int k = 0; k < kNumTileKinds; ++k) u.counts[k] = 3;
  ParameterSet p;
  p.fan[fan::kSevenPairs] = 2.5;
  CHECK(goal_value(g, u, 4, p) == doctest::Approx(250.0));
}

TEST_CASE("goal value matches an independent scalar recomputation") {
  // single missing pung-able tile, all-ones parameters
  Goal g;
  g.missing.push_back(GoalMissing{parse_tile("D5"), 1, true, false});
  g.fans = {fan::kSevenPairs, fan::kConcealedHand};
  g.shanten = 1;
  UnshownCounter u;
  for (int k = 0; k < kNumTileKinds; ++k) u.counts[k] = 3;
  u.counts[parse_tile("D5").index] = 4;
  int L = 7;
  ParameterSet p;  // all ones, network draw / uniform discard

  // by hand: punit = 4/sum, zdot = sum + 1/sum + (1-1/sum) + L + 1/L + (1-1/L)
  //          + u[d3..d7] + 1, factor = punit*zdot + punit*3, v = 100*factor*2
  double sum = u.total();
  double punit = 4.0 / sum;
  double zdot = sum + 1.0 / sum + (1.0 - 1.0 / sum) + L + 1.0 / L + (1.0 - 1.0 / L) + 3.0 +
                3.0 + 4.0 + 3.0 + 3.0 + 1.0;
  double expect = 100.0 * (punit * zdot + punit * 3.0) * 2.0;
  CHECK(goal_value(g, u, L, p) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("missing copies scale the uniform mass linearly") {
  Goal g1, g2;
  g1.missing.push_back(GoalMissing{parse_tile("D5"), 1, false, false});
  g2.missing.push_back(GoalMissing{parse_tile("D5"), 2, false, false});
  g1.fans = g2.fans = {fan::kSevenPairs};
  UnshownCounter u;
  for (int k = 0; k < kNumTileKinds; ++k) u.counts[k] = 2;
  ParameterSet p = bias_only_held();
  CHECK(goal_value(g2, u, 3, p) == doctest::Approx(2.0 * goal_value(g1, u, 3, p)));
}

TEST_CASE("select_discard accumulates redundancy and applies preferences") {
  GoalSet gs;
  for (int k = 0; k < kNumTileKinds; ++k) gs.unshown.counts[k] = 3;
  Goal g1;
  g1.redundant.push_back(GoalRedundant{parse_tile("C1"), 1});
  Goal g2;
  g2.redundant.push_back(GoalRedundant{parse_tile("D9"), 1});
  gs.goals = {g1, g2};
  std::vector<double> values = {2.0, 1.0};
  TileMultiset hand = parse_hand("C1 D9 B4");
  ParameterSet p;
  CHECK(select_discard(gs, values, hand, p) == parse_tile("C1"));  // 2 > 1
  p.tile[parse_tile("D9").index] = 3.0;
  CHECK(select_discard(gs, values, hand, p) == parse_tile("D9"));  // 3 > 2
}

TEST_CASE("single goal single redundant tile is returned") {
  GoalSet gs;
  for (int k = 0; k < kNumTileKinds; ++k) gs.unshown.counts[k] = 3;
  Goal g;
  g.redundant.push_back(GoalRedundant{parse_tile("B7"), 1});
  gs.goals = {g};
  CHECK(select_discard(gs, {5.0}, parse_hand("B7 C1"), ParameterSet()) == parse_tile("B7"));
}

TEST_CASE("discard ties break to the lowest tile index") {
  GoalSet gs;
  for (int k = 0; k < kNumTileKinds; ++k) gs.unshown.counts[k] = 3;
  gs.goals = {};  // no goals: every redundancy value is zero
  CHECK(select_discard(gs, {}, parse_hand("D4 B8 EW"), ParameterSet()) == parse_tile("D4"));
}

TEST_CASE("fan rescaling leaves the argmax unchanged") {
  auto states = sample_decision_states(6, 0xca1c, true, 25);
  for (const Observation& obs : states) {
    GoalSet gs = propose_goals(obs, 64);
    ParameterSet p;
    Rng rng(0x5ca1e);
    for (int f = 0; f < 80; ++f) p.fan[f] = rng.uniform(0.1, 3.0);
    for (int t = 0; t < kNumTileKinds; ++t) p.tile[t] = rng.uniform(0.1, 3.0);
    auto v1 = goal_values(gs, obs.game_length, p);
    Tile t1 = select_discard(gs, v1, obs.hand, p);
    ParameterSet p2 = p;
    p2.fan *= 7.5;
    auto v2 = goal_values(gs, obs.game_length, p2);
    Tile t2 = select_discard(gs, v2, obs.hand, p2);
    CHECK(t1 == t2);
    for (size_t i = 0; i < v1.size(); ++i) {
      CHECK(v2[i] == doctest::Approx(7.5 * v1[i]).epsilon(1e-9));
    }
  }
}

TEST_CASE("select_discard always returns a held tile") {
  auto states = sample_decision_states(10, 0xca1d, true, 12);
  for (const Observation& obs : states) {
    GoalSet gs = propose_goals(obs, 64);
    auto vals = goal_values(gs, obs.game_length, ParameterSet());
    Tile t = select_discard(gs, vals, obs.hand, ParameterSet());
    CHECK(obs.hand.contains(t));
  }
}

TEST_CASE("pass is the only option without claims") {
  Observation obs = obs_with("C1 C4 C7 D2 D5 D8 B3 B6 B9 EW SW WW WD");
  obs.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("RD"), 2};
  CHECK(select_reaction(obs, ParameterSet()) == Action::pass());
}

TEST_CASE("select_reaction equals the argmax of evaluate_reactions") {
  auto states = sample_decision_states(400, 0xca1e, false, 10);
  int tested = 0;
  for (const Observation& obs : states) {
    if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) continue;
    if (legal_actions(obs).size() < 2) continue;
    ParameterSet p;
    auto evals = evaluate_reactions(obs, p, 32);
    Action best = evals.front().action;
    double best_score = evals.front().score;
    for (const auto& ev : evals) {
      if (ev.score > best_score) {
        best = ev.action;
        best_score = ev.score;
      }
    }
    CHECK(select_reaction(obs, p, 32) == best);
    // the claim branches simulate claim, discard, and rescoring
    for (const auto& ev : evals) {
      if (ev.action.tag == Action::Tag::Pass) continue;
      REQUIRE(ev.has_planned_discard);
      Observation claimed = claim_observation(obs, ev.action);
      CHECK(claimed.hand.total() == obs.hand.total() - 2);
      Observation after = discard_observation(claimed, ev.planned_discard);
      CHECK(ev.score == doctest::Approx(position_score(after, p, 32)).epsilon(1e-12));
    }
    if (++tested >= 12) break;
  }
  CHECK(tested >= 5);
}
