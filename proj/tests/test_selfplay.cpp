#include "doctest.h"
#include "mx/dataset.hpp"
#include "mx/selfplay.hpp"

#include <algorithm>

using namespace mx;

TEST_CASE("psi1 order config loads and starts with the dragons") {
  auto order = load_psi1_order(std::string(MX_DATA_DIR) + "/psi1_tile_order.json");
  CHECK(order[0] == parse_tile("WD").index);
  CHECK(order[1] == parse_tile("GD").index);
  CHECK(order[2] == parse_tile("RD").index);
  CHECK(order == default_psi1_order());
}

TEST_CASE("seven pairs policy discards the most preferred redundant tile") {
  SevenPairsPolicy psi1;
  Observation obs;
  obs.seat = 0;
  obs.hand = parse_hand("C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD C6");
  obs.last_event = LastEvent{LastEvent::Kind::SelfDraw, parse_tile("C6"), -1};
  // two singletons: WD and C6; the white dragon goes first in the fixed order
  Action a = psi1.act(obs);
  CHECK(a == Action::discard(parse_tile("WD")));

  // never claims
  obs.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("C6"), 3};
  CHECK(psi1.act(obs) == Action::pass());
}

TEST_CASE("seven pairs policy treats third copies as redundant") {
  SevenPairsPolicy psi1;
  Observation obs;
  obs.seat = 0;
  obs.hand = parse_hand("C1 C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD");
  obs.last_event = LastEvent{LastEvent::Kind::SelfDraw, parse_tile("C1"), -1};
  auto cands = psi1.candidate_discards(obs.hand);
  REQUIRE(cands.size() == 2);  // the third C1 and the lone WD
  CHECK(psi1.act(obs) == Action::discard(parse_tile("WD")));
}

TEST_CASE("selfplay is reproducible byte for byte") {
  auto logs1 = run_selfplay(seven_pairs_factory(), 6, 0x5eed, 2);
  auto logs2 = run_selfplay(seven_pairs_factory(), 6, 0x5eed, 1);
  REQUIRE(logs1.size() == logs2.size());
  for (size_t i = 0; i < logs1.size(); ++i) {
    CHECK(game_log_to_json(logs1[i]) == game_log_to_json(logs2[i]));
  }
}

TEST_CASE("psi1 wins are always seven pairs") {
  auto logs = run_selfplay(seven_pairs_factory(), 120, 0xbee, 2);
  int wins = 0;
  for (const GameLog& log : logs) {
    if (log.winner < 0) continue;
    wins++;
    bool seven = std::find(log.winning_fans.begin(), log.winning_fans.end(),
                           fan::kSevenPairs) != log.winning_fans.end();
    CHECK(seven);
  }
  CHECK(wins > 10);

  FanFrequencyTable freq = fan_frequency(logs);
  CHECK(freq.total_wins == wins);
  CHECK(freq.frequency[fan::kSevenPairs] == doctest::Approx(1.0));
}

TEST_CASE("no wins yields a flagged empty table") {
  std::vector<GameLog> logs;
  GameLog drawn;
  drawn.winner = -1;
  logs.push_back(drawn);
  FanFrequencyTable freq = fan_frequency(logs);
  CHECK(freq.total_wins == 0);
  for (double f : freq.frequency) CHECK(f == 0.0);
}

TEST_CASE("log serialization round trips") {
  auto logs = run_selfplay(seven_pairs_factory(), 2, 0xf1b, 1);
  for (const GameLog& log : logs) {
    GameLog copy = game_log_from_json(game_log_to_json(log));
    CHECK(game_log_to_json(copy) == game_log_to_json(log));
  }
}

TEST_CASE("ingest replays logs and reproduces the labels") {
  auto logs = run_selfplay(seven_pairs_factory(), 12, 0xdad, 2);
  auto examples = ingest_logs(logs);
  int64_t decisions = 0;
  for (const GameLog& log : logs) decisions += log.decisions.size();
  CHECK(static_cast<int64_t>(examples.size()) == decisions);

  SevenPairsPolicy psi1;
  for (const TrainingExample& ex : examples) {
    // the label is legal
    auto legal = legal_actions(ex.obs);
    bool ok = false;
    for (const Action& a : legal) ok = ok || a == ex.label;
    CHECK(ok);
    // the deterministic policy reproduces its own log
    CHECK(psi1.act(ex.obs) == ex.label);
  }
}

TEST_CASE("random-policy logs replay cleanly with claims and kongs") {
  auto logs = run_selfplay(random_factory(0.8), 60, 0xc1a1, 2);
  int claims = 0, kongs = 0;
  for (const GameLog& log : logs) {
    for (const Event& e : log.events) {
      claims += e.type == Event::Type::Chow || e.type == Event::Type::Pung;
      kongs += e.type == Event::Type::KongConvert || e.type == Event::Type::KongConcealed ||
               e.type == Event::Type::KongClaim;
    }
  }
  CHECK(claims > 50);  // the 0.8 claim probability forces plenty of melds
  auto examples = ingest_logs(logs);
  CHECK(examples.size() > 1000);
}

TEST_CASE("framework policy plays legal moves") {
  auto logs = run_selfplay(framework_factory(ParameterSet(), 24), 2, 0xf4a, 2);
  for (const GameLog& log : logs) {
    CHECK(log.events.size() > 52);
  }
  CHECK_NOTHROW(ingest_logs(logs));
}
