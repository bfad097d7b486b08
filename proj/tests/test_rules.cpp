#include "doctest.h"
#include "mx/observation.hpp"
#include "mx/selfplay.hpp"
#include "mx/table.hpp"

#include <stdexcept>

using namespace mx;

namespace {

Observation base_obs(const std::string& hand) {
  Observation obs;
  obs.seat = 0;
  obs.hand = parse_hand(hand);
  obs.last_event = LastEvent{LastEvent::Kind::SelfDraw, obs.hand.expand().front(), -1};
  return obs;
}

}  // namespace

TEST_CASE("compute_unshown counts visible copies") {
  Observation obs = base_obs("C1 C2 C3 D1 D2 D3 B1 B2 B3 EW EW SW B9");
  UnshownCounter u = compute_unshown(obs);
  CHECK(u[parse_tile("B9")] == 3);
  CHECK(u[parse_tile("EW")] == 2);
  CHECK(u[parse_tile("WD")] == 4);
  CHECK(u.total() == 136 - 13);

  obs.all_discards[2].push_back(parse_tile("B9"));
  u = compute_unshown(obs);
  CHECK(u[parse_tile("B9")] == 2);
  CHECK(u.total() == 136 - 14);
}

TEST_CASE("compute_unshown hits zero on exhausted kinds") {
  Observation obs = base_obs("GD GD GD GD C1 C2 C3 D1 D2 D3 B1 B2 B3");
  UnshownCounter u = compute_unshown(obs);
  CHECK(u[parse_tile("GD")] == 0);
}

TEST_CASE("compute_unshown rejects inconsistent observations") {
  Observation obs = base_obs("GD GD GD GD C1 C2 C3 D1 D2 D3 B1 B2 B3");
  obs.all_discards[1].push_back(parse_tile("GD"));
  CHECK_THROWS_AS(compute_unshown(obs), std::invalid_argument);
}

TEST_CASE("unshown ignores other seats' concealed kongs") {
  Observation obs = base_obs("C1 C2 C3 D1 D2 D3 B1 B2 B3 EW EW SW B9");
  obs.hidden_kongs[2] = 1;  // four hidden copies of something
  UnshownCounter u = compute_unshown(obs);
  CHECK(u.total() == 136 - 13);
}

TEST_CASE("legal actions after self draw are the held kinds") {
  Observation obs = base_obs("C1 C1 C2 D5 D5 D5 B9 EW EW SW WD WD RD");
  auto legal = legal_actions(obs);
  CHECK(legal.size() == 8);
  for (const Action& a : legal) CHECK(a.tag == Action::Tag::Discard);
}

TEST_CASE("chow only from the left neighbor") {
  Observation obs = base_obs("D4 D6 C1 C1 C2 C3 B1 B2 B3 EW EW SW WD");
  obs.seat = 0;
  obs.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("D5"), 3};  // left
  auto legal = legal_actions(obs);
  REQUIRE(legal.size() == 2);
  CHECK(legal[0].tag == Action::Tag::Pass);
  CHECK(legal[1].tag == Action::Tag::ChowMid);

  obs.last_event.seat = 2;  // opposite seat
  legal = legal_actions(obs);
  CHECK(legal.size() == 1);
  CHECK(legal[0].tag == Action::Tag::Pass);
}

TEST_CASE("pung from any seat with two held copies") {
  Observation obs = base_obs("D5 D5 C1 C1 C2 C3 B1 B2 B3 EW EW SW WD");
  for (int seat = 1; seat < 4; ++seat) {
    obs.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("D5"), seat};
    auto legal = legal_actions(obs);
    bool has_pung = false;
    for (const Action& a : legal) has_pung = has_pung || a.tag == Action::Tag::Pung;
    CHECK(has_pung);
  }
}

TEST_CASE("chow variants depend on held complements") {
  Observation obs = base_obs("D6 D7 C1 C1 C2 C3 B1 B2 B3 EW EW SW WD");
  obs.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("D5"), 3};
  auto legal = legal_actions(obs);
  REQUIRE(legal.size() == 2);
  CHECK(legal[1].tag == Action::Tag::ChowLow);  // claimed D5 heads D5-D6-D7
}

TEST_CASE("kong resolution rewrites the three trigger shapes") {
  // (a) exposed pung + discarding the fourth copy
  Observation obs = base_obs("RD C1 C2 C3 D1 D2 D3 B1 B2 B7");
  obs.own_melds.push_back(Meld{MeldKind::Pung, parse_tile("RD"), 1});
  Action out = kong_resolution(obs, Action::discard(parse_tile("RD")));
  CHECK(out.tag == Action::Tag::KongExposed);
  CHECK(out.tile == parse_tile("RD"));

  // (b) drew the fourth copy of a concealed triplet
  Observation obs2 = base_obs("B3 B3 B3 B3 C1 C2 C3 D1 D2 D3 EW EW SW WD");
  obs2.last_event = LastEvent{LastEvent::Kind::SelfDraw, parse_tile("B3"), -1};
  Action out2 = kong_resolution(obs2, Action::discard(parse_tile("B3")));
  CHECK(out2.tag == Action::Tag::KongConcealed);

  // (c) pung on a discard while already holding three copies
  Observation obs3 = base_obs("B3 B3 B3 C1 C2 C3 D1 D2 D3 EW EW SW WD");
  obs3.last_event = LastEvent{LastEvent::Kind::OtherDiscard, parse_tile("B3"), 2};
  Action out3 = kong_resolution(obs3, Action{Action::Tag::Pung, Tile()});
  CHECK(out3.tag == Action::Tag::KongExposed);
}

TEST_CASE("kong resolution is the identity elsewhere and idempotent") {
  Observation obs = base_obs("B3 B3 B3 C1 C2 C3 D1 D2 D3 EW EW SW WD");
  obs.last_event = LastEvent{LastEvent::Kind::SelfDraw, parse_tile("C1"), -1};
  Action intended = Action::discard(parse_tile("C1"));
  Action out = kong_resolution(obs, intended);
  CHECK(out == intended);

  // applying the resolution to its own output changes nothing
  Observation obs2 = base_obs("B3 B3 B3 B3 C1 C2 C3 D1 D2 D3 EW EW SW WD");
  obs2.last_event = LastEvent{LastEvent::Kind::SelfDraw, parse_tile("B3"), -1};
  Action once = kong_resolution(obs2, Action::discard(parse_tile("B3")));
  Action twice = kong_resolution(obs2, once);
  CHECK(once == twice);
}

TEST_CASE("deal leaves 13 tiles per seat and 84 in the wall") {
  std::vector<Tile> wall;
  for (int k = 0; k < kNumTileKinds; ++k) {
    for (int c = 0; c < 4; ++c) wall.push_back(Tile(k));
  }
  TableState st = TableState::deal_from_wall(wall);
  for (int seat = 0; seat < kNumSeats; ++seat) {
    for (int i = 0; i < 13; ++i) {
      st.apply_event(Event{Event::Type::Deal, seat, st.wall.back(), Tile(), 0});
    }
  }
  for (int seat = 0; seat < kNumSeats; ++seat) CHECK(st.hands[seat].total() == 13);
  CHECK(st.wall.size() == 136 - 52);
  st.check_conservation();
}

TEST_CASE("pung claim moves the discard and passes the turn") {
  std::vector<Tile> wall;
  for (int k = 0; k < kNumTileKinds; ++k) {
    for (int c = 0; c < 4; ++c) wall.push_back(Tile(k));
  }
  TableState st = TableState::deal_from_wall(wall);
  for (int seat = 0; seat < kNumSeats; ++seat) {
    for (int i = 0; i < 13; ++i) {
      st.apply_event(Event{Event::Type::Deal, seat, st.wall.back(), Tile(), 0});
    }
  }
  // with the unshuffled wall, seat 0 is dealt one NW and seat 1 three
  int kind = -1;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (st.hands[1].counts[k] >= 2 && st.hands[0].counts[k] >= 1) kind = k;
  }
  REQUIRE(kind >= 0);
  st.apply_event(Event{Event::Type::Discard, 0, Tile(kind), Tile(), 0});
  st.apply_event(Event{Event::Type::Pung, 1, Tile(kind), Tile(), 0});
  CHECK(st.discards[0].empty());
  CHECK(st.melds[1].size() == 1);
  CHECK(st.melds[1][0].kind == MeldKind::Pung);
  st.check_conservation();
}

TEST_CASE("illegal events are rejected") {
  std::vector<Tile> wall;
  for (int k = 0; k < kNumTileKinds; ++k) {
    for (int c = 0; c < 4; ++c) wall.push_back(Tile(k));
  }
  TableState st = TableState::deal_from_wall(wall);
  CHECK_THROWS_AS(st.apply_event(Event{Event::Type::Discard, 0, Tile(0), Tile(), 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(st.apply_event(Event{Event::Type::Deal, 0, Tile(0), Tile(), 0}),
                  std::invalid_argument);  // wrong tile for the wall top unless it matches
}

TEST_CASE("random playouts conserve every tile kind") {
  // invariant sweep over seeded games, replaying each log event by event
  const int kGames = 1000;
  int64_t violations = 0;
  for (int g = 0; g < kGames; ++g) {
    uint64_t seed = derive_seed(0xfeedULL, g);
    std::array<std::unique_ptr<Policy>, kNumSeats> owned;
    std::array<Policy*, kNumSeats> ptrs;
    for (int s = 0; s < kNumSeats; ++s) {
      owned[s] = std::make_unique<RandomPolicy>(derive_seed(seed, 100 + s));
      ptrs[s] = owned[s].get();
    }
    GameLog log = run_game(ptrs, seed, g);
    REQUIRE(log.events.size() > 52);
    TableState st = TableState::deal_from_wall(shuffled_wall(seed));
    for (const Event& e : log.events) {
      st.apply_event(e);
      try {
        st.check_conservation();
      } catch (const std::exception&) {
        violations++;
      }
    }
  }
  CHECK(violations == 0);
}
