#include "doctest.h"
#include "mx/fan.hpp"

#include <algorithm>
#include <set>

using namespace mx;

namespace {

WinContext ctx_discard(int seat = 0) { return WinContext{false, seat}; }
WinContext ctx_selfdraw(int seat = 0) { return WinContext{true, seat}; }

bool has_fan(const FanResult& r, uint8_t id) {
  return std::find(r.fans.begin(), r.fans.end(), id) != r.fans.end();
}

// Naive reference: enumerate complete splits of one suit by recursive choice,
// deduplicating through canonical encodings.
void naive_splits(std::array<uint8_t, 9> c, std::set<std::string>& out, std::string prefix,
                  bool pair_used) {
  int r = 0;
  while (r < 9 && c[r] == 0) r++;
  if (r == 9) {
    std::string key = prefix;
    std::sort(key.begin(), key.end());
    out.insert(key);
    return;
  }
  if (c[r] >= 3) {
    auto c2 = c;
    c2[r] -= 3;
    naive_splits(c2, out, prefix + char('P' * 16 + r), pair_used);
  }
  if (!pair_used && c[r] >= 2) {
    auto c2 = c;
    c2[r] -= 2;
    naive_splits(c2, out, prefix + char('Q' * 8 + r), true);
  }
  if (r <= 6 && c[r] >= 1 && c[r + 1] >= 1 && c[r + 2] >= 1) {
    auto c2 = c;
    c2[r]--;
    c2[r + 1]--;
    c2[r + 2]--;
    naive_splits(c2, out, prefix + char('C' * 4 + r), pair_used);
  }
}

std::string encode_split(const detail::SuitSplit& s) {
  std::string key;
  for (int i = 0; i < s.n_chows; ++i) key += char('C' * 4 + s.chow_lows[i]);
  for (int i = 0; i < s.n_pungs; ++i) key += char('P' * 16 + s.pung_ranks[i]);
  if (s.pair_rank >= 0) key += char('Q' * 8 + s.pair_rank);
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

TEST_CASE("fan catalog shape") {
  const FanCatalog& cat = FanCatalog::instance();
  CHECK(cat.all().size() == 80);
  int majors = 0, implemented = 0;
  for (const auto& f : cat.all()) {
    CHECK(f.points >= 1);
    CHECK(f.points <= 88);
    majors += f.major;
    implemented += f.implemented;
  }
  CHECK(majors == 56);
  CHECK(implemented >= 30);
  // point values transcribed from the scoring table
  CHECK(cat.points(fan::kSevenPairs) == 24);
  CHECK(cat.points(fan::kThirteenOrphans) == 88);
  CHECK(cat.points(fan::kPureTerminalChows) == 64);
  CHECK(cat.points(fan::kFourPureShiftedPungs) == 48);
  CHECK(cat.points(fan::kPureStraight) == 16);
  CHECK(cat.points(fan::kLesserHonorsKnitted) == 12);
  CHECK(cat.points(fan::kKnittedStraight) == 12);
  CHECK(cat.points(fan::kMixedStraight) == 8);
  CHECK(cat.points(fan::kHalfFlush) == 6);
  CHECK(cat.points(fan::kAllTypes) == 6);
  CHECK(cat.points(fan::kMeldedHand) == 6);
  CHECK(cat.points(fan::kFullyConcealedHand) == 4);
  CHECK(cat.info(fan::kSevenPairs).name == "Seven Pairs");
  CHECK(*cat.id_by_name("All Types") == fan::kAllTypes);
}

TEST_CASE("suit splits agree with the naive recursive decomposer") {
  // every single-suit multiset with at most 9 tiles
  std::array<uint8_t, 9> c{};
  int64_t checked = 0, mismatches = 0;
  std::function<void(int, int)> rec = [&](int rank, int left) {
    if (rank == 9) {
      std::set<std::string> naive;
      naive_splits(c, naive, "", false);
      std::set<std::string> fast;
      for (const auto& s : detail::suit_splits(c)) fast.insert(encode_split(s));
      if (naive != fast) mismatches++;
      checked++;
      return;
    }
    for (int take = 0; take <= std::min(4, left); ++take) {
      c[rank] = static_cast<uint8_t>(take);
      rec(rank + 1, left - take);
    }
    c[rank] = 0;
  };
  rec(0, 9);
  CHECK(mismatches == 0);
  CHECK(checked > 40000);
}

TEST_CASE("seven pairs decomposition and scoring") {
  TileMultiset hand = parse_hand("C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD WD");
  auto decs = decompose(hand, {});
  bool has7p = false;
  for (const auto& d : decs) has7p = has7p || d.kind == Decomposition::Kind::SevenPairs;
  CHECK(has7p);
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kSevenPairs));
  CHECK(best->second.total_points >= 24);
  CHECK(is_winning(hand, {}, ctx_discard()));
}

TEST_CASE("four identical copies count as two pairs") {
  TileMultiset hand = parse_hand("C1 C1 C1 C1 D5 D5 D7 D7 B2 B2 EW EW WD WD");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kSevenPairs));
  CHECK(has_fan(best->second, fan::kTileHog));
}

TEST_CASE("fully concealed self-drawn standard hand") {
  TileMultiset hand = parse_hand("C1 C2 C3 C4 C5 C6 D2 D3 D4 B4 B5 B6 WD WD");
  auto best = best_decomposition(hand, {}, ctx_selfdraw());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kFullyConcealedHand));
  CHECK_FALSE(has_fan(best->second, fan::kSelfDrawn));     // implied, excluded
  CHECK_FALSE(has_fan(best->second, fan::kConcealedHand)); // implied, excluded
}

TEST_CASE("all types fires with all five classes") {
  TileMultiset hand = parse_hand("C1 C2 C3 D4 D5 D6 B7 B8 B9 EW EW EW WD WD");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kAllTypes));
}

TEST_CASE("pure straight and its implied chow fans") {
  TileMultiset hand = parse_hand("C1 C2 C3 C4 C5 C6 C7 C8 C9 B4 B5 B6 WD WD");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kPureStraight));
  CHECK_FALSE(has_fan(best->second, fan::kShortStraight));
  CHECK_FALSE(has_fan(best->second, fan::kTwoTerminalChows));
}

TEST_CASE("pure terminal chows suppresses the smaller chow fans") {
  TileMultiset hand = parse_hand("C1 C2 C3 C1 C2 C3 C7 C8 C9 C7 C8 C9 C5 C5");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kPureTerminalChows));
  CHECK_FALSE(has_fan(best->second, fan::kAllChows));
  CHECK_FALSE(has_fan(best->second, fan::kPureDoubleChow));
  CHECK_FALSE(has_fan(best->second, fan::kTwoTerminalChows));
  CHECK(best->second.total_points >= 64);
}

TEST_CASE("thirteen orphans") {
  TileMultiset hand = parse_hand("C1 C9 D1 D9 B1 B9 EW SW WW NW RD GD WD WD");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kThirteenOrphans));
  CHECK_FALSE(has_fan(best->second, fan::kAllTypes));  // excluded by the rulebook
  CHECK(best->second.total_points >= 88);
}

TEST_CASE("lesser honors and knitted tiles plus complete knitted straight") {
  // knitted: C 1-4-7, D 2-5-8, B 3-6-9 with five honors
  TileMultiset hand = parse_hand("C1 C4 C7 D2 D5 D8 B3 B6 B9 EW SW WW RD GD");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kLesserHonorsKnitted));
  CHECK(has_fan(best->second, fan::kKnittedStraight));
  CHECK_FALSE(has_fan(best->second, fan::kConcealedHand));
  CHECK(best->second.total_points >= 24);
}

TEST_CASE("knitted straight with a regular set and pair") {
  TileMultiset hand = parse_hand("C1 C4 C7 D2 D5 D8 B3 B6 B9 EW EW EW WD WD");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kKnittedStraight));
  CHECK_FALSE(has_fan(best->second, fan::kLesserHonorsKnitted));
}

TEST_CASE("melded hand needs four exposed sets and a discard win") {
  TileMultiset pairhand = parse_hand("WD WD");
  std::vector<Meld> melds = {Meld{MeldKind::Pung, parse_tile("C2"), 1},
                             Meld{MeldKind::Chow, parse_tile("D4"), 2},
                             Meld{MeldKind::Pung, parse_tile("B6"), 3},
                             Meld{MeldKind::Chow, parse_tile("B1"), 1}};
  auto best = best_decomposition(pairhand, melds, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kMeldedHand));
  auto best2 = best_decomposition(pairhand, melds, ctx_selfdraw());
  REQUIRE(best2.has_value());
  CHECK_FALSE(has_fan(best2->second, fan::kMeldedHand));
}

TEST_CASE("winning threshold") {
  // bare chicken hand: mixed chows and a pung, few implemented points
  TileMultiset hand = parse_hand("C2 C3 C4 C6 C7 C8 D3 D4 D5 B7 B7 B7 EW EW");
  auto best = best_decomposition(hand, {}, ctx_discard());
  REQUIRE(best.has_value());
  CHECK(best->second.total_points < 8);
  CHECK_FALSE(is_winning(hand, {}, ctx_discard()));

  TileMultiset seven = parse_hand("C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD WD");
  CHECK(is_winning(seven, {}, ctx_discard()));
}

TEST_CASE("decompose rejects wrong totals") {
  TileMultiset hand = parse_hand("C1 C1 C3 C3 D5 D5 D7 D7 B2 B2 EW EW WD");
  CHECK_THROWS_AS(decompose(hand, {}), std::invalid_argument);
}

TEST_CASE("score_fans is order independent of meld listing") {
  TileMultiset hand = parse_hand("C1 C2 C3 WD WD");
  std::vector<Meld> m1 = {Meld{MeldKind::Pung, parse_tile("B6"), 1},
                          Meld{MeldKind::Chow, parse_tile("D4"), 2},
                          Meld{MeldKind::Pung, parse_tile("EW"), 3}};
  std::vector<Meld> m2 = {m1[2], m1[0], m1[1]};
  auto b1 = best_decomposition(hand, m1, ctx_discard());
  auto b2 = best_decomposition(hand, m2, ctx_discard());
  REQUIRE(b1.has_value());
  REQUIRE(b2.has_value());
  CHECK(b1->second.fans == b2->second.fans);
  CHECK(b1->second.total_points == b2->second.total_points);
}

TEST_CASE("seat and prevalent wind pungs") {
  TileMultiset hand = parse_hand("EW EW EW SW SW SW C4 C5 C6 D6 D7 D8 B2 B2");
  WinContext ctx{false, 1};  // seat 1 = south wind
  auto best = best_decomposition(hand, {}, ctx);
  REQUIRE(best.has_value());
  CHECK(has_fan(best->second, fan::kPrevalentWind));  // east pung
  CHECK(has_fan(best->second, fan::kSeatWind));       // south pung
}
