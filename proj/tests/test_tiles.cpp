#include "doctest.h"
#include "mx/tile.hpp"

#include <stdexcept>

using namespace mx;

TEST_CASE("tile codec round trips and matches canonical indexing") {
  CHECK(parse_tile("B9").index == 26);
  CHECK(parse_tile("B9").rank() == 9);
  CHECK(parse_tile("B9").suit() == Suit::Bamboo);
  CHECK(parse_tile("WD").index == 33);
  CHECK(tile_name(parse_tile("D7")) == "D7");
  for (int k = 0; k < kNumTileKinds; ++k) {
    CHECK(parse_tile(tile_name(Tile(k))).index == k);
  }
  CHECK(parse_tile("C1").index == 0);
  CHECK(parse_tile("D1").index == 9);
  CHECK(parse_tile("EW").index == 27);
  CHECK(parse_tile("RD").index == 31);
}

TEST_CASE("tile codec rejects bad names") {
  CHECK_THROWS_AS(parse_tile("Z3"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tile("B0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tile("XW"), std::invalid_argument);
  CHECK_THROWS_AS(parse_tile(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_tile("B10"), std::invalid_argument);
}

TEST_CASE("tile classification") {
  CHECK(parse_tile("C1").is_terminal());
  CHECK(parse_tile("B9").is_terminal());
  CHECK_FALSE(parse_tile("D5").is_terminal());
  CHECK(parse_tile("EW").is_wind());
  CHECK(parse_tile("WD").is_dragon());
  CHECK_FALSE(parse_tile("WD").is_suited());
  CHECK(parse_tile("EW").rank() == 0);
}

TEST_CASE("multiset parsing and totals") {
  TileMultiset h = parse_hand("C1 C1 C2 EW EW EW WD");
  CHECK(h.total() == 7);
  CHECK(h.count(parse_tile("C1")) == 2);
  CHECK(h.count(parse_tile("EW")) == 3);
  CHECK(hand_name(h) == "C1 C1 C2 EW EW EW WD");
  CHECK(h.expand().size() == 7);
}

TEST_CASE("meld tiles") {
  Meld chow{MeldKind::Chow, parse_tile("D4"), 2};
  CHECK(chow.tiles().count(parse_tile("D4")) == 1);
  CHECK(chow.tiles().count(parse_tile("D6")) == 1);
  Meld kong{MeldKind::ExposedKong, parse_tile("RD"), 1};
  CHECK(kong.tiles().total() == 4);
  CHECK(kong.is_kong());
  CHECK(kong.pattern_size() == 3);
}
