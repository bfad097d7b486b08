#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mx/fan.hpp"
#include "mx/observation.hpp"
#include "mx/tile.hpp"

namespace mx {

// A table event, the unit of the replayable game log.
struct Event {
  enum class Type : uint8_t {
    Deal,          // one starting tile for `seat`
    Draw,          // seat drew `tile`
    Discard,       // seat discarded `tile`
    Chow,          // seat claimed `tile` completing the run starting at `low`
    Pung,          // seat claimed `tile`
    KongClaim,     // seat claimed `tile` holding three copies
    KongConvert,   // seat extended an exposed pung of `tile`
    KongConcealed, // seat declared a concealed kong of `tile`
    Win,           // seat won; the winning tile is the previous draw/discard
    Drawn,         // wall exhausted, nobody won
  };
  Type type = Type::Draw;
  int seat = -1;
  Tile tile;
  Tile low;  // chow runs only
  int step = 0;
};

const char* event_type_name(Event::Type t);
Event::Type parse_event_type(const std::string& s);

// Full table state, advanced event by event. Individual seats see it only
// through observation().
struct TableState {
  std::vector<Tile> wall;  // back() is the next draw
  std::array<TileMultiset, kNumSeats> hands;
  std::array<std::vector<Meld>, kNumSeats> melds;
  std::array<std::vector<Tile>, kNumSeats> discards;
  std::array<int, kNumSeats> decision_counts{};  // per-seat L
  int step = 0;
  int winner = -1;
  bool finished = false;
  std::optional<std::pair<Tile, int>> pending_discard;  // tile, discarder

  static TableState deal_from_wall(std::vector<Tile> wall);

  // Applies one event, validating legality; throws std::invalid_argument on
  // an illegal event.
  void apply_event(const Event& e);

  // What `seat` can see, with the given last-event context.
  Observation observation(int seat, const LastEvent& last) const;

  // Invariant: each kind sums to four across wall, hands, discards and melds.
  void check_conservation() const;
};

}  // namespace mx
