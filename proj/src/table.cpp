#include "mx/table.hpp"

#include <algorithm>
#include <stdexcept>

namespace mx {

const char* event_type_name(Event::Type t) {
  switch (t) {
    case Event::Type::Deal: return "deal";
    case Event::Type::Draw: return "draw";
    case Event::Type::Discard: return "discard";
    case Event::Type::Chow: return "chow";
    case Event::Type::Pung: return "pung";
    case Event::Type::KongClaim: return "kong_claim";
    case Event::Type::KongConvert: return "kong_convert";
    case Event::Type::KongConcealed: return "kong_concealed";
    case Event::Type::Win: return "win";
    case Event::Type::Drawn: return "drawn";
  }
  return "?";
}

Event::Type parse_event_type(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Event::Type::Drawn); ++i) {
    if (s == event_type_name(static_cast<Event::Type>(i))) return static_cast<Event::Type>(i);
  }
  throw std::invalid_argument("unknown event type: " + s);
}

TableState TableState::deal_from_wall(std::vector<Tile> wall) {
  if (wall.size() != kWallSize) throw std::invalid_argument("wall must have 136 tiles");
  TableState st;
  st.wall = std::move(wall);
  return st;
}

void TableState::apply_event(const Event& e) {
  if (finished) throw std::invalid_argument("event after game end");
  auto need = [&](bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(std::string("illegal event: ") + msg);
  };
  switch (e.type) {
    case Event::Type::Deal:
    case Event::Type::Draw: {
      need(!wall.empty(), "wall empty");
      need(wall.back() == e.tile, "draw does not match wall");
      wall.pop_back();
      hands[e.seat].add(e.tile);
      pending_discard.reset();
      break;
    }
    case Event::Type::Discard: {
      need(hands[e.seat].contains(e.tile), "discarding unheld tile");
      hands[e.seat].remove(e.tile);
      discards[e.seat].push_back(e.tile);
      pending_discard = std::make_pair(e.tile, e.seat);
      break;
    }
    case Event::Type::Chow: {
      need(pending_discard.has_value(), "no discard to claim");
      auto [t, from] = *pending_discard;
      need(t == e.tile, "claim does not match discard");
      need(from == (e.seat + 3) % kNumSeats, "chow not from the left");
      for (int k = e.low.index; k <= e.low.index + 2; ++k) {
        if (k != e.tile.index) {
          need(hands[e.seat].counts[k] > 0, "missing chow tile");
          hands[e.seat].remove(Tile(k));
        }
      }
      discards[from].pop_back();
      melds[e.seat].push_back(Meld{MeldKind::Chow, e.low, from});
      pending_discard.reset();
      break;
    }
    case Event::Type::Pung: {
      need(pending_discard.has_value(), "no discard to claim");
      auto [t, from] = *pending_discard;
      need(t == e.tile && from != e.seat, "bad pung claim");
      need(hands[e.seat].count(e.tile) >= 2, "pung needs two held copies");
      hands[e.seat].remove(e.tile, 2);
      discards[from].pop_back();
      melds[e.seat].push_back(Meld{MeldKind::Pung, e.tile, from});
      pending_discard.reset();
      break;
    }
    case Event::Type::KongClaim: {
      need(pending_discard.has_value(), "no discard to claim");
      auto [t, from] = *pending_discard;
      need(t == e.tile && from != e.seat, "bad kong claim");
      need(hands[e.seat].count(e.tile) >= 3, "kong needs three held copies");
      hands[e.seat].remove(e.tile, 3);
      discards[from].pop_back();
      melds[e.seat].push_back(Meld{MeldKind::ExposedKong, e.tile, from});
      pending_discard.reset();
      break;
    }
    case Event::Type::KongConvert: {
      bool found = false;
      for (auto& m : melds[e.seat]) {
        if (m.kind == MeldKind::Pung && m.tile == e.tile) {
          need(hands[e.seat].contains(e.tile), "fourth copy not in hand");
          hands[e.seat].remove(e.tile);
          m.kind = MeldKind::ExposedKong;
          found = true;
          break;
        }
      }
      need(found, "no exposed pung to convert");
      pending_discard.reset();
      break;
    }
    case Event::Type::KongConcealed: {
      need(hands[e.seat].count(e.tile) == 4, "concealed kong needs four copies");
      hands[e.seat].remove(e.tile, 4);
      melds[e.seat].push_back(Meld{MeldKind::ConcealedKong, e.tile, -1});
      pending_discard.reset();
      break;
    }
    case Event::Type::Win: {
      winner = e.seat;
      finished = true;
      break;
    }
    case Event::Type::Drawn: {
      finished = true;
      break;
    }
  }
  step++;
}

Observation TableState::observation(int seat, const LastEvent& last) const {
  Observation obs;
  obs.seat = seat;
  obs.hand = hands[seat];
  obs.own_melds = melds[seat];
  obs.all_discards = discards;
  for (int s = 0; s < kNumSeats; ++s) {
    for (const Meld& m : melds[s]) {
      if (s != seat && m.concealed()) {
        obs.hidden_kongs[s]++;
      } else {
        obs.all_exposed_melds[s].push_back(m);
      }
    }
  }
  obs.game_length = std::max(1, decision_counts[seat]);
  obs.last_event = last;
  return obs;
}

void TableState::check_conservation() const {
  std::array<int, kNumTileKinds> total{};
  for (Tile t : wall) total[t.index]++;
  for (int s = 0; s < kNumSeats; ++s) {
    for (int k = 0; k < kNumTileKinds; ++k) total[k] += hands[s].counts[k];
    for (Tile t : discards[s]) total[t.index]++;
    for (const Meld& m : melds[s]) {
      TileMultiset mt = m.tiles();
      for (int k = 0; k < kNumTileKinds; ++k) total[k] += mt.counts[k];
    }
  }
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (total[k] != kCopiesPerKind) {
      throw std::runtime_error("tile conservation violated for " + tile_name(Tile(k)));
    }
  }
}

}  // namespace mx
