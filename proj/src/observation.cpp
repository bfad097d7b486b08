#include "mx/observation.hpp"

#include <stdexcept>

namespace mx {

UnshownCounter compute_unshown(const Observation& obs) {
  std::array<int, kNumTileKinds> visible{};
  for (int k = 0; k < kNumTileKinds; ++k) visible[k] = obs.hand.counts[k];
  for (const auto& pile : obs.all_discards) {
    for (Tile t : pile) visible[t.index]++;
  }
  for (int s = 0; s < kNumSeats; ++s) {
    for (const Meld& m : obs.all_exposed_melds[s]) {
      if (s != obs.seat && m.concealed()) continue;  // face-down, not visible
      TileMultiset mt = m.tiles();
      for (int k = 0; k < kNumTileKinds; ++k) visible[k] += mt.counts[k];
    }
  }
  UnshownCounter u;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (visible[k] > kCopiesPerKind) {
      throw std::invalid_argument("inconsistent observation: >4 visible copies of " +
                                  tile_name(Tile(k)));
    }
    u.counts[k] = kCopiesPerKind - visible[k];
  }
  return u;
}

Action Action::from_output_index(int idx) {
  if (idx < 0 || idx >= kOutputSize) throw std::invalid_argument("bad output index");
  if (idx < kNumTileKinds) return Action::discard(Tile(idx));
  return Action{static_cast<Tag>(idx - kNumTileKinds + 1), Tile()};
}

std::string action_name(const Action& a) {
  switch (a.tag) {
    case Action::Tag::Discard: return "discard " + tile_name(a.tile);
    case Action::Tag::Pass: return "pass";
    case Action::Tag::ChowLow: return "chow_low";
    case Action::Tag::ChowMid: return "chow_mid";
    case Action::Tag::ChowHigh: return "chow_high";
    case Action::Tag::Pung: return "pung";
    case Action::Tag::KongExposed: return "kong " + tile_name(a.tile);
    case Action::Tag::KongConcealed: return "ckong " + tile_name(a.tile);
  }
  return "?";
}

Action parse_action(const std::string& s) {
  if (s == "pass") return Action::pass();
  if (s == "chow_low") return Action{Action::Tag::ChowLow, Tile()};
  if (s == "chow_mid") return Action{Action::Tag::ChowMid, Tile()};
  if (s == "chow_high") return Action{Action::Tag::ChowHigh, Tile()};
  if (s == "pung") return Action{Action::Tag::Pung, Tile()};
  auto sp = s.find(' ');
  if (sp != std::string::npos) {
    std::string head = s.substr(0, sp), tail = s.substr(sp + 1);
    if (head == "discard") return Action::discard(parse_tile(tail));
    if (head == "kong") return Action{Action::Tag::KongExposed, parse_tile(tail)};
    if (head == "ckong") return Action{Action::Tag::KongConcealed, parse_tile(tail)};
  }
  throw std::invalid_argument("not an action: '" + s + "'");
}

bool chow_uses(Action::Tag variant, Tile claimed, Tile* a, Tile* b) {
  if (!claimed.is_suited()) return false;
  int r = claimed.rank();
  switch (variant) {
    case Action::Tag::ChowLow:
      if (r > 7) return false;
      *a = Tile(claimed.index + 1);
      *b = Tile(claimed.index + 2);
      return true;
    case Action::Tag::ChowMid:
      if (r < 2 || r > 8) return false;
      *a = Tile(claimed.index - 1);
      *b = Tile(claimed.index + 1);
      return true;
    case Action::Tag::ChowHigh:
      if (r < 3) return false;
      *a = Tile(claimed.index - 2);
      *b = Tile(claimed.index - 1);
      return true;
    default:
      return false;
  }
}

std::vector<Action> legal_actions(const Observation& obs) {
  std::vector<Action> out;
  if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) {
    for (int k = 0; k < kNumTileKinds; ++k) {
      if (obs.hand.counts[k] > 0) out.push_back(Action::discard(Tile(k)));
    }
    return out;
  }
  out.push_back(Action::pass());
  Tile claimed = obs.last_event.tile;
  if (obs.last_event.seat == obs.left_neighbor()) {
    for (auto v : {Action::Tag::ChowLow, Action::Tag::ChowMid, Action::Tag::ChowHigh}) {
      Tile a, b;
      if (chow_uses(v, claimed, &a, &b) && obs.hand.contains(a) && obs.hand.contains(b)) {
        out.push_back(Action{v, Tile()});
      }
    }
  }
  if (obs.hand.count(claimed) >= 2) out.push_back(Action{Action::Tag::Pung, Tile()});
  return out;
}

Action kong_resolution(const Observation& obs, const Action& intended) {
  if (intended.tag == Action::Tag::Discard) {
    Tile t = intended.tile;
    for (const Meld& m : obs.own_melds) {
      if (m.kind == MeldKind::Pung && m.tile == t && obs.hand.count(t) >= 1) {
        return Action{Action::Tag::KongExposed, t};  // converting a melded pung
      }
    }
    if (obs.last_event.kind == LastEvent::Kind::SelfDraw &&
        obs.last_event.tile == t && obs.hand.count(t) == 4) {
      return Action{Action::Tag::KongConcealed, t};  // drew the fourth copy
    }
    return intended;
  }
  if (intended.tag == Action::Tag::Pung &&
      obs.last_event.kind == LastEvent::Kind::OtherDiscard &&
      obs.hand.count(obs.last_event.tile) >= 3) {
    return Action{Action::Tag::KongExposed, obs.last_event.tile};
  }
  return intended;
}

uint64_t observation_digest(const Observation& obs) {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(obs.seat);
  mix(obs.game_length);
  for (int k = 0; k < kNumTileKinds; ++k) mix(obs.hand.counts[k]);
  for (const Meld& m : obs.own_melds) {
    mix(static_cast<uint64_t>(m.kind) * 64 + m.tile.index);
  }
  for (int s = 0; s < kNumSeats; ++s) {
    mix(0xd15c0ull + s);
    for (Tile t : obs.all_discards[s]) mix(t.index);
    for (const Meld& m : obs.all_exposed_melds[s]) {
      mix(0x3e1dull + static_cast<uint64_t>(m.kind) * 64 + m.tile.index);
    }
    mix(obs.hidden_kongs[s]);
  }
  mix(static_cast<uint64_t>(obs.last_event.kind));
  mix(obs.last_event.tile.index);
  mix(static_cast<uint64_t>(obs.last_event.seat + 1));
  return h;
}

}  // namespace mx
