#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mx/tile.hpp"

namespace mx {

inline constexpr int kNumSeats = 4;

// What one seat just saw happen before it has to act.
struct LastEvent {
  enum class Kind : uint8_t {
    SelfDraw,      // own draw, must discard
    OtherDiscard,  // someone else discarded, may react
    AfterClaim,    // own chow/pung just executed, must discard
  };
  Kind kind = Kind::SelfDraw;
  Tile tile;      // drawn or discarded tile (unset for AfterClaim)
  int seat = -1;  // discarder for OtherDiscard
};

// Everything a single seat can see at a decision point.
struct Observation {
  int seat = 0;
  TileMultiset hand;
  std::vector<Meld> own_melds;
  std::array<std::vector<Tile>, kNumSeats> all_discards;  // tiles still in the piles
  std::array<std::vector<Meld>, kNumSeats> all_exposed_melds;
  std::array<int, kNumSeats> hidden_kongs{};  // others' concealed kongs, kinds unknown
  int game_length = 1;  // this seat's decision counter, starts at 1
  LastEvent last_event;

  int left_neighbor() const { return (seat + 3) % kNumSeats; }
};

// Per-kind count of tiles this seat cannot see (wall + other hands).
struct UnshownCounter {
  std::array<int, kNumTileKinds> counts{};

  int operator[](Tile t) const { return counts[t.index]; }
  int total() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
  }
};

// U[t] = 4 - copies of t visible to obs.seat. Throws std::invalid_argument
// if any kind has more than four visible copies.
UnshownCounter compute_unshown(const Observation& obs);

// Actions. The learnable output space is 39-way: 34 discard heads plus the 5
// reaction heads (pass, three chow positions, pung). Kong actions are never
// predicted; they are produced by kong_resolution and executed directly.
struct Action {
  enum class Tag : uint8_t {
    Discard,
    Pass,
    ChowLow,   // claimed tile is the low tile of the run
    ChowMid,
    ChowHigh,
    Pung,
    KongExposed,    // resolved forms, outside the 39-way space
    KongConcealed,
  };
  Tag tag = Tag::Pass;
  Tile tile;  // for Discard and the kong forms

  static Action discard(Tile t) { return Action{Tag::Discard, t}; }
  static Action pass() { return Action{Tag::Pass, Tile()}; }

  bool in_output_space() const { return tag <= Tag::Pung; }
  // Index into the combined 39-way output: 0..33 discards, 34..38 reactions.
  int output_index() const {
    return tag == Tag::Discard ? tile.index
                               : kNumTileKinds + static_cast<int>(tag) - 1;
  }
  static Action from_output_index(int idx);

  bool is_reaction() const { return tag != Tag::Discard; }

  friend bool operator==(const Action& a, const Action& b) {
    return a.tag == b.tag &&
           (a.tag != Tag::Discard && a.tag < Tag::KongExposed
                ? true
                : a.tile == b.tile);
  }
};

std::string action_name(const Action& a);
Action parse_action(const std::string& s);

inline constexpr int kOutputSize = 39;
inline constexpr int kReactionOutputs = 5;

// Legal moves at obs. After a self draw (or a claim) every held kind may be
// discarded; after another seat's discard the seat may always pass, pung with
// two held copies, and chow from the left neighbor with the two complements.
std::vector<Action> legal_actions(const Observation& obs);

// Tiles the chow variant consumes from hand, given the claimed tile.
// Returns false when the variant is impossible (edge ranks, honors).
bool chow_uses(Action::Tag variant, Tile claimed, Tile* a, Tile* b);

// Rewrites `intended` into the kong it implies, when
//  (a) it discards the fourth copy of an exposed pung's tile,
//  (b) it discards a just-drawn fourth copy of a concealed triplet, or
//  (c) it pungs a discard while the hand already holds three copies.
// Otherwise returns `intended` unchanged. Idempotent.
Action kong_resolution(const Observation& obs, const Action& intended);

uint64_t observation_digest(const Observation& obs);

}  // namespace mx
