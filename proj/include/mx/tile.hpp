#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mx {

// Canonical tile indexing: Characters 0-8, Dots 9-17, Bamboo 18-26,
// winds E/S/W/N 27-30, dragons R/G/W 31-33. Flowers are not modeled.
inline constexpr int kNumTileKinds = 34;
inline constexpr int kCopiesPerKind = 4;
inline constexpr int kWallSize = 136;

enum class Suit : uint8_t { Characters = 0, Dots = 1, Bamboo = 2, Honors = 3 };

struct Tile {
  uint8_t index = 0;  // 0..33

  constexpr Tile() = default;
  constexpr explicit Tile(int idx) : index(static_cast<uint8_t>(idx)) {}

  constexpr Suit suit() const {
    return index < 27 ? static_cast<Suit>(index / 9) : Suit::Honors;
  }
  constexpr bool is_suited() const { return index < 27; }
  constexpr bool is_honor() const { return index >= 27; }
  constexpr bool is_wind() const { return index >= 27 && index <= 30; }
  constexpr bool is_dragon() const { return index >= 31; }
  // Rank 1..9 for suited tiles; honors have no rank.
  constexpr int rank() const { return is_suited() ? index % 9 + 1 : 0; }
  constexpr bool is_terminal() const {
    return is_suited() && (rank() == 1 || rank() == 9);
  }

  friend constexpr bool operator==(Tile a, Tile b) { return a.index == b.index; }
  friend constexpr bool operator!=(Tile a, Tile b) { return a.index != b.index; }
  friend constexpr bool operator<(Tile a, Tile b) { return a.index < b.index; }
};

// Parses "C5", "D7", "B9", "EW".."NW", "RD"/"GD"/"WD". Throws
// std::invalid_argument on anything else.
Tile parse_tile(const std::string& text);
std::string tile_name(Tile t);

// Counted collection over the 34 kinds. Used for hands, walls and targets.
struct TileMultiset {
  std::array<uint8_t, kNumTileKinds> counts{};

  int count(Tile t) const { return counts[t.index]; }
  int total() const {
    int s = 0;
    for (int c : counts) s += c;
    return s;
  }
  void add(Tile t, int n = 1) { counts[t.index] = static_cast<uint8_t>(counts[t.index] + n); }
  void remove(Tile t, int n = 1) { counts[t.index] = static_cast<uint8_t>(counts[t.index] - n); }
  bool contains(Tile t) const { return counts[t.index] > 0; }

  std::vector<Tile> expand() const;  // one entry per physical tile, ascending

  friend bool operator==(const TileMultiset& a, const TileMultiset& b) {
    return a.counts == b.counts;
  }
};

// Convenience for tests and tools: "C1 C2 C3 EW EW" or comma separated.
TileMultiset parse_hand(const std::string& text);
std::string hand_name(const TileMultiset& hand);

enum class MeldKind : uint8_t { Chow, Pung, ExposedKong, ConcealedKong };

// A declared set. For chows `tile` is the lowest tile of the run.
struct Meld {
  MeldKind kind = MeldKind::Pung;
  Tile tile;
  int claimed_from = -1;  // seat the claimed tile came from, -1 if none

  TileMultiset tiles() const {
    TileMultiset m;
    if (kind == MeldKind::Chow) {
      m.add(tile);
      m.add(Tile(tile.index + 1));
      m.add(Tile(tile.index + 2));
    } else {
      m.add(tile, kind == MeldKind::Pung ? 3 : 4);
    }
    return m;
  }
  // Tiles counted toward the 14-tile winning pattern (a kong still fills
  // one three-tile set slot; its fourth tile sits outside the pattern).
  int pattern_size() const { return 3; }
  bool is_kong() const {
    return kind == MeldKind::ExposedKong || kind == MeldKind::ConcealedKong;
  }
  bool concealed() const { return kind == MeldKind::ConcealedKong; }

  friend bool operator==(const Meld& a, const Meld& b) {
    return a.kind == b.kind && a.tile == b.tile && a.claimed_from == b.claimed_from;
  }
};

}  // namespace mx
