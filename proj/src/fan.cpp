#include "mx/fan.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

namespace mx {

// ---------------------------------------------------------------------------
// Catalog

FanCatalog FanCatalog::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fan catalog: " + path);
  nlohmann::json j;
  in >> j;
  FanCatalog cat;
  cat.fans_.resize(kNumFans);
  int n = 0;
  for (const auto& e : j.at("fans")) {
    FanInfo f;
    f.id = e.at("id").get<int>();
    f.name = e.at("name").get<std::string>();
    f.points = e.at("points").get<int>();
    f.major = e.at("major").get<bool>();
    f.implemented = e.at("implemented").get<bool>();
    for (const auto& x : e.at("excludes")) f.excludes.push_back(x.get<uint8_t>());
    if (f.id < 0 || f.id >= kNumFans) throw std::runtime_error("fan id out of range");
    cat.fans_[f.id] = f;
    ++n;
  }
  if (n != kNumFans) throw std::runtime_error("fan catalog must have 80 entries");
  int majors = 0;
  for (const auto& f : cat.fans_) majors += f.major;
  if (majors != 56) throw std::runtime_error("fan catalog must mark 56 major fans");
  return cat;
}

const FanCatalog& FanCatalog::instance() {
  static FanCatalog cat = FanCatalog::load(std::string(MX_DATA_DIR) + "/fans.json");
  return cat;
}

std::optional<int> FanCatalog::id_by_name(const std::string& name) const {
  for (const auto& f : fans_) {
    if (f.name == name) return f.id;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Suit splits

namespace detail {

namespace {

uint32_t pack_counts(const std::array<uint8_t, 9>& c) {
  uint32_t key = 0;
  for (int i = 8; i >= 0; --i) key = key * 5 + c[i];
  return key;
}

void enumerate_splits(std::array<uint8_t, 9>& c, int rank, bool pair_used,
                      SuitSplit& cur, std::vector<SuitSplit>& out) {
  while (rank < 9 && c[rank] == 0) ++rank;
  if (rank == 9) {
    out.push_back(cur);
    return;
  }
  // The lowest occupied rank must be consumed here; each consumption choice
  // is canonical, so every split is produced exactly once.
  if (c[rank] >= 3) {
    c[rank] -= 3;
    cur.pung_ranks[cur.n_pungs++] = static_cast<uint8_t>(rank);
    enumerate_splits(c, rank, pair_used, cur, out);
    cur.n_pungs--;
    c[rank] += 3;
  }
  if (!pair_used && c[rank] >= 2) {
    c[rank] -= 2;
    cur.pair_rank = static_cast<int8_t>(rank);
    enumerate_splits(c, rank, true, cur, out);
    cur.pair_rank = -1;
    c[rank] += 2;
  }
  // Whatever remains of this rank must start chows.
  if (rank <= 6) {
    int m = c[rank];
    if (m >= 1 && m <= 4 && c[rank + 1] >= m && c[rank + 2] >= m &&
        cur.n_chows + m <= 4) {
      c[rank] = 0;
      c[rank + 1] -= m;
      c[rank + 2] -= m;
      for (int i = 0; i < m; ++i) cur.chow_lows[cur.n_chows++] = static_cast<uint8_t>(rank);
      enumerate_splits(c, rank + 1, pair_used, cur, out);
      cur.n_chows -= m;
      c[rank] = static_cast<uint8_t>(m);
      c[rank + 1] += m;
      c[rank + 2] += m;
    }
  }
}

}  // namespace

const std::vector<SuitSplit>& suit_splits(const std::array<uint8_t, 9>& counts) {
  thread_local std::unordered_map<uint32_t, std::vector<SuitSplit>> memo;
  uint32_t key = pack_counts(counts);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  std::vector<SuitSplit> result;
  std::array<uint8_t, 9> c = counts;
  SuitSplit cur;
  enumerate_splits(c, 0, false, cur, result);
  return memo.emplace(key, std::move(result)).first->second;
}

uint16_t suit_split_mask(const std::array<uint8_t, 9>& counts) {
  thread_local std::unordered_map<uint32_t, uint16_t> memo;
  uint32_t key = pack_counts(counts);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  uint16_t mask = 0;
  for (const SuitSplit& s : suit_splits(counts)) {
    int sets = s.n_chows + s.n_pungs;
    mask |= static_cast<uint16_t>(1u << (sets * 2 + (s.pair_rank >= 0 ? 1 : 0)));
  }
  return memo.emplace(key, mask).first->second;
}

bool standard_feasible(const TileMultiset& concealed, int sets_needed) {
  // Honors first: counts of 2 (one pair at most) or 3 only.
  int honor_sets = 0;
  int pairs = 0;
  for (int k = 27; k < kNumTileKinds; ++k) {
    int c = concealed.counts[k];
    if (c == 0) continue;
    if (c == 3) {
      honor_sets++;
    } else if (c == 2) {
      if (++pairs > 1) return false;
    } else {
      return false;
    }
  }
  std::array<uint16_t, 3> masks;
  for (int s = 0; s < 3; ++s) {
    std::array<uint8_t, 9> c;
    std::copy_n(concealed.counts.begin() + s * 9, 9, c.begin());
    masks[s] = suit_split_mask(c);
    if (masks[s] == 0) return false;
  }
  for (int s0 = 0; s0 <= 4; ++s0) {
    for (int p0 = 0; p0 <= 1; ++p0) {
      if (!(masks[0] >> (s0 * 2 + p0) & 1)) continue;
      for (int s1 = 0; s0 + s1 <= 4; ++s1) {
        for (int p1 = 0; p0 + p1 <= 1; ++p1) {
          if (!(masks[1] >> (s1 * 2 + p1) & 1)) continue;
          int s2 = sets_needed - honor_sets - s0 - s1;
          int p2 = 1 - pairs - p0 - p1;
          if (s2 < 0 || s2 > 4 || p2 < 0) continue;
          if (masks[2] >> (s2 * 2 + p2) & 1) return true;
        }
      }
    }
  }
  return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Decomposition

namespace {

constexpr std::array<uint8_t, 13> kOrphanKinds = {0, 8, 9, 17, 18, 26, 27, 28, 29, 30, 31, 32, 33};

bool is_orphan(int k) {
  Tile t(k);
  return t.is_honor() || t.rank() == 1 || t.rank() == 9;
}

TileMultiset pattern_tiles(const TileMultiset& hand, const std::vector<Meld>& melds) {
  TileMultiset all = hand;
  for (const Meld& m : melds) {
    TileMultiset mt = m.tiles();
    for (int k = 0; k < kNumTileKinds; ++k) all.counts[k] += mt.counts[k];
  }
  return all;
}

std::vector<DecompSet> meld_sets(const std::vector<Meld>& melds) {
  std::vector<DecompSet> out;
  for (const Meld& m : melds) {
    out.push_back(DecompSet{m.kind, m.tile, m.kind != MeldKind::ConcealedKong});
  }
  return out;
}

// knit tile for rank class c (ranks c+1, c+4, c+7) and suit s
int knit_tile(int suit, int cls, int step) { return suit * 9 + cls + 3 * step; }

void add_standard_decompositions(const TileMultiset& hand, const std::vector<Meld>& melds,
                                 std::vector<Decomposition>& out) {
  int sets_needed = 4 - static_cast<int>(melds.size());
  if (sets_needed < 0) return;

  // Honors decompose one way only.
  std::vector<DecompSet> honor_sets;
  int honor_pair = -1;
  for (int k = 27; k < kNumTileKinds; ++k) {
    int c = hand.counts[k];
    if (c == 0) continue;
    if (c == 3) {
      honor_sets.push_back(DecompSet{MeldKind::Pung, Tile(k), false});
    } else if (c == 2 && honor_pair < 0) {
      honor_pair = k;
    } else {
      return;
    }
  }

  std::array<const std::vector<detail::SuitSplit>*, 3> splits;
  for (int s = 0; s < 3; ++s) {
    std::array<uint8_t, 9> c;
    std::copy_n(hand.counts.begin() + s * 9, 9, c.begin());
    splits[s] = &detail::suit_splits(c);
    if (splits[s]->empty()) return;
  }

  TileMultiset all = pattern_tiles(hand, melds);
  std::vector<DecompSet> base = meld_sets(melds);
  for (const auto& d : honor_sets) base.push_back(d);

  for (const auto& s0 : *splits[0]) {
    for (const auto& s1 : *splits[1]) {
      for (const auto& s2 : *splits[2]) {
        int sets = static_cast<int>(honor_sets.size()) + s0.n_chows + s0.n_pungs +
                   s1.n_chows + s1.n_pungs + s2.n_chows + s2.n_pungs;
        int pairs = (honor_pair >= 0) + (s0.pair_rank >= 0) + (s1.pair_rank >= 0) +
                    (s2.pair_rank >= 0);
        if (sets != sets_needed || pairs != 1) continue;
        Decomposition d;
        d.kind = Decomposition::Kind::Standard;
        d.sets = base;
        const detail::SuitSplit* ss[3] = {&s0, &s1, &s2};
        for (int s = 0; s < 3; ++s) {
          for (int i = 0; i < ss[s]->n_chows; ++i) {
            d.sets.push_back(DecompSet{MeldKind::Chow, Tile(s * 9 + ss[s]->chow_lows[i]), false});
          }
          for (int i = 0; i < ss[s]->n_pungs; ++i) {
            d.sets.push_back(DecompSet{MeldKind::Pung, Tile(s * 9 + ss[s]->pung_ranks[i]), false});
          }
          if (ss[s]->pair_rank >= 0) d.pair = Tile(s * 9 + ss[s]->pair_rank);
        }
        if (honor_pair >= 0) d.pair = Tile(honor_pair);
        d.tiles = all;
        out.push_back(std::move(d));
      }
    }
  }
}

void add_special_decompositions(const TileMultiset& hand, const std::vector<Meld>& melds,
                                std::vector<Decomposition>& out) {
  int total = hand.total();

  if (melds.empty() && total == 14) {
    // Seven pairs (four identical copies count as two pairs).
    bool all_even = true;
    for (int c : hand.counts) {
      if (c % 2 != 0) {
        all_even = false;
        break;
      }
    }
    if (all_even) {
      Decomposition d;
      d.kind = Decomposition::Kind::SevenPairs;
      d.tiles = hand;
      out.push_back(std::move(d));
    }

    // Thirteen orphans.
    bool orphans = true;
    int doubled = -1;
    for (int k = 0; k < kNumTileKinds && orphans; ++k) {
      int c = hand.counts[k];
      if (c == 0) continue;
      if (!is_orphan(k) || c > 2 || (c == 2 && doubled >= 0)) orphans = false;
      if (c == 2) doubled = k;
    }
    if (orphans && doubled >= 0) {
      for (uint8_t k : kOrphanKinds) orphans = orphans && hand.counts[k] >= 1;
      if (orphans) {
        Decomposition d;
        d.kind = Decomposition::Kind::ThirteenOrphans;
        d.pair = Tile(doubled);
        d.tiles = hand;
        out.push_back(std::move(d));
      }
    }

    // Lesser honors and knitted tiles: 14 distinct singles drawn from one
    // knitted-suit assignment plus the honors.
    bool singles = true;
    for (int c : hand.counts) singles = singles && c <= 1;
    if (singles) {
      int best_perm = -1;
      bool best_complete = false;
      static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
      for (int p = 0; p < 6; ++p) {
        bool ok = true;
        for (int k = 0; k < 27 && ok; ++k) {
          if (hand.counts[k] == 0) continue;
          int suit = k / 9, cls = k % 9 % 3;
          ok = kPerms[p][cls] == suit;
        }
        if (!ok) continue;
        bool complete = true;
        for (int cls = 0; cls < 3 && complete; ++cls) {
          for (int step = 0; step < 3 && complete; ++step) {
            complete = hand.counts[knit_tile(kPerms[p][cls], cls, step)] > 0;
          }
        }
        if (best_perm < 0 || (complete && !best_complete)) {
          best_perm = p;
          best_complete = complete;
        }
      }
      if (best_perm >= 0) {
        Decomposition d;
        d.kind = Decomposition::Kind::LesserHonorsKnitted;
        for (int c = 0; c < 3; ++c) d.knit[c] = static_cast<uint8_t>(kPerms[best_perm][c]);
        d.knit_complete = best_complete;
        d.tiles = hand;
        out.push_back(std::move(d));
      }
    }
  }

  // Knitted straight plus one regular set and a pair; the set may be melded.
  if (melds.size() <= 1 && total == 14 - 3 * static_cast<int>(melds.size())) {
    static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int p = 0; p < 6; ++p) {
      TileMultiset rest = hand;
      bool have = true;
      for (int cls = 0; cls < 3 && have; ++cls) {
        for (int step = 0; step < 3 && have; ++step) {
          int k = knit_tile(kPerms[p][cls], cls, step);
          if (rest.counts[k] == 0) {
            have = false;
          } else {
            rest.counts[k]--;
          }
        }
      }
      if (!have) continue;
      auto emit = [&](DecompSet set, Tile pair, bool has_set) {
        Decomposition d;
        d.kind = Decomposition::Kind::KnittedStraight;
        if (has_set) d.sets.push_back(set);
        d.pair = pair;
        for (int c = 0; c < 3; ++c) d.knit[c] = static_cast<uint8_t>(kPerms[p][c]);
        d.knit_complete = true;
        d.tiles = pattern_tiles(hand, melds);
        out.push_back(std::move(d));
      };
      if (melds.size() == 1) {
        for (int k = 0; k < kNumTileKinds; ++k) {
          if (rest.counts[k] == 2) {
            TileMultiset left = rest;
            left.counts[k] -= 2;
            if (left.total() == 0) emit(meld_sets(melds)[0], Tile(k), true);
          }
        }
      } else {
        // rest holds 5 tiles: set + pair
        for (int k = 0; k < kNumTileKinds; ++k) {
          if (rest.counts[k] < 2) continue;
          TileMultiset left = rest;
          left.counts[k] -= 2;
          for (int j = 0; j < kNumTileKinds; ++j) {
            if (left.counts[j] == 3) {
              emit(DecompSet{MeldKind::Pung, Tile(j), false}, Tile(k), true);
            }
          }
          for (int j = 0; j < 27; ++j) {
            if (j % 9 <= 6 && left.counts[j] >= 1 && left.counts[j + 1] >= 1 &&
                left.counts[j + 2] >= 1 &&
                left.counts[j] + left.counts[j + 1] + left.counts[j + 2] == 3) {
              emit(DecompSet{MeldKind::Chow, Tile(j), false}, Tile(k), true);
            }
          }
        }
      }
    }
  }
}

}  // namespace

std::vector<Decomposition> decompose(const TileMultiset& hand, const std::vector<Meld>& melds) {
  int pattern = hand.total() + 3 * static_cast<int>(melds.size());
  if (pattern != 14) {
    throw std::invalid_argument("decompose expects a 14-tile pattern, got " +
                                std::to_string(pattern));
  }
  std::vector<Decomposition> out;
  add_standard_decompositions(hand, melds, out);
  add_special_decompositions(hand, melds, out);
  return out;
}

// ---------------------------------------------------------------------------
// Fan detection

namespace {

struct TileScan {
  uint8_t suits_present = 0;
  bool winds = false, dragons = false, terminals = false, simples = false;
  int n_suits = 0;
};

TileScan scan_tiles(const TileMultiset& tiles) {
  TileScan s;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (tiles.counts[k] == 0) continue;
    Tile t(k);
    if (t.is_suited()) {
      s.suits_present |= 1 << (k / 9);
      if (t.is_terminal()) {
        s.terminals = true;
      } else {
        s.simples = true;
      }
    } else if (t.is_wind()) {
      s.winds = true;
    } else {
      s.dragons = true;
    }
  }
  s.n_suits = __builtin_popcount(s.suits_present);
  return s;
}

struct ChowRef {
  int suit;
  int low;  // 0-based
};

}  // namespace

FanResult score_fans(const Decomposition& d, const WinContext& ctx) {
  const FanCatalog& cat = FanCatalog::instance();
  std::array<bool, kNumFans> hit{};

  TileScan ts = scan_tiles(d.tiles);
  bool exposed_any = false;
  for (const auto& s : d.sets) exposed_any = exposed_any || s.exposed;

  // Concealment and the win mode.
  if (!exposed_any && ctx.self_drawn) hit[fan::kFullyConcealedHand] = true;
  if (!exposed_any && !ctx.self_drawn) hit[fan::kConcealedHand] = true;
  if (ctx.self_drawn) hit[fan::kSelfDrawn] = true;

  // Tile-composition fans.
  if (ts.n_suits == 3 && ts.winds && ts.dragons) hit[fan::kAllTypes] = true;
  if (ts.n_suits == 1 && (ts.winds || ts.dragons)) hit[fan::kHalfFlush] = true;
  if (ts.n_suits == 2) hit[fan::kOneVoidedSuit] = true;
  if (!ts.winds && !ts.dragons) hit[fan::kNoHonors] = true;
  if (!ts.winds && !ts.dragons && !ts.terminals) hit[fan::kAllSimples] = true;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (d.tiles.counts[k] == 4) {
      bool konged = false;
      for (const auto& s : d.sets) konged = konged || (s.tile.index == k && s.is_kong());
      if (!konged) hit[fan::kTileHog] = true;
    }
  }

  switch (d.kind) {
    case Decomposition::Kind::SevenPairs:
      hit[fan::kSevenPairs] = true;
      break;
    case Decomposition::Kind::ThirteenOrphans:
      hit[fan::kThirteenOrphans] = true;
      break;
    case Decomposition::Kind::LesserHonorsKnitted:
      hit[fan::kLesserHonorsKnitted] = true;
      if (d.knit_complete) hit[fan::kKnittedStraight] = true;
      break;
    case Decomposition::Kind::KnittedStraight:
      hit[fan::kKnittedStraight] = true;
      break;
    case Decomposition::Kind::Standard:
      break;
  }

  // Set-pattern fans.
  if (d.kind == Decomposition::Kind::Standard || d.kind == Decomposition::Kind::KnittedStraight) {
    std::vector<ChowRef> chows;
    std::vector<Tile> pungs;  // pungs and kongs
    int concealed_pungs = 0;
    for (const auto& s : d.sets) {
      if (s.kind == MeldKind::Chow) {
        chows.push_back(ChowRef{s.tile.index / 9, s.tile.index % 9});
      } else {
        pungs.push_back(s.tile);
        if (!s.exposed) concealed_pungs++;
        if (s.kind == MeldKind::ConcealedKong) hit[fan::kConcealedKong] = true;
        if (s.kind == MeldKind::ExposedKong) hit[fan::kMeldedKong] = true;
      }
    }

    for (int suit = 0; suit < 3; ++suit) {
      int have = 0;
      for (const auto& c : chows) {
        if (c.suit == suit && (c.low == 0 || c.low == 3 || c.low == 6)) have |= 1 << (c.low / 3);
      }
      if (have == 7) hit[fan::kPureStraight] = true;
    }
    for (size_t i = 0; i < chows.size(); ++i) {
      for (size_t j = i + 1; j < chows.size(); ++j) {
        const auto &a = chows[i], &b = chows[j];
        if (a.suit == b.suit && a.low == b.low) hit[fan::kPureDoubleChow] = true;
        if (a.suit != b.suit && a.low == b.low) hit[fan::kMixedDoubleChow] = true;
        if (a.suit == b.suit && std::abs(a.low - b.low) == 3) hit[fan::kShortStraight] = true;
        if (a.suit == b.suit && std::min(a.low, b.low) == 0 && std::max(a.low, b.low) == 6) {
          hit[fan::kTwoTerminalChows] = true;
        }
        for (size_t k = j + 1; k < chows.size(); ++k) {
          const auto& c = chows[k];
          if (a.suit == b.suit || b.suit == c.suit || a.suit == c.suit) continue;
          int lows[3] = {a.low, b.low, c.low};
          std::sort(lows, lows + 3);
          if (lows[0] == 0 && lows[1] == 3 && lows[2] == 6) hit[fan::kMixedStraight] = true;
          if (lows[0] == lows[1] && lows[1] == lows[2]) hit[fan::kMixedTripleChow] = true;
          if (lows[1] == lows[0] + 1 && lows[2] == lows[1] + 1) hit[fan::kMixedShiftedChows] = true;
        }
      }
    }
    if (pungs.size() == 4 && pungs[0].is_suited()) {
      int suit = pungs[0].index / 9;
      int ranks = 0;
      bool same = true;
      for (Tile p : pungs) same = same && p.index / 9 == suit && p.is_suited();
      if (same) {
        std::array<int, 4> r;
        for (int i = 0; i < 4; ++i) r[i] = pungs[i].index % 9;
        std::sort(r.begin(), r.end());
        ranks = (r[1] == r[0] + 1 && r[2] == r[1] + 1 && r[3] == r[2] + 1);
        if (ranks) hit[fan::kFourPureShiftedPungs] = true;
      }
    }
    if (d.kind == Decomposition::Kind::Standard && chows.size() == 4 && ts.n_suits == 1 &&
        !ts.winds && !ts.dragons && d.pair.is_suited() && d.pair.rank() == 5) {
      int lows[2] = {0, 0};
      for (const auto& c : chows) {
        if (c.low == 0) lows[0]++;
        if (c.low == 6) lows[1]++;
      }
      if (lows[0] == 2 && lows[1] == 2) hit[fan::kPureTerminalChows] = true;
    }
    if (d.kind == Decomposition::Kind::Standard && chows.size() == 4 && !d.pair.is_honor()) {
      hit[fan::kAllChows] = true;
    }
    if (d.kind == Decomposition::Kind::Standard && d.sets.size() == 4 && exposed_any) {
      bool all_exposed = true;
      for (const auto& s : d.sets) all_exposed = all_exposed && s.exposed;
      if (all_exposed && !ctx.self_drawn) hit[fan::kMeldedHand] = true;
    }

    Tile seat_wind(27 + ctx.seat);
    for (Tile p : pungs) {
      if (p.is_dragon()) hit[fan::kDragonPung] = true;
      if (p.index == ctx.prevalent_wind) hit[fan::kPrevalentWind] = true;
      if (p == seat_wind) hit[fan::kSeatWind] = true;
      if (p.is_terminal() ||
          (p.is_wind() && p.index != ctx.prevalent_wind && p != seat_wind)) {
        hit[fan::kPungTermHonors] = true;
      }
    }
    for (size_t i = 0; i < pungs.size(); ++i) {
      for (size_t j = i + 1; j < pungs.size(); ++j) {
        if (pungs[i].is_suited() && pungs[j].is_suited() &&
            pungs[i].index % 9 == pungs[j].index % 9 && pungs[i] != pungs[j]) {
          hit[fan::kDoublePung] = true;
        }
      }
    }
    if (concealed_pungs >= 2) hit[fan::kTwoConcealedPungs] = true;
  }

  // Exclusion rules, applied from the highest-valued fan down.
  std::vector<int> order;
  for (int id = 0; id < kNumFans; ++id) {
    if (hit[id]) order.push_back(id);
  }
  std::sort(order.begin(), order.end(), [&cat](int a, int b) {
    if (cat.points(a) != cat.points(b)) return cat.points(a) > cat.points(b);
    return a < b;
  });
  std::array<bool, kNumFans> suppressed{};
  FanResult res;
  for (int id : order) {
    if (suppressed[id]) continue;
    for (uint8_t ex : cat.info(id).excludes) suppressed[ex] = true;
    res.fans.push_back(static_cast<uint8_t>(id));
    res.total_points += cat.points(id);
  }
  std::sort(res.fans.begin(), res.fans.end());
  return res;
}

std::optional<std::pair<Decomposition, FanResult>> best_decomposition(
    const TileMultiset& hand, const std::vector<Meld>& melds, const WinContext& ctx) {
  std::optional<std::pair<Decomposition, FanResult>> best;
  for (auto& d : decompose(hand, melds)) {
    FanResult r = score_fans(d, ctx);
    if (!best || r.total_points > best->second.total_points ||
        (r.total_points == best->second.total_points && r.fans < best->second.fans)) {
      best = std::make_pair(std::move(d), std::move(r));
    }
  }
  return best;
}

bool is_winning(const TileMultiset& hand, const std::vector<Meld>& melds, const WinContext& ctx) {
  auto best = best_decomposition(hand, melds, ctx);
  return best && best->second.total_points >= kWinThreshold;
}

}  // namespace mx
