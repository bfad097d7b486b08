#include "mx/goal.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

namespace mx {

namespace {

constexpr int kInf = 1 << 20;
constexpr int64_t kNodeCap = 6'000'000;  // per-level guard against pathological hands

WinContext neutral_context(const Observation& obs) {
  // Goal fans are evaluated as a win by discard; the self-draw bonus is a
  // property of the final acquisition, not of the target.
  WinContext ctx;
  ctx.self_drawn = false;
  ctx.seat = obs.seat;
  return ctx;
}

struct TargetKey {
  std::array<uint8_t, kNumTileKinds> counts;
  bool operator==(const TargetKey& o) const { return counts == o.counts; }
};

struct TargetKeyHash {
  size_t operator()(const TargetKey& k) const {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (uint8_t c : k.counts) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return static_cast<size_t>(h);
  }
};

struct Candidate {
  Decomposition dec;
  FanResult fans;
};

using LevelMap = std::unordered_map<TargetKey, Candidate, TargetKeyHash>;

Goal make_goal(const TileMultiset& hand, const TileMultiset& target, const Candidate& c) {
  Goal g;
  g.target = target;
  for (int k = 0; k < kNumTileKinds; ++k) {
    int diff = target.counts[k] - hand.counts[k];
    if (diff > 0) {
      GoalMissing m;
      m.tile = Tile(k);
      m.count = static_cast<uint8_t>(diff);
      if (hand.counts[k] == 2) {
        for (const auto& s : c.dec.sets) {
          if (s.kind == MeldKind::Pung && !s.exposed && s.tile.index == k) m.pung_able = true;
        }
      }
      if (Tile(k).is_suited()) {
        for (const auto& s : c.dec.sets) {
          if (s.kind != MeldKind::Chow || s.exposed) continue;
          int low = s.tile.index;
          if (k < low || k > low + 2) continue;
          bool held = true;
          for (int j = low; j <= low + 2; ++j) {
            if (j != k && hand.counts[j] == 0) held = false;
          }
          if (held) m.chow_able = true;
        }
      }
      g.shanten += diff;
      g.missing.push_back(m);
    } else if (diff < 0) {
      g.redundant.push_back(GoalRedundant{Tile(k), static_cast<uint8_t>(-diff)});
    }
  }
  g.fans = c.fans.fans;
  g.fan_points = c.fans.total_points;
  return g;
}

bool goal_order(const Goal& a, const Goal& b) {
  if (a.shanten != b.shanten) return a.shanten < b.shanten;
  if (a.fan_points != b.fan_points) return a.fan_points > b.fan_points;
  int ma = a.missing.empty() ? kNumTileKinds : a.missing.front().tile.index;
  int mb = b.missing.empty() ? kNumTileKinds : b.missing.front().tile.index;
  if (ma != mb) return ma < mb;
  return a.target.counts < b.target.counts;
}

// ---------------------------------------------------------------------------
// Level enumerator: all structurally complete targets at an exact distance.

class LevelEnumerator {
 public:
  explicit LevelEnumerator(const Observation& obs)
      : hand_(obs.hand), melds_(obs.own_melds) {
    sets_needed_ = 4 - static_cast<int>(melds_.size());
    for (int k = 0; k < kNumTileKinds; ++k) cap_[k] = kCopiesPerKind;
    for (const Meld& m : melds_) {
      TileMultiset mt = m.tiles();
      for (int k = 0; k < kNumTileKinds; ++k) cap_[k] -= mt.counts[k];
    }
    meld_pattern_ = TileMultiset{};
    for (const Meld& m : melds_) {
      TileMultiset mt = m.tiles();
      for (int k = 0; k < kNumTileKinds; ++k) meld_pattern_.counts[k] += mt.counts[k];
    }
    build_group_tables();
  }

  int structural_min() const { return structural_min_; }
  bool truncated() const { return truncated_; }

  using Sink = std::function<void(const TileMultiset&, Decomposition&&)>;

  void enumerate(int d, const Sink& sink) {
    level_ = d;
    sink_ = &sink;
    nodes_ = 0;
    truncated_ = false;
    std::fill(target_.counts.begin(), target_.counts.end(), 0);
    n_chows_ = n_pungs_ = 0;
    pair_tile_ = -1;
    rec_group(0, 0, false, 0);
    enumerate_seven_pairs(d);
    enumerate_thirteen_orphans(d);
    enumerate_knitted(d);
  }

 private:
  // --- shared emission state
  const TileMultiset& hand_;
  const std::vector<Meld>& melds_;
  TileMultiset meld_pattern_;
  int sets_needed_ = 4;
  std::array<int, kNumTileKinds> cap_{};
  int level_ = 0;
  const Sink* sink_ = nullptr;
  int64_t nodes_ = 0;
  bool truncated_ = false;

  TileMultiset target_;
  std::array<std::pair<uint8_t, uint8_t>, 4> chows_{};  // (suit, low)
  std::array<uint8_t, 4> pungs_{};                      // tile kind
  int n_chows_ = 0, n_pungs_ = 0;
  int pair_tile_ = -1;

  // min cost of contributing exactly (k sets, p pairs) per group, and the
  // same combined over groups g..3
  int mincost_[4][5][2];
  int suffix_[5][5][2];
  int structural_min_ = kInf;

  void build_group_tables() {
    for (int g = 0; g < 3; ++g) suited_dp(g);
    honors_dp();
    for (int s = 0; s <= 4; ++s) {
      for (int p = 0; p <= 1; ++p) suffix_[4][s][p] = (s == 0 && p == 0) ? 0 : kInf;
    }
    for (int g = 3; g >= 0; --g) {
      for (int s = 0; s <= 4; ++s) {
        for (int p = 0; p <= 1; ++p) {
          int best = kInf;
          for (int k = 0; k <= s; ++k) {
            for (int q = 0; q <= p; ++q) {
              if (mincost_[g][k][q] >= kInf || suffix_[g + 1][s - k][p - q] >= kInf) continue;
              best = std::min(best, mincost_[g][k][q] + suffix_[g + 1][s - k][p - q]);
            }
          }
          suffix_[g][s][p] = best;
        }
      }
    }
    structural_min_ = suffix_[0][sets_needed_][1];
  }

  void suited_dp(int suit) {
    // state: chows begun two ranks back (a) and one rank back (b), sets, pair
    static constexpr int A = 5, B = 5, K = 5, P = 2;
    auto idx = [](int a, int b, int k, int p) { return ((a * B + b) * K + k) * P + p; };
    std::vector<int> cur(A * B * K * P, kInf), next(A * B * K * P, kInf);
    cur[idx(0, 0, 0, 0)] = 0;
    for (int r = 0; r < 9; ++r) {
      std::fill(next.begin(), next.end(), kInf);
      int tk = suit * 9 + r;
      for (int a = 0; a < A; ++a) {
        for (int b = 0; b < B; ++b) {
          for (int k = 0; k < K; ++k) {
            for (int p = 0; p < P; ++p) {
              int base = cur[idx(a, b, k, p)];
              if (base >= kInf) continue;
              int xmax = r <= 6 ? 4 - k : 0;
              for (int x = 0; x <= xmax; ++x) {
                for (int y = 0; y <= 1 && k + x + y <= 4; ++y) {
                  for (int z = 0; z <= 1 - p; ++z) {
                    int t = a + b + x + 3 * y + 2 * z;
                    if (t > cap_[tk]) continue;
                    int c = base + std::max(0, t - hand_.counts[tk]);
                    int& slot = next[idx(b, x, k + x + y, p | z)];
                    slot = std::min(slot, c);
                  }
                }
              }
            }
          }
        }
      }
      cur.swap(next);
    }
    for (int k = 0; k <= 4; ++k) {
      for (int p = 0; p <= 1; ++p) mincost_[suit][k][p] = cur[idx(0, 0, k, p)];
    }
  }

  void honors_dp() {
    for (int k = 0; k <= 4; ++k) {
      for (int p = 0; p <= 1; ++p) mincost_[3][k][p] = kInf;
    }
    // dp over the seven honor kinds
    int dp[5][2];
    for (auto& row : dp) row[0] = row[1] = kInf;
    dp[0][0] = 0;
    for (int k = 27; k < kNumTileKinds; ++k) {
      int nxt[5][2];
      for (auto& row : nxt) row[0] = row[1] = kInf;
      for (int s = 0; s <= 4; ++s) {
        for (int p = 0; p <= 1; ++p) {
          if (dp[s][p] >= kInf) continue;
          nxt[s][p] = std::min(nxt[s][p], dp[s][p]);  // skip
          if (s < 4 && cap_[k] >= 3) {
            int c = dp[s][p] + std::max(0, 3 - hand_.counts[k]);
            nxt[s + 1][p] = std::min(nxt[s + 1][p], c);
          }
          if (p == 0 && cap_[k] >= 2) {
            int c = dp[s][p] + std::max(0, 2 - hand_.counts[k]);
            nxt[s][1] = std::min(nxt[s][1], c);
          }
        }
      }
      std::memcpy(dp, nxt, sizeof(dp));
    }
    for (int s = 0; s <= 4; ++s) {
      for (int p = 0; p <= 1; ++p) mincost_[3][s][p] = dp[s][p];
    }
  }

  bool bump_nodes() {
    if (++nodes_ > kNodeCap) {
      truncated_ = true;
      return false;
    }
    return true;
  }

  void emit_standard(int cost) {
    if (cost != level_) return;
    Decomposition d;
    d.kind = Decomposition::Kind::Standard;
    for (const Meld& m : melds_) {
      d.sets.push_back(DecompSet{m.kind, m.tile, m.kind != MeldKind::ConcealedKong});
    }
    for (int i = 0; i < n_chows_; ++i) {
      d.sets.push_back(
          DecompSet{MeldKind::Chow, Tile(chows_[i].first * 9 + chows_[i].second), false});
    }
    for (int i = 0; i < n_pungs_; ++i) {
      d.sets.push_back(DecompSet{MeldKind::Pung, Tile(pungs_[i]), false});
    }
    d.pair = Tile(pair_tile_);
    d.tiles = target_;
    for (int k = 0; k < kNumTileKinds; ++k) d.tiles.counts[k] += meld_pattern_.counts[k];
    (*sink_)(target_, std::move(d));
  }

  void rec_group(int g, int sets_used, bool pair_used, int cost) {
    if (truncated_) return;
    if (g == 4) {
      if (sets_used == sets_needed_ && pair_used) emit_standard(cost);
      return;
    }
    int rem_sets = sets_needed_ - sets_used;
    int rem_pair = pair_used ? 0 : 1;
    if (rem_sets < 0 || suffix_[g][rem_sets][rem_pair] >= kInf ||
        cost + suffix_[g][rem_sets][rem_pair] > level_) {
      return;
    }
    if (g < 3) {
      rec_rank(g, 0, 0, 0, sets_used, pair_used, cost);
    } else {
      rec_honor(27, sets_used, pair_used, cost);
    }
  }

  void rec_rank(int suit, int r, int a, int b, int sets_used, bool pair_used, int cost) {
    if (!bump_nodes()) return;
    if (r == 9) {
      rec_group(suit + 1, sets_used, pair_used, cost);
      return;
    }
    int tk = suit * 9 + r;
    int xmax = r <= 6 ? sets_needed_ - sets_used : 0;
    for (int x = 0; x <= xmax; ++x) {
      for (int y = 0; y + x <= sets_needed_ - sets_used && y <= 1; ++y) {
        for (int z = 0; z <= (pair_used ? 0 : 1); ++z) {
          int t = a + b + x + 3 * y + 2 * z;
          if (t > cap_[tk]) continue;
          int c = cost + std::max(0, t - hand_.counts[tk]);
          if (c > level_) continue;
          target_.counts[tk] = static_cast<uint8_t>(t);
          for (int i = 0; i < x; ++i) {
            chows_[n_chows_++] = {static_cast<uint8_t>(suit), static_cast<uint8_t>(r)};
          }
          if (y) pungs_[n_pungs_++] = static_cast<uint8_t>(tk);
          if (z) pair_tile_ = tk;
          rec_rank(suit, r + 1, b, x, sets_used + x + y, pair_used || z, c);
          if (z) pair_tile_ = -1;
          if (y) n_pungs_--;
          n_chows_ -= x;
          target_.counts[tk] = 0;
          if (truncated_) return;
        }
      }
    }
  }

  void rec_honor(int k, int sets_used, bool pair_used, int cost) {
    if (!bump_nodes()) return;
    if (k == kNumTileKinds) {
      rec_group(4, sets_used, pair_used, cost);
      return;
    }
    rec_honor(k + 1, sets_used, pair_used, cost);  // skip kind
    if (truncated_) return;
    if (sets_used < sets_needed_ && cap_[k] >= 3) {
      int c = cost + std::max(0, 3 - hand_.counts[k]);
      if (c <= level_) {
        target_.counts[k] = 3;
        pungs_[n_pungs_++] = static_cast<uint8_t>(k);
        rec_honor(k + 1, sets_used + 1, pair_used, c);
        n_pungs_--;
        target_.counts[k] = 0;
        if (truncated_) return;
      }
    }
    if (!pair_used && cap_[k] >= 2) {
      int c = cost + std::max(0, 2 - hand_.counts[k]);
      if (c <= level_) {
        target_.counts[k] = 2;
        pair_tile_ = k;
        rec_honor(k + 1, sets_used, true, c);
        pair_tile_ = -1;
        target_.counts[k] = 0;
      }
    }
  }

  // --- special patterns -----------------------------------------------------

  void emit_special(TileMultiset target, Decomposition&& d, int cost) {
    if (cost != level_) return;
    d.tiles = target;
    for (int k = 0; k < kNumTileKinds; ++k) d.tiles.counts[k] += meld_pattern_.counts[k];
    (*sink_)(target, std::move(d));
  }

  void enumerate_seven_pairs(int d) {
    if (!melds_.empty()) return;
    TileMultiset t;
    rec_pairs(0, 0, 0, d, t);
  }

  void rec_pairs(int k, int pairs, int cost, int d, TileMultiset& t) {
    if (!bump_nodes()) return;
    if (pairs == 7) {
      if (cost == d) {
        Decomposition dec;
        dec.kind = Decomposition::Kind::SevenPairs;
        emit_special(t, std::move(dec), cost);
      }
      return;
    }
    if (k == kNumTileKinds || pairs + 2 * (kNumTileKinds - k) < 7) return;
    rec_pairs(k + 1, pairs, cost, d, t);
    if (truncated_) return;
    for (int u = 1; u <= 2 && pairs + u <= 7; ++u) {
      if (2 * u > cap_[k]) break;
      int c = cost + std::max(0, 2 * u - hand_.counts[k]);
      if (c > d) break;
      t.counts[k] = static_cast<uint8_t>(2 * u);
      rec_pairs(k + 1, pairs + u, c, d, t);
      t.counts[k] = 0;
      if (truncated_) return;
    }
  }

  void enumerate_thirteen_orphans(int d) {
    if (!melds_.empty()) return;
    static constexpr std::array<uint8_t, 13> kOrphans = {0,  8,  9,  17, 18, 26, 27,
                                                         28, 29, 30, 31, 32, 33};
    for (uint8_t dbl : kOrphans) {
      TileMultiset t;
      int cost = 0;
      for (uint8_t k : kOrphans) {
        int need = (k == dbl) ? 2 : 1;
        t.counts[k] = static_cast<uint8_t>(need);
        cost += std::max(0, need - hand_.counts[k]);
      }
      if (cost == d) {
        Decomposition dec;
        dec.kind = Decomposition::Kind::ThirteenOrphans;
        dec.pair = Tile(dbl);
        emit_special(t, std::move(dec), cost);
      }
    }
  }

  void enumerate_knitted(int d) {
    static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int p = 0; p < 6; ++p) {
      std::array<int, 9> knit;
      for (int cls = 0; cls < 3; ++cls) {
        for (int step = 0; step < 3; ++step) {
          knit[cls * 3 + step] = kPerms[p][cls] * 9 + cls + 3 * step;
        }
      }
      int knit_cost = 0;
      for (int k : knit) knit_cost += hand_.counts[k] == 0 ? 1 : 0;

      // Lesser honors and knitted: any 14 of the 16 singles.
      if (melds_.empty()) {
        std::array<int, 16> cand;
        std::array<int, 16> cost1;
        for (int i = 0; i < 9; ++i) cand[i] = knit[i];
        for (int i = 0; i < 7; ++i) cand[9 + i] = 27 + i;
        int total = 0;
        for (int i = 0; i < 16; ++i) {
          cost1[i] = hand_.counts[cand[i]] == 0 ? 1 : 0;
          total += cost1[i];
        }
        for (int i = 0; i < 16; ++i) {
          for (int j = i + 1; j < 16; ++j) {
            int cost = total - cost1[i] - cost1[j];
            if (cost != d) continue;
            TileMultiset t;
            for (int q = 0; q < 16; ++q) {
              if (q != i && q != j) t.counts[cand[q]] = 1;
            }
            Decomposition dec;
            dec.kind = Decomposition::Kind::LesserHonorsKnitted;
            for (int c = 0; c < 3; ++c) dec.knit[c] = static_cast<uint8_t>(kPerms[p][c]);
            bool complete = true;
            for (int q = 0; q < 9; ++q) complete = complete && t.counts[knit[q]] > 0;
            dec.knit_complete = complete;
            emit_special(t, std::move(dec), cost);
          }
        }
      }

      // Knitted straight + one regular set + pair (the set may be the meld).
      if (melds_.size() > 1 || knit_cost > d) continue;
      TileMultiset base;
      for (int k : knit) base.counts[k] = 1;
      auto leftover = [&](int k) { return std::max(0, hand_.counts[k] - base.counts[k]); };
      auto try_pair = [&](const TileMultiset& with_set, int set_cost, const DecompSet* set) {
        for (int k = 0; k < kNumTileKinds; ++k) {
          int have = hand_.counts[k];
          int already = with_set.counts[k];
          if (already + 2 > cap_[k]) continue;
          int c = knit_cost + set_cost + std::max(0, already + 2 - have) -
                  std::max(0, already - have);
          if (c != d) continue;
          TileMultiset t = with_set;
          t.counts[k] += 2;
          Decomposition dec;
          dec.kind = Decomposition::Kind::KnittedStraight;
          if (set) dec.sets.push_back(*set);
          for (const Meld& m : melds_) {
            dec.sets.push_back(DecompSet{m.kind, m.tile, m.kind != MeldKind::ConcealedKong});
          }
          dec.pair = Tile(k);
          for (int c2 = 0; c2 < 3; ++c2) dec.knit[c2] = static_cast<uint8_t>(kPerms[p][c2]);
          dec.knit_complete = true;
          emit_special(t, std::move(dec), c);
        }
      };
      if (melds_.size() == 1) {
        try_pair(base, 0, nullptr);
      } else {
        // concealed pungs
        for (int k = 0; k < kNumTileKinds; ++k) {
          if (base.counts[k] + 3 > cap_[k]) continue;
          int c = std::max(0, base.counts[k] + 3 - hand_.counts[k]) -
                  std::max(0, base.counts[k] - hand_.counts[k]);
          if (knit_cost + c > d) continue;
          TileMultiset t = base;
          t.counts[k] += 3;
          DecompSet set{MeldKind::Pung, Tile(k), false};
          try_pair(t, c, &set);
        }
        // concealed chows
        for (int s = 0; s < 3; ++s) {
          for (int low = 0; low <= 6; ++low) {
            TileMultiset t = base;
            int c = 0;
            bool ok = true;
            for (int j = 0; j < 3; ++j) {
              int k = s * 9 + low + j;
              if (t.counts[k] + 1 > cap_[k]) ok = false;
              c += t.counts[k] + 1 > hand_.counts[k] ? 1 : 0;
              t.counts[k] += 1;
            }
            if (!ok || knit_cost + c > d) continue;
            DecompSet set{MeldKind::Chow, Tile(s * 9 + low), false};
            try_pair(t, c, &set);
          }
        }
      }
    }
  }
};

int special_min_distance(const Observation& obs) {
  // Lower bounds on special-pattern distances, used to start the level loop.
  // Undershooting only costs an empty level pass.
  const TileMultiset& h = obs.hand;
  int best = kInf;
  static constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                       {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  if (obs.own_melds.empty()) {
    // seven pairs: dp over unit costs
    std::array<int, 8> dp;
    dp.fill(kInf);
    dp[0] = 0;
    for (int k = 0; k < kNumTileKinds; ++k) {
      for (int u = 7; u >= 1; --u) {
        for (int take = 1; take <= 2 && take <= u; ++take) {
          int cost = std::max(0, 2 * take - h.counts[k]);
          if (dp[u - take] < kInf) dp[u] = std::min(dp[u], dp[u - take] + cost);
        }
      }
    }
    best = std::min(best, dp[7]);
    // thirteen orphans
    static constexpr std::array<uint8_t, 13> kOrphans = {0,  8,  9,  17, 18, 26, 27,
                                                         28, 29, 30, 31, 32, 33};
    for (uint8_t dbl : kOrphans) {
      int c = 0;
      for (uint8_t k : kOrphans) c += std::max(0, (k == dbl ? 2 : 1) - h.counts[k]);
      best = std::min(best, c);
    }
    // lesser honors and knitted: keep the cheapest 14 of the 16 singles
    for (const auto& perm : kPerms) {
      int costs[16];
      int total = 0, n = 0;
      for (int cls = 0; cls < 3; ++cls) {
        for (int step = 0; step < 3; ++step) {
          int k = perm[cls] * 9 + cls + 3 * step;
          costs[n] = h.counts[k] == 0 ? 1 : 0;
          total += costs[n++];
        }
      }
      for (int i = 0; i < 7; ++i) {
        costs[n] = h.counts[27 + i] == 0 ? 1 : 0;
        total += costs[n++];
      }
      std::sort(costs, costs + 16);
      best = std::min(best, total - costs[15] - costs[14]);
    }
  }
  if (obs.own_melds.size() <= 1) {
    // knitted straight: the nine-tile core alone is a valid lower bound
    for (const auto& perm : kPerms) {
      int c = 0;
      for (int cls = 0; cls < 3; ++cls) {
        for (int step = 0; step < 3; ++step) {
          c += h.counts[perm[cls] * 9 + cls + 3 * step] == 0 ? 1 : 0;
        }
      }
      best = std::min(best, c);
    }
  }
  return best;
}

}  // namespace

GoalSet propose_goals(const Observation& obs, int cap) {
  if (cap < 1) throw std::invalid_argument("goal cap must be >= 1");
  GoalSet out;
  out.unshown = compute_unshown(obs);

  LevelEnumerator en(obs);
  WinContext ctx = neutral_context(obs);

  int start = std::min(en.structural_min(), special_min_distance(obs));
  // LHK / knitted minima are cheap to miss here; the level loop below covers
  // them because every level enumerates all categories.
  start = std::min(start, kGoalHorizon);

  auto run_level = [&](int d, bool accept_all) {
    LevelMap level;
    en.enumerate(d, [&](const TileMultiset& target, Decomposition&& dec) {
      FanResult fr = score_fans(dec, ctx);
      if (!accept_all && fr.total_points < kWinThreshold) return;
      TargetKey key{target.counts};
      auto it = level.find(key);
      if (it == level.end()) {
        level.emplace(key, Candidate{std::move(dec), std::move(fr)});
      } else if (fr.total_points > it->second.fans.total_points ||
                 (fr.total_points == it->second.fans.total_points &&
                  fr.fans < it->second.fans.fans)) {
        it->second = Candidate{std::move(dec), std::move(fr)};
      }
    });
    std::vector<Goal> goals;
    goals.reserve(level.size());
    for (auto& [key, cand] : level) {
      TileMultiset t;
      t.counts = key.counts;
      goals.push_back(make_goal(obs.hand, t, cand));
    }
    std::sort(goals.begin(), goals.end(), goal_order);
    return goals;
  };

  for (int d = start; d <= kGoalHorizon; ++d) {
    auto lvl = run_level(d, false);
    for (auto& g : lvl) out.goals.push_back(std::move(g));
    if (static_cast<int>(out.goals.size()) >= cap) break;
  }

  if (out.goals.empty()) {
    // No scoring goal in reach: fall back to the nearest structural targets.
    for (int d = start; out.goals.empty() && d <= 14; ++d) {
      auto lvl = run_level(d, true);
      for (auto& g : lvl) out.goals.push_back(std::move(g));
    }
  }
  if (static_cast<int>(out.goals.size()) > cap) out.goals.resize(cap);
  return out;
}

int shanten_distance(const Observation& obs) {
  GoalSet gs = propose_goals(obs, 1);
  return gs.goals.empty() ? -1 : gs.goals.front().shanten;
}

// ---------------------------------------------------------------------------
// Exhaustive oracle

namespace {

bool quick_special_feasible(const TileMultiset& t, int n_melds) {
  if (n_melds == 0 && t.total() == 14) {
    bool even = true;
    for (int c : t.counts) even = even && c % 2 == 0;
    if (even) return true;
  }
  return false;
}

bool target_feasible(const TileMultiset& t, const std::vector<Meld>& melds) {
  if (detail::standard_feasible(t, 4 - static_cast<int>(melds.size()))) return true;
  if (quick_special_feasible(t, static_cast<int>(melds.size()))) return true;
  // Remaining special shapes (orphans, knitted families) are rare; test them
  // through the decomposer directly.
  if (melds.size() <= 1) {
    for (const auto& d : decompose(t, melds)) {
      (void)d;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Goal> exhaustive_goal_oracle(const Observation& obs, int max_d, int64_t budget) {
  const TileMultiset& h = obs.hand;
  int target_total = 14 - 3 * static_cast<int>(obs.own_melds.size());
  int delta = target_total - h.total();  // 0 at discard parity, 1 at reaction parity
  if (delta < 0 || delta > 1) throw std::invalid_argument("oracle: inconsistent hand size");

  std::array<int, kNumTileKinds> cap{};
  for (int k = 0; k < kNumTileKinds; ++k) cap[k] = kCopiesPerKind;
  for (const Meld& m : obs.own_melds) {
    TileMultiset mt = m.tiles();
    for (int k = 0; k < kNumTileKinds; ++k) cap[k] -= mt.counts[k];
  }

  WinContext ctx = neutral_context(obs);
  std::vector<Goal> out;
  int64_t nodes = 0;

  // Distinct removal multisets of a given size.
  std::vector<std::array<uint8_t, kNumTileKinds>> removals;
  std::array<uint8_t, kNumTileKinds> rbuf{};
  std::function<void(int, int)> rec_removal = [&](int k, int left) {
    if (left == 0) {
      removals.push_back(rbuf);
      return;
    }
    if (k == kNumTileKinds) return;
    for (int take = 0; take <= std::min<int>(h.counts[k], left); ++take) {
      rbuf[k] = static_cast<uint8_t>(take);
      rec_removal(k + 1, left - take);
    }
    rbuf[k] = 0;
  };

  for (int d = delta; d <= max_d; ++d) {
    int r = d - delta;
    removals.clear();
    rec_removal(0, r);
    std::array<uint8_t, kNumTileKinds> abuf{};
    for (const auto& rem : removals) {
      TileMultiset base = h;
      for (int k = 0; k < kNumTileKinds; ++k) base.counts[k] -= rem[k];
      std::function<void(int, int)> rec_add = [&](int k, int left) {
        if (left == 0) {
          if (++nodes > budget) throw std::runtime_error("oracle enumeration budget exceeded");
          TileMultiset t = base;
          for (int q = 0; q < kNumTileKinds; ++q) t.counts[q] += abuf[q];
          if (!target_feasible(t, obs.own_melds)) return;
          auto best = best_decomposition(t, obs.own_melds, ctx);
          if (!best || best->second.total_points < kWinThreshold) return;
          out.push_back(make_goal(h, t, Candidate{best->first, best->second}));
          return;
        }
        if (k == kNumTileKinds) return;
        rec_add(k + 1, left);
        // additions and removals must not overlap, otherwise the same target
        // would be revisited at an inflated distance
        if (rem[k] == 0) {
          int room = cap[k] - base.counts[k];
          for (int add = 1; add <= std::min(room, left); ++add) {
            abuf[k] = static_cast<uint8_t>(add);
            rec_add(k + 1, left - add);
          }
          abuf[k] = 0;
        }
      };
      rec_add(0, d);
    }
  }
  return out;
}

std::vector<CoverageRow> coverage_stats(const std::vector<Observation>& states,
                                        const std::vector<int>& caps) {
  if (states.empty()) throw std::invalid_argument("coverage_stats: no states");
  std::vector<CoverageRow> rows;
  std::vector<std::vector<TargetKey>> min_goals(states.size());
  for (size_t i = 0; i < states.size(); ++i) {
    std::vector<Goal> oracle;
    for (int d = 0; d <= 4 && oracle.empty(); ++d) {
      oracle = exhaustive_goal_oracle(states[i], d);
    }
    for (const Goal& g : oracle) min_goals[i].push_back(TargetKey{g.target.counts});
  }
  for (int cap : caps) {
    double recall_sum = 0.0;
    double time_sum = 0.0;
    int counted = 0;
    for (size_t i = 0; i < states.size(); ++i) {
      auto t0 = std::chrono::steady_clock::now();
      GoalSet gs = propose_goals(states[i], cap);
      auto t1 = std::chrono::steady_clock::now();
      time_sum += std::chrono::duration<double>(t1 - t0).count();
      if (min_goals[i].empty()) continue;
      int hit = 0;
      for (const auto& key : min_goals[i]) {
        for (const Goal& g : gs.goals) {
          if (g.target.counts == key.counts) {
            hit++;
            break;
          }
        }
      }
      recall_sum += static_cast<double>(hit) / min_goals[i].size();
      counted++;
    }
    rows.push_back(CoverageRow{cap, counted ? recall_sum / counted : 0.0,
                               time_sum / states.size()});
  }
  return rows;
}

}  // namespace mx
