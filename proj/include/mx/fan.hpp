#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mx/observation.hpp"
#include "mx/tile.hpp"

namespace mx {

inline constexpr int kNumFans = 80;
inline constexpr int kWinThreshold = 8;

// Catalog ids, fixed by data/fans.json (validated at load).
namespace fan {
inline constexpr uint8_t kThirteenOrphans = 6;
inline constexpr uint8_t kPureTerminalChows = 12;
inline constexpr uint8_t kFourPureShiftedPungs = 14;
inline constexpr uint8_t kSevenPairs = 18;
inline constexpr uint8_t kPureStraight = 27;
inline constexpr uint8_t kLesserHonorsKnitted = 33;
inline constexpr uint8_t kKnittedStraight = 34;
inline constexpr uint8_t kMixedStraight = 38;
inline constexpr uint8_t kMixedTripleChow = 40;
inline constexpr uint8_t kHalfFlush = 49;
inline constexpr uint8_t kMixedShiftedChows = 50;
inline constexpr uint8_t kAllTypes = 51;
inline constexpr uint8_t kMeldedHand = 52;
inline constexpr uint8_t kFullyConcealedHand = 55;
inline constexpr uint8_t kDragonPung = 58;
inline constexpr uint8_t kPrevalentWind = 59;
inline constexpr uint8_t kSeatWind = 60;
inline constexpr uint8_t kConcealedHand = 61;
inline constexpr uint8_t kAllChows = 62;
inline constexpr uint8_t kTileHog = 63;
inline constexpr uint8_t kDoublePung = 64;
inline constexpr uint8_t kTwoConcealedPungs = 65;
inline constexpr uint8_t kConcealedKong = 66;
inline constexpr uint8_t kAllSimples = 67;
inline constexpr uint8_t kPureDoubleChow = 68;
inline constexpr uint8_t kMixedDoubleChow = 69;
inline constexpr uint8_t kShortStraight = 70;
inline constexpr uint8_t kTwoTerminalChows = 71;
inline constexpr uint8_t kPungTermHonors = 72;
inline constexpr uint8_t kMeldedKong = 73;
inline constexpr uint8_t kOneVoidedSuit = 74;
inline constexpr uint8_t kNoHonors = 75;
inline constexpr uint8_t kSelfDrawn = 79;
}  // namespace fan

struct FanInfo {
  int id = 0;
  std::string name;
  int points = 0;
  bool major = false;
  bool implemented = false;
  std::vector<uint8_t> excludes;
};

// The 80-entry scoring catalog, loaded from fans.json.
class FanCatalog {
 public:
  static const FanCatalog& instance();
  static FanCatalog load(const std::string& path);

  const FanInfo& info(int id) const { return fans_.at(id); }
  int points(int id) const { return fans_[id].points; }
  const std::vector<FanInfo>& all() const { return fans_; }
  std::optional<int> id_by_name(const std::string& name) const;

 private:
  std::vector<FanInfo> fans_;
};

// One set inside a decomposition. For chows `tile` is the low tile.
struct DecompSet {
  MeldKind kind = MeldKind::Pung;
  Tile tile;
  bool exposed = false;

  bool is_kong() const {
    return kind == MeldKind::ExposedKong || kind == MeldKind::ConcealedKong;
  }
};

// A complete 14-tile winning structure (melds included).
struct Decomposition {
  enum class Kind : uint8_t {
    Standard,
    SevenPairs,
    ThirteenOrphans,
    LesserHonorsKnitted,  // 14 distinct tiles from a knitted-suit assignment + honors
    KnittedStraight,      // 9 knitted tiles + one regular set + pair
  };
  Kind kind = Kind::Standard;
  std::vector<DecompSet> sets;
  Tile pair;                       // standard / knitted: the pair; 13 orphans: doubled kind
  std::array<uint8_t, 3> knit{0, 1, 2};  // suit assigned to rank class {147},{258},{369}
  bool knit_complete = false;      // all nine knitted tiles present
  TileMultiset tiles;              // every physical tile used (kong counts 4)
};

struct WinContext {
  bool self_drawn = false;
  int seat = 0;
  int prevalent_wind = 27;  // East; single-round games do not rotate
};

struct FanResult {
  std::vector<uint8_t> fans;  // ascending catalog ids
  int total_points = 0;
};

// All maximal decompositions of (concealed hand + melds) as a 14-tile
// pattern; empty if none. Precondition: pattern sizes add up to 14.
std::vector<Decomposition> decompose(const TileMultiset& hand, const std::vector<Meld>& melds);

// Detected implemented fans of one decomposition, exclusion rules applied.
FanResult score_fans(const Decomposition& d, const WinContext& ctx);

// Highest-scoring decomposition, ties broken by lexicographic fan ids.
std::optional<std::pair<Decomposition, FanResult>> best_decomposition(
    const TileMultiset& hand, const std::vector<Meld>& melds, const WinContext& ctx);

// True when some decomposition reaches the eight-point threshold.
bool is_winning(const TileMultiset& hand, const std::vector<Meld>& melds, const WinContext& ctx);

namespace detail {

// A full split of one suit's tiles into chows/pungs and at most one pair.
struct SuitSplit {
  std::array<uint8_t, 4> chow_lows{};  // 0-based low ranks
  std::array<uint8_t, 4> pung_ranks{};
  uint8_t n_chows = 0;
  uint8_t n_pungs = 0;
  int8_t pair_rank = -1;  // 0-based, -1 when the pair is elsewhere
};

// All complete splits of a 9-rank count vector. Memoized; thread safe.
const std::vector<SuitSplit>& suit_splits(const std::array<uint8_t, 9>& counts);

// Bitmask of achievable (n_sets, pair) splits: bit (sets*2 + pair). Fast
// feasibility used by the exhaustive oracle.
uint16_t suit_split_mask(const std::array<uint8_t, 9>& counts);

// True if `concealed` plus `melds` admits any standard-form decomposition.
bool standard_feasible(const TileMultiset& concealed, int sets_needed);

}  // namespace detail

}  // namespace mx
