#include "mx/tile.hpp"

#include <sstream>
#include <stdexcept>

namespace mx {

namespace {
const char* kHonorNames[7] = {"EW", "SW", "WW", "NW", "RD", "GD", "WD"};
const char kSuitLetters[3] = {'C', 'D', 'B'};
}  // namespace

Tile parse_tile(const std::string& text) {
  if (text.size() == 2) {
    for (int s = 0; s < 3; ++s) {
      if (text[0] == kSuitLetters[s] && text[1] >= '1' && text[1] <= '9') {
        return Tile(s * 9 + (text[1] - '1'));
      }
    }
    for (int h = 0; h < 7; ++h) {
      if (text == kHonorNames[h]) return Tile(27 + h);
    }
  }
  throw std::invalid_argument("not a tile name: '" + text + "'");
}

std::string tile_name(Tile t) {
  if (t.index >= kNumTileKinds) throw std::invalid_argument("bad tile index");
  if (t.is_honor()) return kHonorNames[t.index - 27];
  std::string s(1, kSuitLetters[t.index / 9]);
  s += static_cast<char>('1' + t.index % 9);
  return s;
}

std::vector<Tile> TileMultiset::expand() const {
  std::vector<Tile> out;
  out.reserve(total());
  for (int k = 0; k < kNumTileKinds; ++k) {
    for (int c = 0; c < counts[k]; ++c) out.push_back(Tile(k));
  }
  return out;
}

TileMultiset parse_hand(const std::string& text) {
  TileMultiset m;
  std::string tok;
  std::istringstream in(text);
  while (in >> tok) {
    while (!tok.empty() && (tok.back() == ',' || tok.back() == ';')) tok.pop_back();
    if (tok.empty()) continue;
    m.add(parse_tile(tok));
  }
  return m;
}

std::string hand_name(const TileMultiset& hand) {
  std::string out;
  for (int k = 0; k < kNumTileKinds; ++k) {
    for (int c = 0; c < hand.counts[k]; ++c) {
      if (!out.empty()) out += ' ';
      out += tile_name(Tile(k));
    }
  }
  return out;
}

}  // namespace mx
