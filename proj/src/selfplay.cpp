#include "mx/selfplay.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace mx {

// ---------------------------------------------------------------------------
// Log serialization

std::string game_log_to_json(const GameLog& log) {
  nlohmann::json j;
  j["game_id"] = log.game_id;
  j["seed"] = log.seed;
  nlohmann::json events = nlohmann::json::array();
  for (const Event& e : log.events) {
    nlohmann::json je;
    je["seat"] = e.seat;
    je["type"] = event_type_name(e.type);
    je["step"] = e.step;
    if (e.type == Event::Type::Chow) {
      je["meld"] = {{"kind", "chow"}, {"tile", tile_name(e.low)}, {"claimed", tile_name(e.tile)}};
    } else if (e.type != Event::Type::Win && e.type != Event::Type::Drawn) {
      je["tile"] = tile_name(e.tile);
    }
    events.push_back(je);
  }
  j["events"] = events;
  nlohmann::json decisions = nlohmann::json::array();
  for (const DecisionRecord& d : log.decisions) {
    decisions.push_back({{"seat", d.seat},
                         {"step", d.step},
                         {"digest", d.digest},
                         {"action", action_name(d.action)}});
  }
  j["decisions"] = decisions;
  j["winner"] = log.winner;
  j["winning_fans"] = log.winning_fans;
  return j.dump();
}

GameLog game_log_from_json(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  GameLog log;
  log.game_id = j.at("game_id").get<int>();
  log.seed = j.at("seed").get<uint64_t>();
  for (const auto& je : j.at("events")) {
    Event e;
    e.seat = je.at("seat").get<int>();
    e.type = parse_event_type(je.at("type").get<std::string>());
    e.step = je.at("step").get<int>();
    if (je.contains("meld")) {
      e.low = parse_tile(je["meld"].at("tile").get<std::string>());
      e.tile = parse_tile(je["meld"].at("claimed").get<std::string>());
    } else if (je.contains("tile")) {
      e.tile = parse_tile(je["tile"].get<std::string>());
    }
    log.events.push_back(e);
  }
  for (const auto& jd : j.at("decisions")) {
    DecisionRecord d;
    d.seat = jd.at("seat").get<int>();
    d.step = jd.at("step").get<int>();
    d.digest = jd.at("digest").get<uint64_t>();
    d.action = parse_action(jd.at("action").get<std::string>());
    log.decisions.push_back(d);
  }
  log.winner = j.at("winner").get<int>();
  for (const auto& f : j.at("winning_fans")) log.winning_fans.push_back(f.get<uint8_t>());
  return log;
}

void save_logs(const std::vector<GameLog>& logs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (const GameLog& log : logs) out << game_log_to_json(log) << "\n";
}

std::vector<GameLog> load_logs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::vector<GameLog> logs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) logs.push_back(game_log_from_json(line));
  }
  return logs;
}

// ---------------------------------------------------------------------------
// Policies

std::array<uint8_t, kNumTileKinds> default_psi1_order() {
  std::array<uint8_t, kNumTileKinds> order{};
  for (int i = 0; i < kNumTileKinds; ++i) order[i] = static_cast<uint8_t>(kNumTileKinds - 1 - i);
  return order;
}

std::array<uint8_t, kNumTileKinds> load_psi1_order(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  nlohmann::json j;
  in >> j;
  auto names = j.at("order").get<std::vector<std::string>>();
  if (names.size() != kNumTileKinds) throw std::runtime_error("tile order must list 34 tiles");
  std::array<uint8_t, kNumTileKinds> order{};
  std::array<bool, kNumTileKinds> seen{};
  for (int i = 0; i < kNumTileKinds; ++i) {
    Tile t = parse_tile(names[i]);
    if (seen[t.index]) throw std::runtime_error("tile order repeats " + names[i]);
    seen[t.index] = true;
    order[i] = t.index;
  }
  return order;
}

SevenPairsPolicy::SevenPairsPolicy()
    : SevenPairsPolicy(load_psi1_order(std::string(MX_DATA_DIR) + "/psi1_tile_order.json")) {}

SevenPairsPolicy::SevenPairsPolicy(std::array<uint8_t, kNumTileKinds> order) : order_(order) {
  for (int i = 0; i < kNumTileKinds; ++i) rank_[order_[i]] = i;
}

std::vector<Tile> SevenPairsPolicy::candidate_discards(const TileMultiset& hand) const {
  std::vector<Tile> odd, any;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (hand.counts[k] == 0) continue;
    any.push_back(Tile(k));
    if (hand.counts[k] % 2 == 1) odd.push_back(Tile(k));
  }
  return odd.empty() ? any : odd;
}

Action SevenPairsPolicy::act(const Observation& obs) {
  if (obs.last_event.kind == LastEvent::Kind::OtherDiscard) return Action::pass();
  auto cands = candidate_discards(obs.hand);
  Tile best = cands.front();
  for (Tile t : cands) {
    if (rank_[t.index] < rank_[best.index]) best = t;
  }
  return Action::discard(best);
}

Action FrameworkPolicy::act(const Observation& obs) {
  if (obs.last_event.kind == LastEvent::Kind::OtherDiscard) {
    return select_reaction(obs, params_, cap_);
  }
  GoalSet gs = propose_goals(obs, cap_);
  std::vector<double> vals = goal_values(gs, obs.game_length, params_);
  return Action::discard(select_discard(gs, vals, obs.hand, params_));
}

Action RandomPolicy::act(const Observation& obs) {
  std::vector<Action> legal = legal_actions(obs);
  if (obs.last_event.kind == LastEvent::Kind::OtherDiscard) {
    if (legal.size() > 1 && rng_.uniform() < claim_prob_) {
      return legal[1 + rng_.below(legal.size() - 1)];
    }
    return Action::pass();
  }
  return legal[rng_.below(legal.size())];
}

// ---------------------------------------------------------------------------
// Game runner (also drives replay)

std::vector<Tile> shuffled_wall(uint64_t seed) {
  std::vector<Tile> wall;
  wall.reserve(kWallSize);
  for (int k = 0; k < kNumTileKinds; ++k) {
    for (int c = 0; c < kCopiesPerKind; ++c) wall.push_back(Tile(k));
  }
  Rng rng(seed);
  rng.shuffle(wall);
  return wall;
}

namespace {

class DecisionSource {
 public:
  virtual ~DecisionSource() = default;
  virtual Action decide(int seat, const Observation& obs) = 0;
};

class PolicySource : public DecisionSource {
 public:
  explicit PolicySource(const std::array<Policy*, kNumSeats>& p) : policies_(p) {}
  Action decide(int seat, const Observation& obs) override { return policies_[seat]->act(obs); }

 private:
  std::array<Policy*, kNumSeats> policies_;
};

// Replays recorded decisions in order, verifying observation digests.
class ReplaySource : public DecisionSource {
 public:
  ReplaySource(const GameLog& log, std::vector<TrainingExample>* sink)
      : log_(log), sink_(sink) {}
  Action decide(int seat, const Observation& obs) override {
    if (next_ >= log_.decisions.size()) throw std::runtime_error("replay ran past the log");
    const DecisionRecord& rec = log_.decisions[next_++];
    if (rec.seat != seat || rec.digest != observation_digest(obs)) {
      throw std::runtime_error("replay mismatch at decision " + std::to_string(next_ - 1));
    }
    if (sink_) sink_->push_back(TrainingExample{obs, rec.action, log_.game_id});
    return rec.action;
  }
  size_t consumed() const { return next_; }

 private:
  const GameLog& log_;
  std::vector<TrainingExample>* sink_;
  size_t next_ = 0;
};

GameLog drive_game(DecisionSource& source, uint64_t seed, int game_id) {
  GameLog log;
  log.game_id = game_id;
  log.seed = seed;
  TableState st = TableState::deal_from_wall(shuffled_wall(seed));

  auto push = [&](Event e) {
    e.step = st.step;
    st.apply_event(e);
    log.events.push_back(e);
  };

  for (int seat = 0; seat < kNumSeats; ++seat) {
    for (int i = 0; i < 13; ++i) {
      push(Event{Event::Type::Deal, seat, st.wall.back(), Tile(), 0});
    }
  }

  auto record = [&](int seat, const Observation& obs, const Action& a) {
    log.decisions.push_back(DecisionRecord{seat, st.step, observation_digest(obs), a});
  };

  auto declare_win = [&](int seat, const TileMultiset& hand, bool self_drawn) {
    WinContext ctx{self_drawn, seat};
    auto best = best_decomposition(hand, st.melds[seat], ctx);
    push(Event{Event::Type::Win, seat, Tile(), Tile(), 0});
    log.winner = seat;
    log.winning_fans = best->second.fans;
  };

  int current = 0;
  bool needs_draw = true;
  LastEvent last;

  while (!st.finished) {
    if (needs_draw) {
      if (st.wall.empty()) {
        push(Event{Event::Type::Drawn, -1, Tile(), Tile(), 0});
        break;
      }
      Tile t = st.wall.back();
      push(Event{Event::Type::Draw, current, t, Tile(), 0});
      last = LastEvent{LastEvent::Kind::SelfDraw, t, -1};
      // self-drawn win, taken greedily
      st.decision_counts[current]++;
      WinContext ctx{true, current};
      if (is_winning(st.hands[current], st.melds[current], ctx)) {
        declare_win(current, st.hands[current], true);
        break;
      }
    } else {
      st.decision_counts[current]++;
    }

    Observation obs = st.observation(current, last);
    Action intent = source.decide(current, obs);
    record(current, obs, intent);
    Action act = kong_resolution(obs, intent);
    if (act.tag == Action::Tag::KongConcealed) {
      push(Event{Event::Type::KongConcealed, current, act.tile, Tile(), 0});
      needs_draw = true;
      continue;  // replacement draw
    }
    if (act.tag == Action::Tag::KongExposed) {
      push(Event{Event::Type::KongConvert, current, act.tile, Tile(), 0});
      needs_draw = true;
      continue;
    }
    if (act.tag != Action::Tag::Discard || !obs.hand.contains(act.tile)) {
      throw std::runtime_error("policy returned an illegal discard");
    }
    Tile discarded = act.tile;
    push(Event{Event::Type::Discard, current, discarded, Tile(), 0});

    // Greedy win by claim, in seat order after the discarder.
    bool won = false;
    for (int off = 1; off < kNumSeats && !won; ++off) {
      int q = (current + off) % kNumSeats;
      TileMultiset with = st.hands[q];
      with.add(discarded);
      WinContext ctx{false, q};
      if (with.total() + 3 * static_cast<int>(st.melds[q].size()) == 14 &&
          is_winning(with, st.melds[q], ctx)) {
        declare_win(q, with, false);
        won = true;
      }
    }
    if (won) break;

    // Reaction polls; every polled seat spends a decision point.
    int pung_seat = -1, chow_seat = -1;
    Action chow_action;
    for (int off = 1; off < kNumSeats; ++off) {
      int q = (current + off) % kNumSeats;
      st.decision_counts[q]++;
      LastEvent ev{LastEvent::Kind::OtherDiscard, discarded, current};
      Observation obs_q = st.observation(q, ev);
      Action a_q = source.decide(q, obs_q);
      record(q, obs_q, a_q);
      if (a_q.tag == Action::Tag::Pass) continue;
      std::vector<Action> legal = legal_actions(obs_q);
      bool ok = false;
      for (const Action& l : legal) ok = ok || l == a_q;
      if (!ok) throw std::runtime_error("policy returned an illegal reaction");
      if (a_q.tag == Action::Tag::Pung) {
        pung_seat = q;
      } else {
        chow_seat = q;
        chow_action = a_q;
      }
    }

    if (pung_seat >= 0) {
      push(Event{Event::Type::Pung, pung_seat, discarded, Tile(), 0});
      current = pung_seat;
      last = LastEvent{LastEvent::Kind::AfterClaim, discarded, -1};
      needs_draw = false;
    } else if (chow_seat >= 0) {
      Tile a, b;
      chow_uses(chow_action.tag, discarded, &a, &b);
      Tile low(std::min({discarded.index, a.index, b.index}));
      push(Event{Event::Type::Chow, chow_seat, discarded, low, 0});
      current = chow_seat;
      last = LastEvent{LastEvent::Kind::AfterClaim, discarded, -1};
      needs_draw = false;
    } else {
      current = (current + 1) % kNumSeats;
      needs_draw = true;
    }
  }
  return log;
}

}  // namespace

GameLog run_game(const std::array<Policy*, kNumSeats>& policies, uint64_t seed, int game_id) {
  PolicySource src(policies);
  return drive_game(src, seed, game_id);
}

std::vector<GameLog> run_selfplay(const PolicyFactory& factory, int n_games, uint64_t seed,
                                  int threads) {
  if (n_games < 1) throw std::invalid_argument("need at least one game");
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<GameLog> logs(n_games);
  std::atomic<int> next{0};
  auto worker = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= n_games) break;
      uint64_t game_seed = derive_seed(seed, static_cast<uint64_t>(i));
      std::array<std::unique_ptr<Policy>, kNumSeats> owned;
      std::array<Policy*, kNumSeats> ptrs;
      for (int s = 0; s < kNumSeats; ++s) {
        owned[s] = factory(s, derive_seed(game_seed, 100 + s));
        ptrs[s] = owned[s].get();
      }
      logs[i] = run_game(ptrs, game_seed, i);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return logs;
}

PolicyFactory seven_pairs_factory() {
  auto order = load_psi1_order(std::string(MX_DATA_DIR) + "/psi1_tile_order.json");
  return [order](int, uint64_t) { return std::make_unique<SevenPairsPolicy>(order); };
}

PolicyFactory framework_factory(ParameterSet params, int cap) {
  return [params, cap](int, uint64_t) { return std::make_unique<FrameworkPolicy>(params, cap); };
}

PolicyFactory random_factory(double claim_prob) {
  return [claim_prob](int, uint64_t seed) {
    return std::make_unique<RandomPolicy>(seed, claim_prob);
  };
}

std::vector<TrainingExample> ingest_logs(const std::vector<GameLog>& logs) {
  std::vector<TrainingExample> out;
  for (const GameLog& log : logs) {
    ReplaySource src(log, &out);
    GameLog replayed = drive_game(src, log.seed, log.game_id);
    if (src.consumed() != log.decisions.size() || replayed.events.size() != log.events.size()) {
      throw std::runtime_error("replay diverged from log " + std::to_string(log.game_id));
    }
  }
  return out;
}

FanFrequencyTable fan_frequency(const std::vector<GameLog>& logs) {
  FanFrequencyTable table;
  for (const GameLog& log : logs) {
    if (log.winner < 0) continue;
    table.total_wins++;
    for (uint8_t f : log.winning_fans) table.frequency[f] += 1.0;
  }
  if (table.total_wins > 0) {
    for (double& f : table.frequency) f /= table.total_wins;
  }
  return table;
}

std::vector<Observation> sample_decision_states(int n, uint64_t seed, bool discard_only,
                                                int min_step) {
  // Observation-recording policy wrapper over random play.
  struct Recorder : Policy {
    RandomPolicy inner;
    std::vector<Observation>* sink;
    bool discard_only;
    int min_step;
    Recorder(uint64_t s, std::vector<Observation>* out, bool d_only, int ms)
        : inner(s), sink(out), discard_only(d_only), min_step(ms) {}
    Action act(const Observation& obs) override {
      bool is_reaction = obs.last_event.kind == LastEvent::Kind::OtherDiscard;
      int depth = 0;
      for (const auto& pile : obs.all_discards) depth += static_cast<int>(pile.size());
      if ((!is_reaction || !discard_only) && depth >= min_step) sink->push_back(obs);
      return inner.act(obs);
    }
  };
  std::vector<Observation> out;
  int game = 0;
  while (static_cast<int>(out.size()) < n) {
    uint64_t game_seed = derive_seed(seed, static_cast<uint64_t>(game));
    std::array<std::unique_ptr<Policy>, kNumSeats> owned;
    std::array<Policy*, kNumSeats> ptrs;
    for (int s = 0; s < kNumSeats; ++s) {
      owned[s] = std::make_unique<Recorder>(derive_seed(game_seed, 100 + s), &out,
                                            discard_only, min_step);
      ptrs[s] = owned[s].get();
    }
    run_game(ptrs, game_seed, game);
    game++;
  }
  out.resize(n);
  return out;
}

}  // namespace mx
