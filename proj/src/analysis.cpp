#include "mx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mx {

ExplanationTrace explain_decision(const Observation& obs, const ParameterSet& p, int cap) {
  ExplanationTrace trace;
  trace.obs_digest = observation_digest(obs);
  trace.is_reaction = obs.last_event.kind == LastEvent::Kind::OtherDiscard;

  GoalSet gs = propose_goals(obs, cap);
  std::vector<double> values = goal_values(gs, obs.game_length, p);
  double vmax = 0.0;
  for (double v : values) vmax = std::max(vmax, std::fabs(v));
  for (size_t i = 0; i < gs.goals.size(); ++i) {
    ExplanationTrace::TraceGoal tg;
    tg.index = static_cast<int>(i);
    tg.fans = gs.goals[i].fans;
    tg.shanten = gs.goals[i].shanten;
    tg.missing = gs.goals[i].missing;
    tg.redundant = gs.goals[i].redundant;
    tg.value = values[i];
    tg.value_norm = vmax > 0.0 ? values[i] / vmax : 0.0;
    trace.goals.push_back(std::move(tg));
  }
  std::stable_sort(trace.goals.begin(), trace.goals.end(),
                   [](const auto& a, const auto& b) { return a.value_norm > b.value_norm; });

  trace.redundancy = redundancy_values(gs, values);
  for (int t = 0; t < kNumTileKinds; ++t) {
    trace.redundancy_scaled[t] = trace.redundancy[t] * p.tile[t];
  }

  if (trace.is_reaction) {
    if (legal_actions(obs).size() == 1) {
      trace.chosen = Action::pass();
      trace.reaction_scores.push_back(
          ReactionEval{Action::pass(), position_score(obs, p, cap), Tile(), false});
    } else {
      trace.reaction_scores = evaluate_reactions(obs, p, cap);
      trace.chosen = select_reaction(obs, p, cap);
    }
  } else {
    trace.chosen = Action::discard(select_discard(gs, values, obs.hand, p));
  }
  return trace;
}

namespace {

nlohmann::json tiles_json(const std::vector<GoalMissing>& m) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : m) {
    arr.push_back({{"tile", tile_name(x.tile)},
                   {"count", x.count},
                   {"pung_able", x.pung_able},
                   {"chow_able", x.chow_able}});
  }
  return arr;
}

nlohmann::json tiles_json(const std::vector<GoalRedundant>& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& x : r) arr.push_back({{"tile", tile_name(x.tile)}, {"count", x.count}});
  return arr;
}

std::string fan_names(const std::vector<uint8_t>& fans) {
  const FanCatalog& cat = FanCatalog::instance();
  std::string out;
  for (uint8_t f : fans) {
    if (!out.empty()) out += ", ";
    out += cat.info(f).name;
  }
  return out;
}

}  // namespace

std::string trace_to_json(const ExplanationTrace& t) {
  nlohmann::json j;
  char digest[32];
  snprintf(digest, sizeof(digest), "%016llx", static_cast<unsigned long long>(t.obs_digest));
  j["observation_digest"] = digest;
  j["is_reaction"] = t.is_reaction;
  j["chosen"] = action_name(t.chosen);
  nlohmann::json goals = nlohmann::json::array();
  for (const auto& g : t.goals) {
    goals.push_back({{"fans", g.fans},
                     {"fan_names", fan_names(g.fans)},
                     {"shanten", g.shanten},
                     {"missing", tiles_json(g.missing)},
                     {"redundant", tiles_json(g.redundant)},
                     {"value", g.value},
                     {"value_norm", g.value_norm}});
  }
  j["goals"] = goals;
  nlohmann::json red = nlohmann::json::object();
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (t.redundancy[k] != 0.0) {
      red[tile_name(Tile(k))] = {{"raw", t.redundancy[k]}, {"scaled", t.redundancy_scaled[k]}};
    }
  }
  j["redundancy"] = red;
  if (t.is_reaction) {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& ev : t.reaction_scores) {
      nlohmann::json e = {{"action", action_name(ev.action)}, {"score", ev.score}};
      if (ev.has_planned_discard) e["planned_discard"] = tile_name(ev.planned_discard);
      rs.push_back(e);
    }
    j["reaction_scores"] = rs;
  }
  return j.dump(2);
}

std::string trace_to_text(const ExplanationTrace& t) {
  std::ostringstream out;
  out << (t.is_reaction ? "reaction decision" : "discard decision") << "\n";
  out << "chosen: " << action_name(t.chosen) << "\n";
  out << "goals (by normalized value):\n";
  int shown = 0;
  for (const auto& g : t.goals) {
    if (shown++ >= 10) {
      out << "  ... " << (t.goals.size() - 10) << " more\n";
      break;
    }
    out << "  [" << std::fixed << g.value_norm << "] D=" << g.shanten << "  "
        << fan_names(g.fans) << "  missing:";
    for (const auto& m : g.missing) {
      out << " " << tile_name(m.tile);
      if (m.count > 1) out << "x" << int(m.count);
      if (m.pung_able) out << "(p)";
      if (m.chow_able) out << "(c)";
    }
    out << "  redundant:";
    for (const auto& r : g.redundant) out << " " << tile_name(r.tile);
    out << "\n";
  }
  out << "tile redundancy values (scaled by preference):\n";
  std::vector<int> order;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (t.redundancy[k] != 0.0) order.push_back(k);
  }
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return t.redundancy_scaled[a] > t.redundancy_scaled[b]; });
  for (int k : order) {
    out << "  " << tile_name(Tile(k)) << ": " << t.redundancy_scaled[k] << "\n";
  }
  if (t.is_reaction) {
    out << "reaction scores:\n";
    for (const auto& ev : t.reaction_scores) {
      out << "  " << action_name(ev.action) << ": " << ev.score;
      if (ev.has_planned_discard) out << " (then discard " << tile_name(ev.planned_discard) << ")";
      out << "\n";
    }
  }
  return out.str();
}

ComparisonReport compare_agents(const std::vector<ParameterSet>& params,
                                const std::vector<std::string>& names,
                                const std::vector<std::vector<GameLog>>& logs) {
  if (params.size() < 2) throw std::invalid_argument("need at least two parameter sets");
  ComparisonReport rep;
  rep.names = names;
  for (const ParameterSet& p : params) {
    rep.fan_norm.push_back(normalize_weights(p.fan));
    rep.tile_norm.push_back(normalize_weights(p.tile));
  }
  for (const auto& l : logs) rep.freqs.push_back(fan_frequency(l));
  return rep;
}

std::string comparison_to_json(const ComparisonReport& r) {
  const FanCatalog& cat = FanCatalog::instance();
  nlohmann::json j;
  j["agents"] = r.names;
  nlohmann::json fans = nlohmann::json::array();
  for (int f = 0; f < kNumFans; ++f) {
    nlohmann::json row = {{"id", f}, {"name", cat.info(f).name}, {"major", cat.info(f).major}};
    for (size_t a = 0; a < r.fan_norm.size(); ++a) row["weights"].push_back(r.fan_norm[a][f]);
    if (!r.freqs.empty()) {
      for (const auto& fr : r.freqs) row["frequency"].push_back(fr.frequency[f]);
    }
    fans.push_back(row);
  }
  j["fan_weights"] = fans;
  nlohmann::json tiles = nlohmann::json::array();
  for (int t = 0; t < kNumTileKinds; ++t) {
    nlohmann::json row = {{"tile", tile_name(Tile(t))}};
    for (size_t a = 0; a < r.tile_norm.size(); ++a) row["weights"].push_back(r.tile_norm[a][t]);
    tiles.push_back(row);
  }
  j["tile_weights"] = tiles;
  return j.dump(2);
}

std::string comparison_to_text(const ComparisonReport& r) {
  const FanCatalog& cat = FanCatalog::instance();
  std::ostringstream out;
  out << "normalized fan weights (top entries by first agent):\n";
  std::vector<int> order(kNumFans);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return r.fan_norm[0][a] > r.fan_norm[0][b]; });
  out << "  fan";
  for (const auto& n : r.names) out << "\t" << n;
  out << "\n";
  for (int i = 0; i < 12; ++i) {
    int f = order[i];
    out << "  " << cat.info(f).name;
    for (const auto& w : r.fan_norm) {
      char buf[32];
      snprintf(buf, sizeof(buf), "\t%.2f", w[f]);
      out << buf;
    }
    if (!r.freqs.empty()) {
      out << "\t| freq";
      for (const auto& fr : r.freqs) {
        char buf[32];
        snprintf(buf, sizeof(buf), " %.2f%%", 100.0 * fr.frequency[f]);
        out << buf;
      }
    }
    out << "\n";
  }
  return out.str();
}

ParameterSet manipulate_params(const ParameterSet& p, int fan_id, double factor) {
  if (fan_id < 0 || fan_id >= kNumFans) throw std::invalid_argument("unknown fan id");
  if (!(factor > 0.0)) throw std::invalid_argument("factor must be positive");
  ParameterSet out = p;
  out.fan[fan_id] *= factor;
  return out;
}

std::vector<CapAblationRow> ablate_goal_cap(const std::vector<GameLog>& logs,
                                            const std::array<double, 3>& fractions,
                                            uint64_t split_seed, const ParameterSet& fitted,
                                            const std::vector<int>& caps,
                                            const std::vector<Observation>& coverage_states,
                                            int threads) {
  std::vector<CoverageRow> cov = coverage_stats(coverage_states, caps);
  std::vector<CapAblationRow> rows;
  for (size_t i = 0; i < caps.size(); ++i) {
    Dataset ds = build_dataset(logs, fractions, split_seed, caps[i], threads);
    CapAblationRow row;
    row.cap = caps[i];
    row.top1 = topk_accuracy(fitted, ds, Split::Test, 1).restricted;
    row.top3 = topk_accuracy(fitted, ds, Split::Test, 3).restricted;
    row.recall = cov[i].recall;
    row.mean_seconds = cov[i].mean_seconds;
    rows.push_back(row);
  }
  return rows;
}

std::vector<DistAblationRow> ablate_distributions(const Dataset& ds, const Hyperparams& base) {
  std::vector<DistAblationRow> rows;
  const ProbModel configs[4][2] = {{ProbModel::Uniform, ProbModel::Uniform},
                                   {ProbModel::Network, ProbModel::Uniform},
                                   {ProbModel::Uniform, ProbModel::Network},
                                   {ProbModel::Network, ProbModel::Network}};
  for (const auto& cfg : configs) {
    Hyperparams hp = base;
    hp.p_draw_model = cfg[0];
    hp.p_discard_model = cfg[1];
    TrainReport rep = train(ds, hp);
    DistAblationRow row;
    row.draw = cfg[0];
    row.discard = cfg[1];
    row.top1 = rep.top1[2].restricted;
    row.top3 = rep.top3[2].restricted;
    row.parameter_count = rep.parameter_count;
    rows.push_back(row);
  }
  return rows;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("bad rank inputs");
  auto ranks = [](const std::vector<double>& v) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) { return v[x] < v[y]; });
    std::vector<double> r(v.size());
    size_t i = 0;
    while (i < order.size()) {
      size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (size_t q = i; q <= j; ++q) r[order[q]] = avg;
      i = j + 1;
    }
    return r;
  };
  std::vector<double> ra = ranks(a), rb = ranks(b);
  double ma = 0, mb = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= ra.size();
  mb /= rb.size();
  double num = 0, da = 0, db = 0;
  for (size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  if (da == 0 || db == 0) throw std::invalid_argument("degenerate ranks");
  return num / std::sqrt(da * db);
}

}  // namespace mx
