#include "mx/calc.hpp"

#include <algorithm>
#include <stdexcept>

#include "mx/features.hpp"

namespace mx {

AcquisitionProb acquisition_probability(const GoalMissing& m, const UnshownCounter& u,
                                        int game_length, const ParameterSet& p) {
  double sum_u = static_cast<double>(u.total());
  if (sum_u < 1) throw std::invalid_argument("no unshown tiles");
  double punit = static_cast<double>(u.counts[m.tile.index]) / sum_u;
  auto z = tile_features(m.tile, u, game_length);
  AcquisitionProb out;
  out.draw = p.draw_model == ProbModel::Network ? punit * dot_features(z.data(), p.held) : punit;
  double pdisc = p.discard_model == ProbModel::Network
                     ? punit * dot_features(z.data(), p.held_discard)
                     : punit;
  double source = m.pung_able ? 3.0 : m.chow_able ? 1.0 : 0.0;
  out.meld = pdisc * source;
  return out;
}

double goal_value(const Goal& g, const UnshownCounter& u, int game_length,
                  const ParameterSet& p) {
  double sum_u = static_cast<double>(u.total());
  if (sum_u < 1) throw std::invalid_argument("no unshown tiles");
  double prod = 1.0;
  for (const GoalMissing& m : g.missing) {
    // count-scaled uniform mass, then the per-model scalings
    double punit = static_cast<double>(m.count * u.counts[m.tile.index]) / sum_u;
    auto z = tile_features(m.tile, u, game_length);
    double p_draw =
        p.draw_model == ProbModel::Network ? punit * dot_features(z.data(), p.held) : punit;
    double p_disc = p.discard_model == ProbModel::Network
                        ? punit * dot_features(z.data(), p.held_discard)
                        : punit;
    double source = m.pung_able ? 3.0 : m.chow_able ? 1.0 : 0.0;
    double p_meld = p_disc * source;
    prod *= p_draw + p_meld;
  }
  double fw = 0.0;
  for (uint8_t f : g.fans) fw += p.fan[f];
  return 100.0 * prod * fw;
}

std::vector<double> goal_values(const GoalSet& gs, int game_length, const ParameterSet& p) {
  std::vector<double> out;
  out.reserve(gs.goals.size());
  for (const Goal& g : gs.goals) out.push_back(goal_value(g, gs.unshown, game_length, p));
  return out;
}

std::array<double, kNumTileKinds> redundancy_values(const GoalSet& gs,
                                                    const std::vector<double>& values) {
  std::array<double, kNumTileKinds> d{};
  for (size_t i = 0; i < gs.goals.size(); ++i) {
    for (const GoalRedundant& r : gs.goals[i].redundant) d[r.tile.index] += values[i];
  }
  return d;
}

Tile select_discard(const GoalSet& gs, const std::vector<double>& values,
                    const TileMultiset& hand, const ParameterSet& p) {
  if (hand.total() == 0) throw std::invalid_argument("empty hand");
  auto d = redundancy_values(gs, values);
  int best = -1;
  double best_v = 0.0;
  for (int k = 0; k < kNumTileKinds; ++k) {
    if (hand.counts[k] == 0) continue;
    double v = d[k] * p.tile[k];
    if (best < 0 || v > best_v) {
      best = k;
      best_v = v;
    }
  }
  return Tile(best);
}

double position_score(const Observation& obs, const ParameterSet& p, int cap) {
  GoalSet gs = propose_goals(obs, cap);
  std::vector<double> vals = goal_values(gs, obs.game_length, p);
  double score = 0.0;
  for (double v : vals) score += v;
  return score;
}

Observation claim_observation(const Observation& obs, const Action& reaction) {
  if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) {
    throw std::invalid_argument("claim requires another seat's discard");
  }
  Observation next = obs;
  Tile claimed = obs.last_event.tile;
  int from = obs.last_event.seat;
  Meld meld;
  meld.claimed_from = from;
  if (reaction.tag == Action::Tag::Pung) {
    next.hand.remove(claimed, 2);
    meld.kind = MeldKind::Pung;
    meld.tile = claimed;
  } else {
    Tile a, b;
    if (!chow_uses(reaction.tag, claimed, &a, &b)) throw std::invalid_argument("bad chow");
    next.hand.remove(a);
    next.hand.remove(b);
    meld.kind = MeldKind::Chow;
    meld.tile = Tile(std::min({claimed.index, a.index, b.index}));
  }
  next.own_melds.push_back(meld);
  next.all_exposed_melds[obs.seat].push_back(meld);
  // the claimed tile moves from the discard pile into the meld
  auto& pile = next.all_discards[from];
  if (pile.empty() || !(pile.back() == claimed)) {
    throw std::invalid_argument("claimed tile is not the last discard");
  }
  pile.pop_back();
  next.last_event = LastEvent{LastEvent::Kind::AfterClaim, claimed, from};
  return next;
}

Observation discard_observation(const Observation& obs, Tile t) {
  Observation next = obs;
  if (next.hand.counts[t.index] == 0) throw std::invalid_argument("tile not in hand");
  next.hand.remove(t);
  next.all_discards[obs.seat].push_back(t);
  return next;
}

std::vector<ReactionEval> evaluate_reactions(const Observation& obs, const ParameterSet& p,
                                             int cap) {
  if (obs.last_event.kind != LastEvent::Kind::OtherDiscard) {
    throw std::invalid_argument("not a reaction decision point");
  }
  std::vector<ReactionEval> out;
  for (const Action& a : legal_actions(obs)) {
    ReactionEval ev;
    ev.action = a;
    if (a.tag == Action::Tag::Pass) {
      ev.score = position_score(obs, p, cap);
    } else {
      Observation claimed = claim_observation(obs, a);
      GoalSet gs = propose_goals(claimed, cap);
      std::vector<double> vals = goal_values(gs, claimed.game_length, p);
      Tile t = select_discard(gs, vals, claimed.hand, p);
      ev.planned_discard = t;
      ev.has_planned_discard = true;
      ev.score = position_score(discard_observation(claimed, t), p, cap);
    }
    out.push_back(ev);
  }
  return out;
}

Action select_reaction(const Observation& obs, const ParameterSet& p, int cap) {
  if (legal_actions(obs).size() == 1) return Action::pass();  // nothing to weigh
  auto evals = evaluate_reactions(obs, p, cap);
  const ReactionEval* best = &evals.front();
  for (const auto& ev : evals) {
    if (ev.score > best->score) best = &ev;
  }
  return best->action;
}

}  // namespace mx
