#pragma once

#include <vector>

#include "mx/goal.hpp"
#include "mx/observation.hpp"
#include "mx/params.hpp"

namespace mx {

struct AcquisitionProb {
  double draw = 0.0;
  double meld = 0.0;
};

// Per-copy acquisition probabilities for one missing tile. The draw side is
// U[t]/S scaled by the linear held model (when active); the meld side is the
// uniform discard mass times the source coefficient 3 / 1 / 0 for
// pung-able / chow-able / neither.
AcquisitionProb acquisition_probability(const GoalMissing& m, const UnshownCounter& u,
                                        int game_length, const ParameterSet& p);

// Value of one goal: v = 100 * prod_over_missing_kinds(p_draw + p_meld) * fan_weight.
// A kind missing two copies contributes a single factor with doubled uniform
// mass, mirroring the tensor layout of the parallel form.
double goal_value(const Goal& g, const UnshownCounter& u, int game_length,
                  const ParameterSet& p);

std::vector<double> goal_values(const GoalSet& gs, int game_length, const ParameterSet& p);

// Accumulated redundancy value per tile kind (before the tile preference).
std::array<double, kNumTileKinds> redundancy_values(const GoalSet& gs,
                                                    const std::vector<double>& values);

// The discard with the highest preference-scaled redundancy value among held
// tiles; exact ties resolve to the lowest tile index.
Tile select_discard(const GoalSet& gs, const std::vector<double>& values,
                    const TileMultiset& hand, const ParameterSet& p);

// Sum of proposed goal values at obs; the position score used for reactions.
double position_score(const Observation& obs, const ParameterSet& p, int cap = kDefaultGoalCap);

// The hypothetical observation after executing a chow/pung claim.
Observation claim_observation(const Observation& obs, const Action& reaction);

// The observation after discarding `t` from a post-claim or post-draw hand.
Observation discard_observation(const Observation& obs, Tile t);

struct ReactionEval {
  Action action;
  double score = 0.0;
  Tile planned_discard;       // the follow-up discard for claim branches
  bool has_planned_discard = false;
};

// Scores for every legal reaction: pass on the unchanged hand, claims via
// claim -> best discard -> resulting position.
std::vector<ReactionEval> evaluate_reactions(const Observation& obs, const ParameterSet& p,
                                             int cap = kDefaultGoalCap);

// The best-scoring legal reaction (ties keep the earlier entry in the fixed
// order pass, chow-low, chow-mid, chow-high, pung).
Action select_reaction(const Observation& obs, const ParameterSet& p, int cap = kDefaultGoalCap);

}  // namespace mx
