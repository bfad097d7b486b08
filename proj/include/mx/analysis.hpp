#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mx/calc.hpp"
#include "mx/dataset.hpp"
#include "mx/goal.hpp"
#include "mx/trainer.hpp"

namespace mx {

// A complete record of one decision for offline inspection.
struct ExplanationTrace {
  uint64_t obs_digest = 0;
  bool is_reaction = false;
  struct TraceGoal {
    int index = 0;
    std::vector<uint8_t> fans;
    int shanten = 0;
    std::vector<GoalMissing> missing;
    std::vector<GoalRedundant> redundant;
    double value = 0.0;
    double value_norm = 0.0;  // max-normalized
  };
  std::vector<TraceGoal> goals;  // descending normalized value
  std::array<double, kNumTileKinds> redundancy{};         // accumulated d[t]
  std::array<double, kNumTileKinds> redundancy_scaled{};  // d[t] * tile preference
  Action chosen;
  std::vector<ReactionEval> reaction_scores;  // reaction points only
};

ExplanationTrace explain_decision(const Observation& obs, const ParameterSet& p,
                                  int cap = kDefaultGoalCap);

std::string trace_to_json(const ExplanationTrace& t);
std::string trace_to_text(const ExplanationTrace& t);

// Side-by-side normalized parameters of several agents, optionally with
// winning-fan frequencies from their logs.
struct ComparisonReport {
  std::vector<std::string> names;
  std::vector<Eigen::VectorXd> fan_norm;   // per agent, 80 entries summing to 100
  std::vector<Eigen::VectorXd> tile_norm;  // per agent, 34 entries
  std::vector<FanFrequencyTable> freqs;    // empty when no logs given
};

ComparisonReport compare_agents(const std::vector<ParameterSet>& params,
                                const std::vector<std::string>& names,
                                const std::vector<std::vector<GameLog>>& logs = {});

std::string comparison_to_json(const ComparisonReport& r);
std::string comparison_to_text(const ComparisonReport& r);

// Copy of `p` with one fan weight scaled; factor must be positive.
ParameterSet manipulate_params(const ParameterSet& p, int fan_id, double factor);

struct CapAblationRow {
  int cap = 0;
  double top1 = 0.0;
  double top3 = 0.0;
  double recall = 0.0;
  double mean_seconds = 0.0;
};

// Re-evaluates a fitted parameter set under different goal caps (test split
// accuracy) and joins the min-distance coverage study.
std::vector<CapAblationRow> ablate_goal_cap(const std::vector<GameLog>& logs,
                                            const std::array<double, 3>& fractions,
                                            uint64_t split_seed, const ParameterSet& fitted,
                                            const std::vector<int>& caps,
                                            const std::vector<Observation>& coverage_states,
                                            int threads = 0);

struct DistAblationRow {
  ProbModel draw;
  ProbModel discard;
  double top1 = 0.0;
  double top3 = 0.0;
  int parameter_count = 0;
};

// Trains all four draw/discard probability-model configurations on one
// dataset and reports held-out accuracy and parameter counts.
std::vector<DistAblationRow> ablate_distributions(const Dataset& ds, const Hyperparams& base);

// Spearman rank correlation.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace mx
