#pragma once

#include <Eigen/Core>
#include <string>

#include "mx/tile.hpp"

namespace mx {

inline constexpr int kNumHeldFeatures = 12;

enum class ProbModel : uint8_t { Uniform, Network };

// The learnable groups: fan preferences (80), draw-model linear weights (12),
// tile preferences (34), plus an optional second 12-weight group when the
// discard side is also modeled. Defaults to the draw=network /
// discard=uniform configuration.
struct ParameterSet {
  Eigen::VectorXd fan = Eigen::VectorXd::Ones(80);
  Eigen::VectorXd held = Eigen::VectorXd::Ones(kNumHeldFeatures);
  Eigen::VectorXd tile = Eigen::VectorXd::Ones(kNumTileKinds);
  Eigen::VectorXd held_discard = Eigen::VectorXd::Ones(kNumHeldFeatures);
  ProbModel draw_model = ProbModel::Network;
  ProbModel discard_model = ProbModel::Uniform;

  static ParameterSet ones(ProbModel draw = ProbModel::Network,
                           ProbModel discard = ProbModel::Uniform) {
    ParameterSet p;
    p.draw_model = draw;
    p.discard_model = discard;
    return p;
  }

  // 80 + 34 plus 12 per active linear model: 114/126/126/138.
  int parameter_count() const {
    return 80 + kNumTileKinds + (draw_model == ProbModel::Network ? kNumHeldFeatures : 0) +
           (discard_model == ProbModel::Network ? kNumHeldFeatures : 0);
  }
};

std::string to_json(const ParameterSet& p);
ParameterSet params_from_json(const std::string& text);
void save_params(const ParameterSet& p, const std::string& path);
ParameterSet load_params(const std::string& path);

const char* prob_model_name(ProbModel m);
ProbModel parse_prob_model(const std::string& s);

}  // namespace mx
