#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "mx/dataset.hpp"
#include "mx/params.hpp"

namespace mx {

struct Hyperparams {
  double learning_rate = 1e-2;
  int batch_size = 256;
  int epochs = 30;
  double lambda_reg = 1.0;
  uint64_t seed = 0;
  ProbModel p_draw_model = ProbModel::Network;
  ProbModel p_discard_model = ProbModel::Uniform;
  bool adaptive = true;  // per-parameter step scaling on top of plain descent
  int threads = 0;
};

// Gradient holder with the same group layout as ParameterSet.
struct ParamGrad {
  Eigen::VectorXd fan = Eigen::VectorXd::Zero(80);
  Eigen::VectorXd held = Eigen::VectorXd::Zero(kNumHeldFeatures);
  Eigen::VectorXd tile = Eigen::VectorXd::Zero(kNumTileKinds);
  Eigen::VectorXd held_discard = Eigen::VectorXd::Zero(kNumHeldFeatures);

  void add(const ParamGrad& o) {
    fan += o.fan;
    held += o.held;
    tile += o.tile;
    held_discard += o.held_discard;
  }
  void scale(double c) {
    fan *= c;
    held *= c;
    tile *= c;
    held_discard *= c;
  }
};

// Mean cross-entropy over the masked 39-way softmax of the batch, plus the
// penalty on negative fan preferences lambda * sum (fan - |fan|)^2.
double loss(const ParameterSet& p, const Dataset& ds, const std::vector<int>& batch,
            double lambda);

// Analytic gradient of loss() with respect to every parameter group.
ParamGrad gradient(const ParameterSet& p, const Dataset& ds, const std::vector<int>& batch,
                   double lambda);

struct AccuracyReport {
  double restricted = 0.0;  // percent, states with >= 2 legal actions
  double overall = 0.0;     // percent, every state
  double footnote = 0.0;    // 70 + 0.3 * restricted
};

AccuracyReport topk_accuracy(const ParameterSet& p, const Dataset& ds, Split split, int k);

struct TrainReport {
  std::vector<double> loss_curve;  // per-epoch mean training loss
  AccuracyReport top1[3];
  AccuracyReport top3[3];
  ParameterSet params;  // checkpoint with the best validation top-1
  int parameter_count = 0;
  int best_epoch = -1;
  double best_val_top1 = 0.0;
};

// Mini-batch gradient descent from the all-ones initialization, checkpointing
// on validation top-1 restricted accuracy. Throws on a non-finite loss.
TrainReport train(const Dataset& ds, const Hyperparams& hp);

// 100 * (v - min) / sum(v - min); throws std::invalid_argument when all
// entries are equal.
Eigen::VectorXd normalize_weights(const Eigen::VectorXd& v);

std::string train_report_json(const TrainReport& r);

}  // namespace mx
