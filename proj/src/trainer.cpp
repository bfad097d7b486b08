#include "mx/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mx/features.hpp"
#include "mx/rng.hpp"

namespace mx {

namespace {

// Lazily materialized feature rows for one example's (U, L).
struct FeatureCache {
  UnshownCounter u;
  double sum_u = 0.0;
  int game_length = 1;
  std::array<bool, kNumTileKinds> have{};
  std::array<Eigen::Matrix<double, kNumHeldFeatures, 1>, kNumTileKinds> rows;

  void init(const std::array<uint8_t, kNumTileKinds>& counts, int length) {
    for (int k = 0; k < kNumTileKinds; ++k) u.counts[k] = counts[k];
    sum_u = static_cast<double>(u.total());
    game_length = length;
    have.fill(false);
  }
  const double* row(int t) {
    if (!have[t]) {
      rows[t] = tile_features(Tile(t), u, game_length);
      have[t] = true;
    }
    return rows[t].data();
  }
};

// Saved forward intermediates of one goal, enough for the backward pass.
struct GoalSave {
  double prod = 1.0;
  double fw = 0.0;
  // one entry per missing kind
  double factors[8];
  double punits[8];
  const double* zrows[8];
  double sources[8];
  int n = 0;
};

double eval_goal(const CompactGoal& g, FeatureCache& fc, const ParameterSet& p, GoalSave* save) {
  const bool draw_net = p.draw_model == ProbModel::Network;
  const bool disc_net = p.discard_model == ProbModel::Network;
  double prod = 1.0;
  int n = 0;
  for (const auto& m : g.missing) {
    double punit = static_cast<double>(m.count * fc.u.counts[m.tile]) / fc.sum_u;
    const double* z = fc.row(m.tile);
    double p_draw = draw_net ? punit * dot_features(z, p.held) : punit;
    double p_disc = disc_net ? punit * dot_features(z, p.held_discard) : punit;
    double source = m.branch == 0 ? 3.0 : m.branch == 1 ? 1.0 : 0.0;
    double factor = p_draw + p_disc * source;
    if (save && n < 8) {
      save->factors[n] = factor;
      save->punits[n] = punit;
      save->zrows[n] = z;
      save->sources[n] = source;
    }
    prod *= factor;
    ++n;
  }
  double fw = 0.0;
  for (uint8_t f : g.fans) fw += p.fan[f];
  if (save) {
    save->prod = prod;
    save->fw = fw;
    save->n = std::min(n, 8);
  }
  return 100.0 * prod * fw;
}

// dL/dv -> parameter gradients for one goal.
void backward_goal(const CompactGoal& g, const GoalSave& s, const ParameterSet& p, double dv,
                   ParamGrad& grad) {
  const bool draw_net = p.draw_model == ProbModel::Network;
  const bool disc_net = p.discard_model == ProbModel::Network;
  double dprod_fw = dv * 100.0;
  for (uint8_t f : g.fans) grad.fan[f] += dprod_fw * s.prod;
  if (!draw_net && !disc_net) return;
  if (s.n == 0) return;
  // leave-one-out products (factors may be zero, so no division)
  double prefix[9], suffix[9];
  prefix[0] = 1.0;
  for (int i = 0; i < s.n; ++i) prefix[i + 1] = prefix[i] * s.factors[i];
  suffix[s.n] = 1.0;
  for (int i = s.n - 1; i >= 0; --i) suffix[i] = suffix[i + 1] * s.factors[i];
  for (int i = 0; i < s.n; ++i) {
    double dfactor = dprod_fw * s.fw * prefix[i] * suffix[i + 1];
    if (dfactor == 0.0) continue;
    if (draw_net) {
      double c = dfactor * s.punits[i];
      for (int j = 0; j < kNumHeldFeatures; ++j) grad.held[j] += c * s.zrows[i][j];
    }
    if (disc_net && s.sources[i] != 0.0) {
      double c = dfactor * s.punits[i] * s.sources[i];
      for (int j = 0; j < kNumHeldFeatures; ++j) grad.held_discard[j] += c * s.zrows[i][j];
    }
  }
}

struct SlotLogit {
  int output = 0;   // combined output index
  double logit = 0.0;
};

// Forward pass of one example: fills the legal output logits. When
// `grad` is set, also runs the backward pass for the cross-entropy at
// `label` and accumulates parameter gradients; returns the CE loss.
double eval_example(const VecExample& ex, const ParameterSet& p, ParamGrad* grad,
                    std::vector<SlotLogit>* logits_out) {
  thread_local FeatureCache fc;
  fc.init(ex.unshown, ex.game_length);

  std::vector<SlotLogit> logits;
  // per-slot backward closures are emulated with saved state below
  std::vector<double> values;
  std::vector<GoalSave> saves;

  struct ClaimChoice {
    const CompactPosition* scored = nullptr;  // position whose value sum is the logit
  };
  std::vector<ClaimChoice> claim_choices;
  const CompactPosition* pass_pos = nullptr;

  if (!ex.is_reaction) {
    values.reserve(ex.main.goals.size());
    if (grad) saves.resize(ex.main.goals.size());
    double d_raw[kNumTileKinds] = {0};
    for (size_t i = 0; i < ex.main.goals.size(); ++i) {
      double v = eval_goal(ex.main.goals[i], fc, p, grad ? &saves[i] : nullptr);
      values.push_back(v);
      for (uint8_t t : ex.main.goals[i].redundant) d_raw[t] += v;
    }
    for (int t = 0; t < kNumTileKinds; ++t) {
      if (ex.hand[t] > 0) logits.push_back(SlotLogit{t, d_raw[t] * p.tile[t]});
    }
    if (logits_out) *logits_out = logits;
    if (!grad) {
      return 0.0;
    }
    // softmax + CE at the label
    double mx_logit = logits[0].logit;
    for (const auto& s : logits) mx_logit = std::max(mx_logit, s.logit);
    double Z = 0.0;
    for (const auto& s : logits) Z += std::exp(s.logit - mx_logit);
    double ce = 0.0;
    std::vector<double> dlogit(logits.size());
    for (size_t i = 0; i < logits.size(); ++i) {
      double prob = std::exp(logits[i].logit - mx_logit) / Z;
      bool is_label = logits[i].output == ex.label;
      if (is_label) ce = -std::log(std::max(prob, 1e-300));
      dlogit[i] = prob - (is_label ? 1.0 : 0.0);
    }
    // logit[t] = d_raw[t] * tile[t]
    std::vector<double> dv(ex.main.goals.size(), 0.0);
    for (size_t i = 0; i < logits.size(); ++i) {
      int t = logits[i].output;
      grad->tile[t] += dlogit[i] * d_raw[t];
    }
    for (size_t i = 0; i < logits.size(); ++i) {
      int t = logits[i].output;
      double c = dlogit[i] * p.tile[t];
      if (c == 0.0) continue;
      for (size_t g = 0; g < ex.main.goals.size(); ++g) {
        for (uint8_t rt : ex.main.goals[g].redundant) {
          if (rt == t) {
            dv[g] += c;
            break;
          }
        }
      }
    }
    for (size_t g = 0; g < ex.main.goals.size(); ++g) {
      if (dv[g] != 0.0) backward_goal(ex.main.goals[g], saves[g], p, dv[g], *grad);
    }
    return ce;
  }

  // Reaction example: pass plus claim branches.
  auto position_sum = [&](const CompactPosition& pos) {
    double acc = 0.0;
    for (const auto& g : pos.goals) acc += eval_goal(g, fc, p, nullptr);
    return acc;
  };
  pass_pos = &ex.pass_position;
  logits.push_back(SlotLogit{kNumTileKinds + 0, position_sum(ex.pass_position)});
  claim_choices.resize(ex.claims.size());
  for (size_t c = 0; c < ex.claims.size(); ++c) {
    const auto& br = ex.claims[c];
    // inner discard selection on the post-claim position
    double d_raw[kNumTileKinds] = {0};
    for (const auto& g : br.post_claim.goals) {
      double v = eval_goal(g, fc, p, nullptr);
      for (uint8_t t : g.redundant) d_raw[t] += v;
    }
    int best = -1;
    double best_v = 0.0;
    for (int t = 0; t < kNumTileKinds; ++t) {
      if (br.post_hand[t] == 0) continue;
      double v = d_raw[t] * p.tile[t];
      if (best < 0 || v > best_v) {
        best = t;
        best_v = v;
      }
    }
    const CompactPosition* scored = nullptr;
    for (const auto& [t, pos] : br.post_discard) {
      if (t == best) scored = &pos;
    }
    if (!scored) throw std::logic_error("post-discard position missing");
    claim_choices[c].scored = scored;
    logits.push_back(SlotLogit{br.slot, position_sum(*scored)});
  }
  if (logits_out) *logits_out = logits;
  if (!grad) return 0.0;

  double mx_logit = logits[0].logit;
  for (const auto& s : logits) mx_logit = std::max(mx_logit, s.logit);
  double Z = 0.0;
  for (const auto& s : logits) Z += std::exp(s.logit - mx_logit);
  double ce = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    double prob = std::exp(logits[i].logit - mx_logit) / Z;
    bool is_label = logits[i].output == ex.label;
    if (is_label) ce = -std::log(std::max(prob, 1e-300));
    double dscore = prob - (is_label ? 1.0 : 0.0);
    if (dscore == 0.0) continue;
    const CompactPosition* pos = i == 0 ? pass_pos : claim_choices[i - 1].scored;
    for (const auto& g : pos->goals) {
      GoalSave s2;
      eval_goal(g, fc, p, &s2);
      backward_goal(g, s2, p, dscore, *grad);
    }
  }
  return ce;
}

double regularizer(const ParameterSet& p, double lambda) {
  double acc = 0.0;
  for (int f = 0; f < p.fan.size(); ++f) {
    double u = p.fan[f] - std::fabs(p.fan[f]);
    acc += u * u;
  }
  return lambda * acc;
}

void regularizer_grad(const ParameterSet& p, double lambda, ParamGrad& grad) {
  for (int f = 0; f < p.fan.size(); ++f) {
    if (p.fan[f] < 0.0) grad.fan[f] += lambda * 8.0 * p.fan[f];
  }
}

// Batch loss and (optionally) gradient, sharded deterministically.
double eval_batch(const ParameterSet& p, const Dataset& ds, const std::vector<int>& batch,
                  double lambda, ParamGrad* grad, int threads) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, static_cast<int>(batch.size()));
  std::vector<double> losses(threads, 0.0);
  std::vector<ParamGrad> grads(grad ? threads : 0);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      size_t lo = batch.size() * t / threads;
      size_t hi = batch.size() * (t + 1) / threads;
      for (size_t i = lo; i < hi; ++i) {
        losses[t] += eval_example(ds.examples[batch[i]], p, grad ? &grads[t] : nullptr, nullptr);
      }
    });
  }
  for (auto& th : pool) th.join();
  double total = 0.0;
  for (double l : losses) total += l;
  double mean = total / batch.size();
  if (grad) {
    for (int t = 0; t < threads; ++t) grad->add(grads[t]);
    grad->scale(1.0 / batch.size());
    regularizer_grad(p, lambda, *grad);
  }
  return mean + regularizer(p, lambda);
}

}  // namespace

double loss(const ParameterSet& p, const Dataset& ds, const std::vector<int>& batch,
            double lambda) {
  return eval_batch(p, ds, batch, lambda, nullptr, 0);
}

ParamGrad gradient(const ParameterSet& p, const Dataset& ds, const std::vector<int>& batch,
                   double lambda) {
  ParamGrad g;
  eval_batch(p, ds, batch, lambda, &g, 0);
  return g;
}

AccuracyReport topk_accuracy(const ParameterSet& p, const Dataset& ds, Split split, int k) {
  const std::vector<int>& idx = ds.of(split);
  int64_t correct = 0;
  int threads = std::max(1u, std::thread::hardware_concurrency());
  std::vector<int64_t> part(threads, 0);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      std::vector<SlotLogit> logits;
      for (size_t i = t; i < idx.size(); i += threads) {
        eval_example(ds.examples[idx[i]], p, nullptr, &logits);
        double label_logit = 0.0;
        bool found = false;
        for (const auto& s : logits) {
          if (s.output == ds.examples[idx[i]].label) {
            label_logit = s.logit;
            found = true;
          }
        }
        if (!found) continue;  // label technically illegal; counts as wrong
        int ahead = 0;
        for (const auto& s : logits) {
          if (s.logit > label_logit ||
              (s.logit == label_logit && s.output < ds.examples[idx[i]].label)) {
            ahead++;
          }
        }
        if (ahead < k) part[t]++;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int64_t c : part) correct += c;

  AccuracyReport rep;
  int64_t n_restricted = static_cast<int64_t>(idx.size());
  int64_t n_forced = ds.forced(split);
  rep.restricted = n_restricted ? 100.0 * correct / n_restricted : 0.0;
  rep.overall = (n_restricted + n_forced)
                    ? 100.0 * (correct + n_forced) / (n_restricted + n_forced)
                    : 0.0;
  rep.footnote = 70.0 + 0.3 * rep.restricted;
  return rep;
}

Eigen::VectorXd normalize_weights(const Eigen::VectorXd& v) {
  double lo = v.minCoeff();
  Eigen::VectorXd shifted = v.array() - lo;
  double total = shifted.sum();
  if (total <= 0.0) throw std::invalid_argument("normalize_weights: all entries equal");
  return 100.0 * shifted / total;
}

TrainReport train(const Dataset& ds, const Hyperparams& hp) {
  ParameterSet p = ParameterSet::ones(hp.p_draw_model, hp.p_discard_model);
  TrainReport report;
  report.parameter_count = p.parameter_count();

  std::vector<int> order = ds.of(Split::Train);
  if (order.empty()) throw std::invalid_argument("empty training split");
  Rng rng(hp.seed);

  // Optional per-parameter adaptive scaling (Adam-style moments).
  ParamGrad m1, m2;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  int64_t step = 0;

  auto update_group = [&](Eigen::VectorXd& theta, Eigen::VectorXd& g, Eigen::VectorXd& mm,
                          Eigen::VectorXd& vv) {
    if (hp.adaptive) {
      mm = beta1 * mm + (1 - beta1) * g;
      vv = beta2 * vv.array() + (1 - beta2) * g.array().square();
      double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      theta.array() -= hp.learning_rate * (mm.array() / c1) /
                       ((vv.array() / c2).sqrt() + eps);
    } else {
      theta -= hp.learning_rate * g;
    }
  };

  report.best_val_top1 = -1.0;
  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    int n_batches = 0;
    for (size_t start = 0; start < order.size(); start += hp.batch_size) {
      size_t stop = std::min(order.size(), start + hp.batch_size);
      std::vector<int> batch(order.begin() + start, order.begin() + stop);
      ParamGrad g;
      double l = eval_batch(p, ds, batch, hp.lambda_reg, &g, hp.threads);
      if (!std::isfinite(l)) throw std::runtime_error("training diverged: non-finite loss");
      epoch_loss += l;
      n_batches++;
      step++;
      update_group(p.fan, g.fan, m1.fan, m2.fan);
      update_group(p.tile, g.tile, m1.tile, m2.tile);
      if (p.draw_model == ProbModel::Network) update_group(p.held, g.held, m1.held, m2.held);
      if (p.discard_model == ProbModel::Network) {
        update_group(p.held_discard, g.held_discard, m1.held_discard, m2.held_discard);
      }
    }
    report.loss_curve.push_back(epoch_loss / std::max(1, n_batches));
    double val = topk_accuracy(p, ds, Split::Validation, 1).restricted;
    if (val > report.best_val_top1) {
      report.best_val_top1 = val;
      report.best_epoch = epoch;
      report.params = p;
    }
  }
  if (report.best_epoch < 0) report.params = p;

  for (int s = 0; s < 3; ++s) {
    report.top1[s] = topk_accuracy(report.params, ds, static_cast<Split>(s), 1);
    report.top3[s] = topk_accuracy(report.params, ds, static_cast<Split>(s), 3);
  }
  return report;
}

std::string train_report_json(const TrainReport& r) {
  nlohmann::json j;
  j["loss_curve"] = r.loss_curve;
  const char* names[3] = {"train", "validation", "test"};
  for (int s = 0; s < 3; ++s) {
    j["top1"][names[s]] = {{"restricted", r.top1[s].restricted},
                           {"overall", r.top1[s].overall},
                           {"footnote", r.top1[s].footnote}};
    j["top3"][names[s]] = {{"restricted", r.top3[s].restricted},
                           {"overall", r.top3[s].overall},
                           {"footnote", r.top3[s].footnote}};
  }
  j["parameter_count"] = r.parameter_count;
  j["best_epoch"] = r.best_epoch;
  j["best_val_top1_restricted"] = r.best_val_top1;
  return j.dump(2);
}

}  // namespace mx
