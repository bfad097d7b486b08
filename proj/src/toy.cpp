#include "mx/toy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mx {
namespace toy {

namespace {
constexpr double kMinPos = -1.2, kMaxPos = 0.6, kMaxSpeed = 0.07;
constexpr double kGoal = 0.5, kForce = 0.001, kGravity = 0.0025;

int draw_card(Rng& rng) {
  int rank = 1 + static_cast<int>(rng.below(13));
  return std::min(rank, 10);
}
}  // namespace

void MountainCar::reset(Rng& rng) {
  position = rng.uniform(-0.6, -0.4);
  velocity = 0.0;
}

bool MountainCar::step(int action) {
  velocity += (action == 1 ? kForce : -kForce) + std::cos(3.0 * position) * (-kGravity);
  velocity = std::clamp(velocity, -kMaxSpeed, kMaxSpeed);
  position += velocity;
  position = std::clamp(position, kMinPos, kMaxPos);
  if (position <= kMinPos && velocity < 0.0) velocity = 0.0;
  return position >= kGoal;
}

void Blackjack::reset(Rng& rng) {
  player_sum = 0;
  usable_ace = false;
  for (int i = 0; i < 2; ++i) {
    int c = draw_card(rng);
    if (c == 1 && player_sum + 11 <= 21) {
      player_sum += 11;
      usable_ace = true;
    } else {
      player_sum += c;
    }
  }
  if (player_sum > 21) {  // two aces
    player_sum -= 10;
  }
  dealer_card = draw_card(rng);
  dealer_hidden_ = draw_card(rng);
}

std::pair<bool, int> Blackjack::step(int action, Rng& rng) {
  if (action == 1) {
    int c = draw_card(rng);
    player_sum += c;
    if (player_sum > 21 && usable_ace) {
      player_sum -= 10;
      usable_ace = false;
    }
    if (player_sum > 21) return {true, -1};
    return {false, 0};
  }
  // dealer plays to 17
  int dsum = dealer_card;
  bool dusable = false;
  auto add = [&](int c) {
    if (c == 1 && dsum + 11 <= 21) {
      dsum += 11;
      dusable = true;
    } else {
      dsum += c;
    }
    if (dsum > 21 && dusable) {
      dsum -= 10;
      dusable = false;
    }
  };
  add(dealer_hidden_);
  while (dsum < 17) add(draw_card(rng));
  if (dsum > 21 || player_sum > dsum) return {true, 1};
  if (player_sum == dsum) return {true, 0};
  return {true, -1};
}

FitResult fit_template(const TemplateSpec& spec, const std::vector<Datum>& data,
                       double learning_rate, int epochs, uint64_t seed) {
  (void)seed;  // full-batch descent, nothing to sample
  if (data.empty()) throw std::invalid_argument("empty toy log");
  FitResult res;
  res.params = spec.init;
  res.visited.assign(spec.n_cells, false);
  std::vector<int> cell_count(spec.n_cells, 0);
  for (const Datum& d : data) {
    if (d.cell < 0 || d.cell >= spec.n_cells) throw std::invalid_argument("cell out of range");
    res.visited[d.cell] = true;
    cell_count[d.cell]++;
  }
  for (int e = 0; e < epochs; ++e) {
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(spec.n_cells);
    for (const Datum& d : data) {
      double m = spec.margin(res.params, d);
      double sig = 1.0 / (1.0 + std::exp(-m));
      grad[d.cell] += sig - d.action;
    }
    for (int c = 0; c < spec.n_cells; ++c) {
      if (cell_count[c] > 0) res.params[c] -= learning_rate * grad[c] / cell_count[c];
    }
    if (!res.params.allFinite()) throw std::runtime_error("toy fit diverged");
  }
  int agree = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    if (spec.decode(res.params, data[i]) == data[i].action) {
      agree++;
    } else {
      res.disagreements.push_back(static_cast<int>(i));
    }
  }
  res.agreement = static_cast<double>(agree) / data.size();
  return res;
}

TemplateSpec mc_template() {
  TemplateSpec spec;
  spec.kind = TemplateSpec::Kind::CellLogit;
  spec.n_cells = 4;
  spec.init = Eigen::VectorXd::Zero(4);
  return spec;
}

Eigen::VectorXd mc_push_along_velocity() {
  Eigen::VectorXd theta(4);
  // cells: (pos<0,v<0), (pos<0,v>=0), (pos>=0,v<0), (pos>=0,v>=0)
  theta << -1.0, 1.0, -1.0, 1.0;
  return theta;
}

std::vector<Datum> mc_generate(const Eigen::VectorXd& theta, int episodes, uint64_t seed,
                               bool* all_reached_goal) {
  TemplateSpec spec = mc_template();
  std::vector<Datum> data;
  bool all_goal = true;
  for (int e = 0; e < episodes; ++e) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(e)));
    MountainCar env;
    env.reset(rng);
    bool reached = false;
    for (int t = 0; t < 200 && !reached; ++t) {
      Datum d;
      d.cell = mc_cell(env.position, env.velocity);
      d.action = spec.decode(theta, d);
      data.push_back(d);
      reached = env.step(d.action);
    }
    all_goal = all_goal && reached;
  }
  if (all_reached_goal) *all_reached_goal = all_goal;
  return data;
}

TemplateSpec bj_template() {
  TemplateSpec spec;
  spec.kind = TemplateSpec::Kind::Threshold;
  spec.n_cells = 20;
  spec.init = Eigen::VectorXd::Constant(20, 15.0);
  return spec;
}

namespace {

// Exact dealer final-sum distribution for an upcard, infinite deck.
// Index 0..4 = 17..21, index 5 = bust. Tabulated bottom-up over
// (sum, usable ace); hitting only moves toward higher sums or drops the ace.
std::array<double, 6> dealer_distribution(int upcard) {
  static bool ready = false;
  static std::array<double, 6> table[23][2];
  if (!ready) {
    // (sum, usable) can demote to (sum, non-usable), so the non-usable row
    // of each sum is filled first
    for (int sum = 22; sum >= 2; --sum) {
      for (int usable = 0; usable <= 1; ++usable) {
        std::array<double, 6>& dist = table[sum][usable];
        dist.fill(0.0);
        if (sum >= 17) {
          if (sum > 21) {
            dist[5] = 1.0;
          } else {
            dist[sum - 17] = 1.0;
          }
          continue;
        }
        for (int rank = 1; rank <= 13; ++rank) {
          int c = std::min(rank, 10);
          int nsum = sum;
          int nusable = usable;
          if (c == 1 && nsum + 11 <= 21) {
            nsum += 11;
            nusable = 1;
          } else {
            nsum += c;
          }
          if (nsum > 21 && nusable) {
            nsum -= 10;
            nusable = 0;
          }
          // nsum > sum, or nsum == sum with the ace dropped; both already done
          const auto& sub = table[std::min(nsum, 22)][nusable];
          for (int i = 0; i < 6; ++i) dist[i] += sub[i] / 13.0;
        }
      }
    }
    ready = true;
  }
  return table[upcard == 1 ? 11 : upcard][upcard == 1 ? 1 : 0];
}

}  // namespace

Eigen::VectorXd bj_optimal_thresholds() {
  // Player value iteration against the exact dealer distribution.
  // v[sum][usable][dealer]
  static double v[22][2][11];
  static int act[22][2][11];
  for (int dealer = 1; dealer <= 10; ++dealer) {
    auto ddist = dealer_distribution(dealer);
    for (int sum = 21; sum >= 2; --sum) {
      for (int usable = 0; usable <= 1; ++usable) {
        // stick value
        double stick = 0.0;
        for (int i = 0; i < 5; ++i) {
          int dsum = 17 + i;
          stick += ddist[i] * (sum > dsum ? 1.0 : sum == dsum ? 0.0 : -1.0);
        }
        stick += ddist[5] * 1.0;
        // hit value
        double hit = 0.0;
        for (int rank = 1; rank <= 13; ++rank) {
          int c = std::min(rank, 10);
          int nsum = sum;
          int nusable = usable;
          if (c == 1 && nsum + 11 <= 21) {
            nsum += 11;
            nusable = 1;
          } else {
            nsum += c;
          }
          if (nsum > 21 && nusable) {
            nsum -= 10;
            nusable = 0;
          }
          hit += (nsum > 21 ? -1.0 : v[nsum][nusable][dealer]) / 13.0;
        }
        v[sum][usable][dealer] = std::max(stick, hit);
        act[sum][usable][dealer] = hit > stick ? 1 : 0;
      }
    }
  }
  Eigen::VectorXd theta(20);
  for (int usable = 0; usable <= 1; ++usable) {
    for (int dealer = 1; dealer <= 10; ++dealer) {
      // threshold: smallest sum from which the policy stands
      int cut = 22;
      for (int sum = 21; sum >= 4; --sum) {
        if (act[sum][usable][dealer] == 0) {
          cut = sum;
        } else {
          break;  // policies here are monotone in the sum
        }
      }
      theta[bj_cell(usable == 1, dealer)] = static_cast<double>(cut);
    }
  }
  return theta;
}

std::vector<Datum> bj_generate(const Eigen::VectorXd& thresholds, int episodes, uint64_t seed) {
  std::vector<Datum> data;
  for (int e = 0; e < episodes; ++e) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(e)));
    Blackjack env;
    env.reset(rng);
    while (true) {
      Datum d;
      d.cell = bj_cell(env.usable_ace, env.dealer_card);
      d.x = env.player_sum;
      d.action = env.player_sum < thresholds[d.cell] ? 1 : 0;
      data.push_back(d);
      auto [done, reward] = env.step(d.action, rng);
      (void)reward;
      if (done) break;
    }
  }
  return data;
}

}  // namespace toy
}  // namespace mx
