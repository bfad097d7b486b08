#include "doctest.h"
#include "mx/rng.hpp"

#include <cmath>
#include <vector>

// Property checks for the two constructions behind the parallel form: one-hot
// branch masking selects exactly the active branch, and identity padding
// leaves sum/product reductions untouched. Each property runs over a thousand
// randomized programs.

using mx::Rng;

namespace {

constexpr int kTrials = 1000;
constexpr int kPad = 64;

double affine(double a, double b, double x) { return a * x + b; }

}  // namespace

TEST_CASE("one-hot masked branch sums equal the selected branch") {
  Rng rng(0xbead1);
  for (int trial = 0; trial < kTrials; ++trial) {
    int n = 2 + static_cast<int>(rng.below(5));
    std::vector<double> slope(n), inter(n);
    for (int i = 0; i < n; ++i) {
      slope[i] = rng.uniform(-3.0, 3.0);
      inter[i] = rng.uniform(-3.0, 3.0);
    }
    double x = rng.uniform(-5.0, 5.0);
    int active = static_cast<int>(rng.below(n));

    // classical: evaluate only the active branch
    double classical = affine(slope[active], inter[active], x);

    // parallel: evaluate all branches, mask, sum
    double masked_sum = 0.0;
    for (int i = 0; i < n; ++i) {
      double mask = i == active ? 1.0 : 0.0;
      masked_sum += mask * affine(slope[i], inter[i], x);
    }
    CHECK(masked_sum == classical);
  }
}

TEST_CASE("identity-padded sum reductions match the unpadded loop") {
  Rng rng(0xbead2);
  for (int trial = 0; trial < kTrials; ++trial) {
    int k = static_cast<int>(rng.below(kPad + 1));
    std::vector<double> data(k);
    for (double& d : data) d = rng.uniform(-10.0, 10.0);

    double classical = 0.0;
    for (double d : data) classical += d;

    double padded = 0.0;
    for (int i = 0; i < kPad; ++i) padded += i < k ? data[i] : 0.0;  // P = 0 for sums
    CHECK(padded == classical);
  }
}

TEST_CASE("identity-padded product reductions match the unpadded loop") {
  Rng rng(0xbead3);
  for (int trial = 0; trial < kTrials; ++trial) {
    int k = static_cast<int>(rng.below(kPad + 1));
    std::vector<double> data(k);
    std::vector<double> indicator(kPad, 0.0);
    for (int i = 0; i < k; ++i) {
      data[i] = rng.uniform(-2.0, 2.0);
      indicator[i] = 1.0;
    }

    double classical = 1.0;
    for (double d : data) classical *= d;

    // the masked formulation: indicator * value + (1 - indicator)
    double padded = 1.0;
    for (int i = 0; i < kPad; ++i) {
      double v = i < k ? data[i] : rng.uniform(-9.0, 9.0);  // garbage beyond real data
      padded *= indicator[i] * v + (1.0 - indicator[i]);
    }
    CHECK(padded == classical);
  }
}

TEST_CASE("zero-padded dependent accumulation matches the sequential loop") {
  // iteration i depends on iteration i-1 (a running prefix sum); padding
  // forces the dead iterations to contribute zero
  Rng rng(0xbead4);
  for (int trial = 0; trial < kTrials; ++trial) {
    int k = 1 + static_cast<int>(rng.below(kPad));
    std::vector<double> data(k);
    for (double& d : data) d = rng.uniform(-4.0, 4.0);

    // classical: sum of prefix sums
    double classical = 0.0;
    {
      double run = 0.0;
      for (int i = 0; i < k; ++i) {
        run += data[i];
        classical += run;
      }
    }

    // parallel schema: fixed 64 iterations, indicator zeroes the padding
    double padded_total = 0.0;
    {
      double prev = 0.0;
      for (int i = 0; i < kPad; ++i) {
        double ind = i < k ? 1.0 : 0.0;
        double r = (prev + (i < k ? data[i] : 0.0)) * ind;
        padded_total += r;
        prev = r;
      }
    }
    CHECK(padded_total == doctest::Approx(classical).epsilon(1e-15));
  }
}
