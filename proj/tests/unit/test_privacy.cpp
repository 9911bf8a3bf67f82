//
// Copyright 2026 The exactq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//


#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "exactq/harness.hpp"
#include "exactq/privacy.hpp"
#include "exactq/stats.hpp"

namespace exactq {
namespace {

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2)); }

Matrix box_data(int n, int d, double c, std::uint64_t seed) {
  SharedRandomness rng(seed);
  Matrix x(n, std::vector<double>(d));
  for (auto& row : x) {
    for (double& v : row) v = c * (2.0 * rng.uniform01() - 1.0);
  }
  return x;
}

TEST(GaussianMechanismSigma, UnitLogRatio) {
  EXPECT_NEAR(gaussian_mechanism_sigma(1.0, 1.25 / std::numbers::e, 1.0), std::sqrt(2.0), 1e-15);
}

TEST(GaussianMechanismSigma, ReferenceValue) {
  // sqrt(2 ln(1.25e5)) / 2, evaluated separately.
  EXPECT_NEAR(gaussian_mechanism_sigma(2.0, 1e-5, 1.0), 2.4224026, 1e-6);
  EXPECT_NEAR(gaussian_mechanism_sigma(2.0, 1e-5, 3.0), 3.0 * 2.4224026, 3e-6);
}

TEST(GaussianMechanismSigma, DecreasesInEpsilon) {
  double prev = 1e300;
  for (double eps = 0.5; eps <= 10.0; eps += 0.5) {
    const double s = gaussian_mechanism_sigma(eps, 1e-5, 1.0);
    EXPECT_LT(s, prev);
    prev = s;
  }
}

TEST(GaussianMechanismSigma, RejectsBadInput) {
  EXPECT_THROW(gaussian_mechanism_sigma(0.0, 1e-5, 1.0), InvalidArgument);
  EXPECT_THROW(gaussian_mechanism_sigma(1.0, 0.0, 1.0), InvalidArgument);
  EXPECT_THROW(gaussian_mechanism_sigma(1.0, 1.0, 1.0), InvalidArgument);
  EXPECT_THROW(gaussian_mechanism_sigma(1.0, 1e-5, -1.0), InvalidArgument);
}

TEST(PrivacyParams, Validation) {
  PrivacyParams p;
  EXPECT_NO_THROW(p.validate());
  p.gamma_sub = 0.0;
  EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(Sigm, FullParticipationIsIndividualMechanism) {
  const Matrix x = box_data(8, 3, 1.0, 1);
  const SharedRandomness root(2);
  const SigmRound r = sigm_round(x, 0.5, 1.0, 1.0, root);
  const int n = 8;
  const LayerDensity layer(gaussian(0.5 * n), LayerScheme::kShifted);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(r.shared.n_selected[j], n);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      SharedRandomness rng = derive_client_stream(root.substream(1), i, j);
      const LayeredState s = sample_state(layer, rng);
      sum += layered_decode(layered_encode(x[i][j] * std::sqrt(8.0), s), s);
    }
    EXPECT_NEAR(r.estimate[j], sum / (n * std::sqrt(8.0)), 1e-12);
  }
}

TEST(Sigm, ConditionalErrorIsExactGaussian) {
  const Matrix x = box_data(10, 1, 1.0, 3);
  const SharedRandomness root(4);
  std::vector<double> err;
  std::vector<std::vector<double>> by_count(11);
  for (int k = 0; k < 100000; ++k) {
    const SigmRound r = sigm_round(x, 1.0, 0.5, 1.0, root.substream(k));
    err.push_back(r.noise[0]);
    by_count[r.shared.n_selected[0]].push_back(r.noise[0]);
  }
  EXPECT_GT(stats::ks_test(err, [](double e) { return normal_cdf(e, 1.0); }).p_value, 0.01);
  for (int c = 2; c <= 8; ++c) {
    ASSERT_GT(by_count[c].size(), 1000u);
    EXPECT_GT(stats::ks_test(by_count[c], [](double e) { return normal_cdf(e, 1.0); }).p_value, 0.001)
        << "selected=" << c;
  }
}

TEST(Sigm, NoiseIsEstimateMinusSelectedMean) {
  const Matrix x = box_data(20, 5, 0.3, 5);
  const SigmRound r = sigm_round(x, 0.2, 0.4, 0.3, SharedRandomness(6));
  for (int j = 0; j < 5; ++j) {
    double sel = 0.0;
    for (int i = 0; i < 20; ++i) sel += r.shared.selection[i][j] ? x[i][j] : 0.0;
    EXPECT_NEAR(r.noise[j], r.estimate[j] - sel / (0.4 * 20), 1e-12);
  }
}

TEST(Sigm, Unbiased) {
  const Matrix x = box_data(12, 1, 1.0, 7);
  const double target = client_mean(x)[0];
  stats::RunningStats s;
  for (int k = 0; k < 50000; ++k) s.add(sigm_round(x, 0.3, 0.5, 1.0, SharedRandomness(8).substream(k)).estimate[0]);
  EXPECT_NEAR(s.mean(), target, 3.0 * s.standard_error());
}

TEST(Sigm, ErrorBoundAtReferenceSize) {
  const int n = 1000;
  const int d = 100;
  const double gamma = 0.5;
  const double sigma = 0.01;
  SharedRandomness data_rng(9);
  const Matrix x = generate_data({DataKind::kBernoulliUniform, n, d, 0.8, 1.0, ""}, data_rng);
  const std::vector<double> mean = client_mean(x);
  stats::RunningStats mse;
  for (int k = 0; k < 20; ++k) {
    const SigmRound r = sigm_round(x, sigma, gamma, 1.0 / std::sqrt(d), SharedRandomness(10).substream(k));
    double e = 0.0;
    for (int j = 0; j < d; ++j) e += (r.estimate[j] - mean[j]) * (r.estimate[j] - mean[j]);
    mse.add(e);
  }
  EXPECT_LE(mse.mean(), d * 1.0 / (n * gamma) + d * sigma * sigma);
}

TEST(Sigm, EmptyColumnIsPureNoise) {
  const Matrix x = box_data(1, 1, 1.0, 11);
  stats::RunningStats s;
  int empty = 0;
  for (int k = 0; k < 20000; ++k) {
    const SigmRound r = sigm_round(x, 2.0, 0.3, 1.0, SharedRandomness(12).substream(k));
    if (r.shared.n_selected[0] != 0) continue;
    ++empty;
    EXPECT_EQ(r.estimate[0], r.noise[0]);
    s.add(r.estimate[0]);
  }
  EXPECT_GT(empty, 10000);
  EXPECT_NEAR(s.variance(), 4.0, 0.15);
}

TEST(SigmBits, Formula) {
  PrivacyParams p;
  p.n_clients = 1000;
  p.dim = 100;
  p.gamma_sub = 0.5;
  p.clip_c = 1.0;
  const double sigma = 0.001;
  const double nt = 500.0;
  const double eta = 2.0 * sigma * nt * std::sqrt(std::log(4.0));
  EXPECT_EQ(sigm_bits(p, sigma), 0.5 * 100 * std::ceil(std::log2(2.0 + 2.0 * std::sqrt(nt) / eta)));
}

TEST(SigmBits, Limits) {
  PrivacyParams p;
  p.n_clients = 1000;
  p.dim = 100;
  p.gamma_sub = 0.0;
  EXPECT_EQ(sigm_bits(p, 0.1), 0.0);
  p.gamma_sub = 0.5;
  double prev = 1e300;
  for (double sigma : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
    const double b = sigm_bits(p, sigma);
    EXPECT_LE(b, prev);
    prev = b;
  }
  EXPECT_LT(sigm_bits(p, 1e-1), sigm_bits(p, 1e-5));
}

TEST(SigmBits, MeasuredFixedBitsTrackFormula) {
  PrivacyParams p;
  p.n_clients = 1000;
  p.dim = 100;
  p.gamma_sub = 0.5;
  p.clip_c = 1.0 / std::sqrt(100.0);
  const double sigma = 0.005;
  SharedRandomness data_rng(13);
  const Matrix x = generate_data({DataKind::kBernoulliUniform, 1000, 100, 0.8, 1.0, ""}, data_rng);
  stats::RunningStats bits;
  for (int k = 0; k < 20; ++k) {
    const SigmRound r = sigm_round(x, sigma, p.gamma_sub, p.clip_c, SharedRandomness(14).substream(k));
    for (double b : r.bits_fixed) bits.add(b);
  }
  // Realized counts vary around gamma n, so the ratio is close to but not
  // exactly one.
  const double ratio = bits.mean() / sigm_bits(p, sigma);
  EXPECT_LE(ratio, 1.5);
  EXPECT_GE(ratio, 0.5);
}

TEST(Baseline, NoBudgetIsGaussianMechanism) {
  const Matrix x = box_data(6, 4, 1.0, 15);
  const SharedRandomness root(16);
  const SigmSharedState st = sigm_shared_state(6, 4, 1.0, root);
  const std::vector<double> noise{0.1, -0.2, 0.3, 0.0};
  const BaselineRound r = baseline_round(x, st, 1.0, 1.0, std::nullopt, noise, root);
  const std::vector<double> mean = client_mean(x);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(r.estimate[j], mean[j] + noise[j], 1e-12);
}

TEST(Baseline, VarianceIsDitherPlusGaussian) {
  const int bits = 3;
  const double t = 2.0;
  const double sigma = 0.4;
  const double w = t / (1 << bits);
  SharedRandomness rng(17);
  stats::RunningStats sq;
  const std::vector<double> x{0.3, -0.77, 0.9};
  for (int k = 0; k < 100000; ++k) {
    const auto y = baseline_dither_plus_gaussian(x, bits, t, sigma, rng);
    for (int j = 0; j < 3; ++j) sq.add((y[j] - x[j]) * (y[j] - x[j]));
  }
  EXPECT_NEAR(sq.mean(), w * w / 12.0 + sigma * sigma, 3.0 * sq.standard_error());
}

TEST(Baseline, RejectsZeroBudget) {
  SharedRandomness rng(1);
  const std::vector<double> x{0.0};
  EXPECT_THROW(baseline_dither_plus_gaussian(x, 0, 2.0, 1.0, rng), InvalidArgument);
}

TEST(Baseline, NotBetterThanSigmAtMatchedBits) {
  const int n = 1000;
  const int d = 100;
  SharedRandomness data_rng(18);
  const Matrix x = generate_data({DataKind::kBernoulliUniform, n, d, 0.8, 1.0, ""}, data_rng);
  MechanismConfig cfg;
  cfg.sigma = gaussian_mechanism_sigma(1.0, 1e-5, 2.0 / n);
  cfg.gamma_sub = 0.5;
  cfg.clip_c = 1.0 / std::sqrt(d);
  stats::RunningStats diff;
  for (int k = 0; k < 30; ++k) {
    const auto [s, b] = sigm_and_baseline(x, cfg, SharedRandomness(19).substream(k), k, 19);
    EXPECT_GE(b.mean_bits_fixed(), s.mean_bits_fixed());
    diff.add(b.squared_error - s.squared_error);
  }
  EXPECT_GE(diff.mean(), -3.0 * diff.standard_error());
}

}  // namespace
}  // namespace exactq
