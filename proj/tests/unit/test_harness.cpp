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
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "exactq/harness.hpp"

namespace exactq {
namespace {

TEST(GenerateData, BernoulliUniformBoundsAndSign) {
  SharedRandomness rng(1);
  const Matrix x = generate_data({DataKind::kBernoulliUniform, 2000, 25, 0.8, 1.0, ""}, rng);
  stats::RunningStats positive;
  for (const auto& row : x) {
    double norm2 = 0.0;
    for (double v : row) {
      EXPECT_LE(std::abs(v), 1.0 / 5.0);
      positive.add(v > 0.0 ? 1.0 : 0.0);
      norm2 += v * v;
    }
    EXPECT_LE(norm2, 1.0 + 1e-12);
  }
  EXPECT_NEAR(positive.mean(), 0.8, 3.0 * positive.standard_error());
}

TEST(GenerateData, SphereRadius) {
  SharedRandomness rng(2);
  const Matrix x = generate_data({DataKind::kL2Sphere, 500, 75, 0.8, 10.0, ""}, rng);
  for (const auto& row : x) {
    double norm2 = 0.0;
    for (double v : row) norm2 += v * v;
    EXPECT_NEAR(std::sqrt(norm2), 10.0, 1e-12);
  }
}

TEST(GenerateData, CustomFile) {
  const std::string path = ::testing::TempDir() + "exactq_custom.txt";
  {
    std::ofstream out(path);
    out << "2 3\n1 2 3\n-1.5 0 4e-1\n";
  }
  DatasetSpec spec;
  spec.kind = DataKind::kCustomFile;
  spec.path = path;
  SharedRandomness rng(0);
  const Matrix x = generate_data(spec, rng);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_EQ(x[1][0], -1.5);
  EXPECT_EQ(x[1][2], 0.4);
  {
    std::ofstream out(path);
    out << "2 3\n1 2 3\n-1.5 0\n";
  }
  EXPECT_THROW(generate_data(spec, rng), InvalidArgument);
  spec.path = path + ".missing";
  EXPECT_THROW(generate_data(spec, rng), InvalidArgument);
  std::remove(path.c_str());
}

TEST(Mechanisms, NamesRoundTrip) {
  for (Mechanism m : {Mechanism::kExact, Mechanism::kIndividualDirect, Mechanism::kIndividualShifted,
                      Mechanism::kIrwinHall, Mechanism::kAggregateGaussian, Mechanism::kSigm,
                      Mechanism::kBaseline}) {
    EXPECT_EQ(parse_mechanism(to_string(m)), m);
  }
  EXPECT_THROW(parse_mechanism("csgm"), InvalidArgument);
}

TEST(RunExperiment, ExactMeanHasZeroError) {
  const DatasetSpec spec{DataKind::kBernoulliUniform, 10, 4, 0.8, 1.0, ""};
  for (const auto& r : run_experiment(Mechanism::kExact, spec, MechanismConfig{}, 5, 1)) {
    EXPECT_EQ(r.squared_error, 0.0);
  }
}

class NoiseOnly : public ::testing::TestWithParam<Mechanism> {};

TEST_P(NoiseOnly, MeanSquaredErrorIsDimTimesVariance) {
  const int d = 4;
  const double sigma = 0.5;
  const DatasetSpec spec{DataKind::kBernoulliUniform, 10, d, 0.8, 1.0, ""};
  MechanismConfig cfg;
  cfg.sigma = sigma;
  const auto reports = run_experiment(GetParam(), spec, cfg, 3000, 2);
  stats::RunningStats mse;
  std::vector<stats::RunningStats> bias(d);
  for (const auto& r : reports) {
    mse.add(r.squared_error);
    for (int j = 0; j < d; ++j) bias[j].add(r.estimate[j] - r.true_mean[j]);
  }
  EXPECT_NEAR(mse.mean(), d * sigma * sigma, 3.0 * mse.standard_error());
  for (int j = 0; j < d; ++j) EXPECT_NEAR(bias[j].mean(), 0.0, 3.0 * bias[j].standard_error());
}

INSTANTIATE_TEST_SUITE_P(Ainq, NoiseOnly,
                         ::testing::Values(Mechanism::kIndividualDirect, Mechanism::kIndividualShifted,
                                           Mechanism::kAggregateGaussian));

TEST(RunExperiment, IrwinHallVariance) {
  const DatasetSpec spec{DataKind::kBernoulliUniform, 6, 3, 0.8, 1.0, ""};
  MechanismConfig cfg;
  cfg.sigma = 0.8;
  stats::RunningStats mse;
  for (const auto& r : run_experiment(Mechanism::kIrwinHall, spec, cfg, 4000, 3)) mse.add(r.squared_error);
  EXPECT_NEAR(mse.mean(), 3 * 0.64, 3.0 * mse.standard_error());
}

TEST(RunExperiment, ReportFields) {
  const DatasetSpec spec{DataKind::kBernoulliUniform, 7, 5, 0.8, 1.0, ""};
  const auto reports = run_experiment(Mechanism::kAggregateGaussian, spec, MechanismConfig{}, 4, 44);
  ASSERT_EQ(reports.size(), 4u);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    EXPECT_EQ(r.trial, static_cast<std::int64_t>(k));
    EXPECT_EQ(r.seed, 44u);
    double e = 0.0;
    for (int j = 0; j < 5; ++j) e += (r.estimate[j] - r.true_mean[j]) * (r.estimate[j] - r.true_mean[j]);
    EXPECT_NEAR(r.squared_error, e, 1e-12);
    EXPECT_EQ(r.bits_variable.size(), 7u);
    for (double b : r.bits_variable) EXPECT_GE(b, 5.0);
  }
}

TEST(RunExperiment, TrialsUseDistinctStreams) {
  const DatasetSpec spec{DataKind::kBernoulliUniform, 5, 2, 0.8, 1.0, ""};
  const auto reports = run_experiment(Mechanism::kIndividualShifted, spec, MechanismConfig{}, 3, 5);
  EXPECT_NE(reports[0].estimate, reports[1].estimate);
  EXPECT_NE(reports[1].estimate, reports[2].estimate);
}

TEST(CompareMechanisms, IdenticalConfigsGiveIdenticalRows) {
  const DatasetSpec spec{DataKind::kBernoulliUniform, 8, 3, 0.8, 1.0, ""};
  const CompareConfig c{Mechanism::kAggregateGaussian, MechanismConfig{}};
  const auto rows = compare_mechanisms({c, c}, spec, 50, 6);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].mse, rows[1].mse);
  EXPECT_EQ(rows[0].bits_variable, rows[1].bits_variable);
  EXPECT_EQ(rows[0].mechanism, rows[1].mechanism);
  EXPECT_THROW(compare_mechanisms({c}, spec, 5, 6), InvalidArgument);
}

TEST(CompareMechanisms, SummaryInterval) {
  const DatasetSpec spec{DataKind::kBernoulliUniform, 8, 3, 0.8, 1.0, ""};
  const auto reports = run_experiment(Mechanism::kIrwinHall, spec, MechanismConfig{}, 100, 7);
  const ExperimentSummary s = summarize_reports(reports);
  std::vector<double> e;
  for (const auto& r : reports) e.push_back(r.squared_error);
  EXPECT_NEAR(s.mse_ci, 1.96 * stats::summarize(e).standard_error(), 1e-12);
  EXPECT_EQ(s.trials, 100);
}

TEST(AggCompare, BitsOrderingAtHundredClients) {
  const auto rows = agg_compare({100}, {64.0}, 1.0, 20000, 8);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].mechanism, "aggregate-gaussian");
  EXPECT_EQ(rows[1].mechanism, "irwin-hall");
  EXPECT_EQ(rows[2].mechanism, "individual-direct");
  EXPECT_LE(rows[1].mean_bits, rows[0].mean_bits);
  EXPECT_LE(rows[0].mean_bits, rows[2].mean_bits);
}

TEST(AggCompare, CrossoverExists) {
  const auto rows = agg_compare(default_agg_grid(), {64.0}, 1.0, 5000, 9);
  bool crossed = false;
  for (std::size_t k = 0; k + 2 < rows.size(); k += 3) {
    if (rows[k].n >= 2 && rows[k].mean_bits < rows[k + 2].mean_bits) crossed = true;
  }
  EXPECT_TRUE(crossed);
}

TEST(AggCompare, SingleClientCloseToIndividual) {
  const auto rows = agg_compare({1}, {64.0}, 1.0, 20000, 10);
  EXPECT_NEAR(rows[0].mean_bits, rows[2].mean_bits, 1.0);
}

TEST(EntropyGrid, DefaultCardinality) {
  EXPECT_EQ(entropy_grid({1.0, 3.0}, default_entropy_ts(), 20, 1).size(), 72u);
}

TEST(DpTrusted, MseDecreasesInEpsilon) {
  const auto rows = dp_trusted(200, 10, {1.0}, {0.5, 4.0}, 1e-5, 20, 11);
  stats::RunningStats lo;
  stats::RunningStats hi;
  for (const auto& r : rows) {
    if (r.mechanism != "sigm") continue;
    (r.eps == 0.5 ? lo : hi).add(r.mse);
  }
  EXPECT_EQ(lo.count(), 20u);
  EXPECT_GT(lo.mean(), hi.mean());
}

TEST(DpTrusted, FullParticipationLimit) {
  // gamma = 1, large epsilon: the error is the privacy noise d sigma^2.
  const int n = 100;
  const int d = 10;
  const double eps = 50.0;
  const auto rows = dp_trusted(n, d, {1.0}, {eps}, 1e-5, 200, 12);
  const double sigma = gaussian_mechanism_sigma(eps, 1e-5, 2.0 / n);
  stats::RunningStats mse;
  for (const auto& r : rows) {
    if (r.mechanism == "sigm") mse.add(r.mse);
  }
  EXPECT_NEAR(mse.mean(), d * sigma * sigma, 3.0 * mse.standard_error());
}

TEST(DpBits, SphereData) {
  const auto rows = dp_bits(100, 10, 10.0, {6.0}, 1e-5, 3, 13);
  ASSERT_FALSE(rows.empty());
  for (const auto& r : rows) {
    EXPECT_GE(r.bits_var, 1.0);
    EXPECT_GE(r.mse, 0.0);
  }
}

TEST(Csv, HeadersAndFormat) {
  std::ostringstream e;
  csv::write_entropy(e, {});
  EXPECT_EQ(e.str(), "scheme,t,sigma,lower,measured,upper\n");
  std::ostringstream m;
  csv::write_mse(m, {MseRow{"sigm", 0.5, 1.0, 3, 0.25, 1.5, 2.0}});
  EXPECT_EQ(m.str(), "mechanism,eps,gamma,trial,mse,bits_var,bits_fixed\nsigm,0.5,1,3,0.25,1.5,2\n");
  std::ostringstream b;
  csv::write_bits(b, {});
  EXPECT_EQ(b.str(), "mechanism,n,t,sigma,mean_bits,bound\n");
}

TEST(Csv, Reproducible) {
  auto render = [](std::uint64_t seed) {
    std::ostringstream out;
    csv::write_bits(out, agg_compare({3, 10}, {64.0}, 1.0, 500, seed));
    csv::write_mse(out, dp_trusted(50, 5, {0.5}, {1.0}, 1e-5, 3, seed));
    return out.str();
  };
  EXPECT_EQ(render(14), render(14));
  EXPECT_NE(render(14), render(15));
}

}  // namespace
}  // namespace exactq
