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

// Distributed mean estimation experiments.
//
// Every mechanism targets an estimate of the client mean whose error per
// coordinate has standard deviation sigma: the individual mechanisms give
// each client noise N(0, n sigma^2), Irwin-Hall gives IH(n, 0, sigma^2) and
// the aggregate Gaussian mechanism gives N(0, sigma^2).
//
// Seeds: data come from Root(seed).substream(0); trial k runs on
// Root(seed).substream(1).substream(k).
//
// Bit columns in mse.csv are per client per coordinate. The mean_bits
// column of bits.csv is H(M | shared randomness) + 1 for inputs uniform on an
// interval of length t, the cost of an entropy code plus one bit.

#ifndef EXACTQ_HARNESS_HPP_
#define EXACTQ_HARNESS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "exactq/aggregate.hpp"
#include "exactq/bounds.hpp"
#include "exactq/coding.hpp"
#include "exactq/distributions.hpp"
#include "exactq/error.hpp"
#include "exactq/privacy.hpp"
#include "exactq/quantizers.hpp"
#include "exactq/random.hpp"
#include "exactq/stats.hpp"

namespace exactq {

// ---------------------------------------------------------------- data

enum class DataKind { kBernoulliUniform, kL2Sphere, kCustomFile };

// bernoulli_uniform: X_i(j) = c (2B - 1) U / sqrt(d), B ~ Bernoulli(p),
// U ~ U(0, 1); |X_i(j)| <= c / sqrt(d) and |X_i|_2 <= c.
// l2_sphere: uniform direction, |X_i|_2 = c.
// custom: whitespace-separated file, "n d" then one client per row.
struct DatasetSpec {
  DataKind kind = DataKind::kBernoulliUniform;
  int n = 1;
  int d = 1;
  double p = 0.8;
  double c = 1.0;
  std::string path;
};

inline Matrix load_custom_data(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("load_custom_data: cannot open " + path);
  long long n = 0;
  long long d = 0;
  if (!(in >> n >> d) || n < 1 || d < 1) throw InvalidArgument("load_custom_data: bad header in " + path);
  Matrix x(n, std::vector<double>(d));
  for (auto& row : x) {
    for (double& v : row) {
      if (!(in >> v) || !std::isfinite(v)) throw InvalidArgument("load_custom_data: bad value in " + path);
    }
  }
  std::string extra;
  if (in >> extra) throw InvalidArgument("load_custom_data: trailing data in " + path);
  return x;
}

inline Matrix generate_data(const DatasetSpec& spec, SharedRandomness& rng) {
  if (spec.kind == DataKind::kCustomFile) return load_custom_data(spec.path);
  detail::require(spec.n >= 1 && spec.d >= 1, "generate_data: n and d must be positive");
  detail::require_positive(spec.c, "generate_data: c");
  Matrix x(spec.n, std::vector<double>(spec.d));
  if (spec.kind == DataKind::kBernoulliUniform) {
    detail::require(spec.p >= 0.0 && spec.p <= 1.0, "generate_data: p must lie in [0, 1]");
    const double scale = spec.c / std::sqrt(static_cast<double>(spec.d));
    for (auto& row : x) {
      for (double& v : row) {
        const double sign = rng.bernoulli(spec.p) ? 1.0 : -1.0;
        v = scale * sign * rng.uniform01();
      }
    }
    return x;
  }
  for (auto& row : x) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& v : row) {
        v = rng.normal();
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double scale = spec.c / std::sqrt(norm2);
    for (double& v : row) v *= scale;
  }
  return x;
}

inline std::vector<double> client_mean(const Matrix& x) {
  detail::require(!x.empty(), "client_mean: no clients");
  std::vector<double> m(x[0].size(), 0.0);
  for (const auto& row : x) {
    for (std::size_t j = 0; j < m.size(); ++j) m[j] += row[j];
  }
  for (double& v : m) v /= static_cast<double>(x.size());
  return m;
}

// ---------------------------------------------------------------- mechanisms

enum class Mechanism {
  kExact,
  kIndividualDirect,
  kIndividualShifted,
  kIrwinHall,
  kAggregateGaussian,
  kSigm,
  kBaseline,
};

inline std::string_view to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kExact: return "exact";
    case Mechanism::kIndividualDirect: return "individual-direct";
    case Mechanism::kIndividualShifted: return "individual-shifted";
    case Mechanism::kIrwinHall: return "irwin-hall";
    case Mechanism::kAggregateGaussian: return "aggregate-gaussian";
    case Mechanism::kSigm: return "sigm";
    case Mechanism::kBaseline: return "baseline";
  }
  return "unknown";
}

inline Mechanism parse_mechanism(std::string_view name) {
  for (Mechanism m : {Mechanism::kExact, Mechanism::kIndividualDirect, Mechanism::kIndividualShifted,
                      Mechanism::kIrwinHall, Mechanism::kAggregateGaussian, Mechanism::kSigm,
                      Mechanism::kBaseline}) {
    if (to_string(m) == name) return m;
  }
  throw InvalidArgument("unknown mechanism: " + std::string(name));
}

struct MechanismConfig {
  double sigma = 1.0;      // error sd of the mean estimate
  double t = 2.0;          // input range length, for fixed-length accounting
  double gamma_sub = 1.0;  // sigm, baseline
  double clip_c = 1.0;     // sigm, baseline: |x_i(j)| <= clip_c
  std::optional<int> baseline_bits;  // unset: match SIGM's fixed-length cost
};

struct MechanismReport {
  std::int64_t trial = 0;
  std::vector<double> estimate;
  std::vector<double> true_mean;
  double squared_error = 0.0;
  std::vector<double> bits_variable;  // per client, whole vector
  std::vector<double> bits_fixed;     // per client, whole vector
  Mechanism mechanism = Mechanism::kExact;
  std::uint64_t seed = 0;

  // Averages over clients and coordinates.
  double mean_bits_variable() const { return per_coordinate(bits_variable); }
  double mean_bits_fixed() const { return per_coordinate(bits_fixed); }

 private:
  double per_coordinate(const std::vector<double>& b) const {
    if (b.empty() || estimate.empty()) return 0.0;
    double s = 0.0;
    for (double v : b) s += v;
    return s / (static_cast<double>(b.size()) * static_cast<double>(estimate.size()));
  }
};

// Executes one mechanism on fixed data. Precomputed pieces (the aggregate
// decomposer in particular) are built once.
class MechanismRunner {
 public:
  MechanismRunner(Mechanism mechanism, int n, const MechanismConfig& cfg)
      : mechanism_(mechanism), n_(n), cfg_(cfg) {
    detail::require(n >= 1, "MechanismRunner: n must be positive");
    detail::require_positive(cfg.sigma, "MechanismRunner: sigma");
    detail::require_positive(cfg.t, "MechanismRunner: t");
    if (mechanism == Mechanism::kAggregateGaussian) {
      aggregate_ = std::make_shared<AggregateConfig>(make_aggregate_config(n, cfg.sigma));
    }
  }

  Mechanism mechanism() const { return mechanism_; }

  MechanismReport run(const Matrix& x, const SharedRandomness& root, std::int64_t trial = 0,
                      std::uint64_t seed = 0) const {
    detail::require(static_cast<int>(x.size()) == n_, "MechanismRunner: client count mismatch");
    MechanismReport r;
    r.trial = trial;
    r.seed = seed;
    r.mechanism = mechanism_;
    r.true_mean = client_mean(x);
    r.bits_variable.assign(n_, 0.0);
    r.bits_fixed.assign(n_, 0.0);
    switch (mechanism_) {
      case Mechanism::kExact: r.estimate = r.true_mean; break;
      case Mechanism::kIndividualDirect: run_individual(LayerScheme::kDirect, x, root, r); break;
      case Mechanism::kIndividualShifted: run_individual(LayerScheme::kShifted, x, root, r); break;
      case Mechanism::kIrwinHall: run_irwin_hall(x, root, r); break;
      case Mechanism::kAggregateGaussian: run_aggregate(x, root, r); break;
      case Mechanism::kSigm: run_sigm(x, root, r); break;
      case Mechanism::kBaseline: run_baseline(x, root, r); break;
    }
    r.squared_error = 0.0;
    for (std::size_t j = 0; j < r.estimate.size(); ++j) {
      const double e = r.estimate[j] - r.true_mean[j];
      r.squared_error += e * e;
    }
    return r;
  }

 private:
  void run_individual(LayerScheme scheme, const Matrix& x, const SharedRandomness& root,
                      MechanismReport& r) const {
    const std::size_t d = x[0].size();
    const double client_sigma = cfg_.sigma * std::sqrt(static_cast<double>(n_));
    const LayerDensity layer(gaussian(client_sigma), scheme);
    const int shifted_fixed = fixed_length_bits_for_eta(gaussian_eta(client_sigma), cfg_.t);
    r.estimate.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (int i = 0; i < n_; ++i) {
        SharedRandomness rng = derive_client_stream(root, i, j);
        const LayeredState s = sample_state(layer, rng);
        const std::int64_t m = layered_encode(x[i][j], s);
        acc += layered_decode(m, s);
        r.bits_variable[i] += message_bits(m);
        r.bits_fixed[i] += scheme == LayerScheme::kShifted
                               ? shifted_fixed
                               : fixed_length_bits_for_eta(s.step, cfg_.t);
      }
      r.estimate[j] = acc / n_;
    }
  }

  void run_irwin_hall(const Matrix& x, const SharedRandomness& root, MechanismReport& r) const {
    const std::size_t d = x[0].size();
    const double w = irwin_hall_step(n_, cfg_.sigma);
    const int fixed = fixed_length_bits_for_eta(w, cfg_.t);
    r.estimate.assign(d, 0.0);
    for (std::size_t j = 0; j < d; ++j) {
      std::int64_t sum_m = 0;
      double sum_s = 0.0;
      for (int i = 0; i < n_; ++i) {
        SharedRandomness rng = derive_client_stream(root, i, j);
        const double s = rng.centered_uniform();
        const std::int64_t m = irwin_hall_encode(x[i][j], s, w);
        sum_m += m;
        sum_s += s;
        r.bits_variable[i] += message_bits(m);
        r.bits_fixed[i] += fixed;
      }
      r.estimate[j] = irwin_hall_decode(sum_m, sum_s, n_, w);
    }
  }

  void run_aggregate(const Matrix& x, const SharedRandomness& root, MechanismReport& r) const {
    const AggregateConfig& cfg = *aggregate_;
    const std::size_t d = x[0].size();
    const AggregateRound round = prepare_round(cfg, root, d);
    std::vector<WideMessage> sum(d, 0.0L);
    for (int i = 0; i < n_; ++i) {
      const std::vector<WideMessage> m = aggregate_encode_vector(x[i], i, cfg, round);
      for (std::size_t j = 0; j < d; ++j) {
        sum[j] += m[j];
        r.bits_variable[i] += wide_message_bits(m[j]);
        r.bits_fixed[i] += fixed_length_bits_for_eta(cfg.step_w * round.ab[j].a, cfg_.t);
      }
    }
    r.estimate = aggregate_decode_vector(sum, cfg, round);
  }

  void run_sigm(const Matrix& x, const SharedRandomness& root, MechanismReport& r) const {
    const SigmRound s = sigm_round(x, cfg_.sigma, cfg_.gamma_sub, cfg_.clip_c, root);
    r.estimate = s.estimate;
    r.bits_variable = s.bits_variable;
    r.bits_fixed = s.bits_fixed;
  }

  // Shares SIGM's selection and its realized N(0, sigma^2) noise vector, so
  // the two mechanisms differ only in how the inputs are quantized.
  void run_baseline(const Matrix& x, const SharedRandomness& root, MechanismReport& r) const {
    const SigmRound s = sigm_round(x, cfg_.sigma, cfg_.gamma_sub, cfg_.clip_c, root);
    fill_baseline(x, s, cfg_, root, r);
  }

 public:
  static void fill_baseline(const Matrix& x, const SigmRound& s, const MechanismConfig& cfg,
                            const SharedRandomness& root, MechanismReport& r) {
    const int budget = cfg.baseline_bits ? *cfg.baseline_bits : matched_bits(s);
    const BaselineRound b =
        baseline_round(x, s.shared, cfg.gamma_sub, cfg.clip_c, budget, s.noise, root);
    r.estimate = b.estimate;
    r.bits_variable = b.bits;
    r.bits_fixed = b.bits;
  }

  // SIGM's fixed-length bits per transmitted entry, rounded up.
  static int matched_bits(const SigmRound& s) {
    double bits = 0.0;
    long long entries = 0;
    for (std::size_t i = 0; i < s.bits_fixed.size(); ++i) bits += s.bits_fixed[i];
    for (int nt : s.shared.n_selected) entries += nt;
    if (entries == 0) return 1;
    return std::max(1, static_cast<int>(std::ceil(bits / static_cast<double>(entries) - 1e-12)));
  }

 private:
  Mechanism mechanism_;
  int n_;
  MechanismConfig cfg_;
  std::shared_ptr<const AggregateConfig> aggregate_;
};

// SIGM and the baseline on one trial, sharing selection and noise. Equal to
// running the two mechanisms separately on the same root.
inline std::pair<MechanismReport, MechanismReport> sigm_and_baseline(const Matrix& x,
                                                                     const MechanismConfig& cfg,
                                                                     const SharedRandomness& root,
                                                                     std::int64_t trial = 0,
                                                                     std::uint64_t seed = 0) {
  const SigmRound s = sigm_round(x, cfg.sigma, cfg.gamma_sub, cfg.clip_c, root);
  std::pair<MechanismReport, MechanismReport> out;
  auto fill = [&](MechanismReport& r, Mechanism m) {
    r.trial = trial;
    r.seed = seed;
    r.mechanism = m;
    r.true_mean = client_mean(x);
  };
  fill(out.first, Mechanism::kSigm);
  out.first.estimate = s.estimate;
  out.first.bits_variable = s.bits_variable;
  out.first.bits_fixed = s.bits_fixed;
  fill(out.second, Mechanism::kBaseline);
  MechanismRunner::fill_baseline(x, s, cfg, root, out.second);
  for (MechanismReport* r : {&out.first, &out.second}) {
    r->squared_error = 0.0;
    for (std::size_t j = 0; j < r->estimate.size(); ++j) {
      const double e = r->estimate[j] - r->true_mean[j];
      r->squared_error += e * e;
    }
  }
  return out;
}

inline SharedRandomness data_stream(std::uint64_t seed) { return SharedRandomness(seed).substream(0); }

inline SharedRandomness trial_stream(std::uint64_t seed, std::int64_t trial) {
  return SharedRandomness(seed).substream(1).substream(static_cast<std::uint64_t>(trial));
}

inline std::vector<MechanismReport> run_experiment(const MechanismRunner& runner, const Matrix& x,
                                                   int trials, std::uint64_t seed) {
  detail::require(trials >= 1, "run_experiment: trials must be positive");
  std::vector<MechanismReport> out;
  out.reserve(trials);
  for (int k = 0; k < trials; ++k) out.push_back(runner.run(x, trial_stream(seed, k), k, seed));
  return out;
}

inline std::vector<MechanismReport> run_experiment(Mechanism mechanism, const DatasetSpec& spec,
                                                   const MechanismConfig& cfg, int trials,
                                                   std::uint64_t seed) {
  SharedRandomness rng = data_stream(seed);
  const Matrix x = generate_data(spec, rng);
  return run_experiment(MechanismRunner(mechanism, static_cast<int>(x.size()), cfg), x, trials, seed);
}

struct ExperimentSummary {
  std::string mechanism;
  int trials = 0;
  double mse = 0.0;
  double mse_ci = 0.0;  // 1.96 standard errors
  double bits_variable = 0.0;
  double bits_fixed = 0.0;
};

inline ExperimentSummary summarize_reports(const std::vector<MechanismReport>& reports) {
  detail::require(!reports.empty(), "summarize_reports: no reports");
  stats::RunningStats mse;
  stats::RunningStats bv;
  stats::RunningStats bf;
  for (const auto& r : reports) {
    mse.add(r.squared_error);
    bv.add(r.mean_bits_variable());
    bf.add(r.mean_bits_fixed());
  }
  return {std::string(to_string(reports.front().mechanism)), static_cast<int>(reports.size()),
          mse.mean(), 1.96 * mse.standard_error(), bv.mean(), bf.mean()};
}

struct CompareConfig {
  Mechanism mechanism;
  MechanismConfig config;
};

inline std::vector<ExperimentSummary> compare_mechanisms(const std::vector<CompareConfig>& configs,
                                                         const DatasetSpec& spec, int trials,
                                                         std::uint64_t seed) {
  detail::require(configs.size() >= 2, "compare_mechanisms: need at least two mechanisms");
  std::vector<ExperimentSummary> out;
  for (const auto& c : configs) {
    out.push_back(summarize_reports(run_experiment(c.mechanism, spec, c.config, trials, seed)));
  }
  return out;
}

// ---------------------------------------------------------------- bits vs n

struct BitsRow {
  std::string mechanism;
  int n = 1;
  double t = 0.0;
  double sigma = 1.0;
  double mean_bits = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
};

// H(M | A, S) + 1 averaged over the aggregate mechanism's shared randomness.
inline BitsRow aggregate_bits_row(const AggregateConfig& cfg, double t, int trials,
                                  SharedRandomness& rng) {
  stats::RunningStats acc;
  for (int k = 0; k < trials; ++k) {
    const ScaleShift ab = cfg.decomposer.draw(rng);
    const double s = rng.centered_uniform();
    acc.add(conditional_entropy_given_state(cfg.step_w * ab.a, s, t) + 1.0);
  }
  return {"aggregate-gaussian", cfg.n_clients, t, cfg.sigma, acc.mean(), acc.standard_error(),
          thm1_cost_bound(cfg.n_clients, cfg.sigma, t, hm_lower_bound(cfg.decomposer))};
}

inline BitsRow irwin_hall_bits_row(int n, double sigma, double t, int trials, SharedRandomness& rng) {
  const double w = irwin_hall_step(n, sigma);
  stats::RunningStats acc;
  for (int k = 0; k < trials; ++k) {
    acc.add(conditional_entropy_given_state(w, rng.centered_uniform(), t) + 1.0);
  }
  return {"irwin-hall", n, t, sigma, acc.mean(), acc.standard_error(),
          thm1_cost_bound(n, sigma, t, 0.0, irwin_hall(n, 0.0, 1.0))};
}

// Each client alone carries noise N(0, n sigma^2).
inline BitsRow individual_bits_row(LayerScheme scheme, int n, double sigma, double t, int trials,
                                   SharedRandomness& rng) {
  const UnimodalPdf f = gaussian(sigma * std::sqrt(static_cast<double>(n)));
  const Estimate e = conditional_entropy_mc(scheme, f, t, trials, rng);
  return {scheme == LayerScheme::kDirect ? "individual-direct" : "individual-shifted",
          n,
          t,
          sigma,
          e.mean + 1.0,
          e.standard_error,
          entropy_upper_bound(scheme, f, t) + 1.0};
}

inline std::vector<int> default_agg_grid() { return {1, 2, 3, 5, 10, 20, 50, 100, 200, 500, 1000}; }

// Rows for the three mechanisms at every (n, t); one stream per cell.
inline std::vector<BitsRow> agg_compare(const std::vector<int>& ns, const std::vector<double>& ts,
                                        double sigma, int trials, std::uint64_t seed) {
  std::vector<BitsRow> rows;
  const SharedRandomness root(seed);
  for (std::size_t a = 0; a < ns.size(); ++a) {
    const AggregateConfig cfg = make_aggregate_config(ns[a], sigma);
    for (std::size_t b = 0; b < ts.size(); ++b) {
      const SharedRandomness cell = root.substream(a).substream(b);
      SharedRandomness r0 = cell.substream(0);
      SharedRandomness r1 = cell.substream(1);
      SharedRandomness r2 = cell.substream(2);
      rows.push_back(aggregate_bits_row(cfg, ts[b], trials, r0));
      rows.push_back(irwin_hall_bits_row(ns[a], sigma, ts[b], trials, r1));
      rows.push_back(individual_bits_row(LayerScheme::kDirect, ns[a], sigma, ts[b], trials, r2));
    }
  }
  return rows;
}

// ---------------------------------------------------------------- entropy grid

inline std::vector<double> default_entropy_ts() {
  std::vector<double> ts;
  for (int k = 3; k <= 11; ++k) ts.push_back(std::ldexp(1.0, k));
  return ts;
}

inline std::vector<EntropyReport> entropy_grid(const std::vector<double>& sigmas,
                                               const std::vector<double>& ts, int trials,
                                               std::uint64_t seed) {
  std::vector<EntropyReport> rows;
  const SharedRandomness root(seed);
  std::uint64_t cell = 0;
  for (LayerScheme scheme : {LayerScheme::kDirect, LayerScheme::kShifted}) {
    for (int family = 0; family < 2; ++family) {
      for (double sigma : sigmas) {
        const UnimodalPdf f = family == 0 ? gaussian(sigma) : laplace(sigma);
        for (double t : ts) {
          SharedRandomness rng = root.substream(cell++);
          rows.push_back(entropy_report(scheme, f, t, trials, rng));
        }
      }
    }
  }
  return rows;
}

// ---------------------------------------------------------------- DP grids

struct MseRow {
  std::string mechanism;
  double eps = 0.0;
  double gamma = 1.0;
  std::int64_t trial = 0;
  double mse = 0.0;
  double bits_var = 0.0;
  double bits_fixed = 0.0;
};

inline MseRow to_mse_row(const MechanismReport& r, double eps, double gamma) {
  return {std::string(to_string(r.mechanism)), eps, gamma, r.trial, r.squared_error,
          r.mean_bits_variable(), r.mean_bits_fixed()};
}

// Trusted-server comparison on bernoulli_uniform data with |x_i|_2 <= 1:
// sigma = gaussian_mechanism_sigma(eps, delta, 2 / n), SIGM against the
// matched-bit baseline on the same selection and noise.
inline std::vector<MseRow> dp_trusted(int n, int d, const std::vector<double>& gammas,
                                      const std::vector<double>& epsilons, double delta, int trials,
                                      std::uint64_t seed) {
  DatasetSpec spec{DataKind::kBernoulliUniform, n, d, 0.8, 1.0, {}};
  SharedRandomness data_rng = data_stream(seed);
  const Matrix x = generate_data(spec, data_rng);
  std::vector<MseRow> rows;
  for (std::size_t g = 0; g < gammas.size(); ++g) {
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      MechanismConfig cfg;
      cfg.sigma = gaussian_mechanism_sigma(epsilons[e], delta, 2.0 / n);
      cfg.gamma_sub = gammas[g];
      cfg.clip_c = 1.0 / std::sqrt(static_cast<double>(d));
      cfg.t = 2.0 * cfg.clip_c;
      for (int k = 0; k < trials; ++k) {
        const SharedRandomness root = trial_stream(seed, k).substream(g).substream(e);
        const auto [sigm, base] = sigm_and_baseline(x, cfg, root, k, seed);
        rows.push_back(to_mse_row(sigm, epsilons[e], gammas[g]));
        rows.push_back(to_mse_row(base, epsilons[e], gammas[g]));
      }
    }
  }
  return rows;
}

// Bits against eps on l2-sphere data of radius c: aggregate Gaussian and the
// individual shifted mechanism, sigma = gaussian_mechanism_sigma(eps, delta,
// 2c / n).
inline std::vector<MseRow> dp_bits(int n, int d, double c, const std::vector<double>& epsilons,
                                   double delta, int trials, std::uint64_t seed) {
  DatasetSpec spec{DataKind::kL2Sphere, n, d, 0.8, c, {}};
  SharedRandomness data_rng = data_stream(seed);
  const Matrix x = generate_data(spec, data_rng);
  std::vector<MseRow> rows;
  for (std::size_t e = 0; e < epsilons.size(); ++e) {
    MechanismConfig cfg;
    cfg.sigma = gaussian_mechanism_sigma(epsilons[e], delta, 2.0 * c / n);
    cfg.t = 2.0 * c;
    const MechanismRunner agg(Mechanism::kAggregateGaussian, n, cfg);
    const MechanismRunner ind(Mechanism::kIndividualShifted, n, cfg);
    for (int k = 0; k < trials; ++k) {
      const SharedRandomness root = trial_stream(seed, k).substream(e);
      rows.push_back(to_mse_row(agg.run(x, root, k, seed), epsilons[e], 1.0));
      rows.push_back(to_mse_row(ind.run(x, root, k, seed), epsilons[e], 1.0));
    }
  }
  return rows;
}

// ---------------------------------------------------------------- CSV

namespace csv {

inline constexpr std::string_view kEntropyHeader = "scheme,t,sigma,lower,measured,upper";
inline constexpr std::string_view kMseHeader = "mechanism,eps,gamma,trial,mse,bits_var,bits_fixed";
inline constexpr std::string_view kBitsHeader = "mechanism,n,t,sigma,mean_bits,bound";

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline void write_entropy(std::ostream& out, const std::vector<EntropyReport>& rows) {
  out << kEntropyHeader << '\n';
  for (const auto& r : rows) {
    out << r.scheme << ',' << num(r.t) << ',' << num(r.sigma) << ',' << num(r.lower) << ','
        << num(r.measured) << ',' << num(r.upper) << '\n';
  }
}

inline void write_mse(std::ostream& out, const std::vector<MseRow>& rows) {
  out << kMseHeader << '\n';
  for (const auto& r : rows) {
    out << r.mechanism << ',' << num(r.eps) << ',' << num(r.gamma) << ',' << r.trial << ','
        << num(r.mse) << ',' << num(r.bits_var) << ',' << num(r.bits_fixed) << '\n';
  }
}

inline void write_bits(std::ostream& out, const std::vector<BitsRow>& rows) {
  out << kBitsHeader << '\n';
  for (const auto& r : rows) {
    out << r.mechanism << ',' << r.n << ',' << num(r.t) << ',' << num(r.sigma) << ','
        << num(r.mean_bits) << ',' << num(r.bound) << '\n';
  }
}

}  // namespace csv

}  // namespace exactq

#endif  // EXACTQ_HARNESS_HPP_
