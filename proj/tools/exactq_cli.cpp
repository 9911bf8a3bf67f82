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

// exactq: experiment runner and point-to-point codec.
// Exit codes: 0 success, 1 usage error, 2 numeric failure.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "exactq/exactq.hpp"

namespace {

using namespace exactq;

struct Flags {
  std::uint64_t seed = 1;
  int trials = 0;
  std::string out = "-";
  std::vector<double> sigma;
  std::vector<int> n;
  int d = 0;
  std::vector<double> t;
  std::vector<double> eps;
  double delta = 1e-5;
  std::vector<double> gamma_sub;
  int bits = 8;
  std::string scheme = "shifted";
  std::string noise = "gaussian";
  double c = 10.0;
  double step_gamma = 5e-4;
  int points = 20;
  int burn_in = 10000;
  int samples = 10000;
};

template <typename T>
std::vector<T> or_default(const std::vector<T>& v, std::vector<T> fallback) {
  return v.empty() ? fallback : v;
}

int trials_or(const Flags& f, int fallback) { return f.trials > 0 ? f.trials : fallback; }

// Runs `body` with the requested output stream.
template <typename F>
void with_output(const std::string& path, F&& body) {
  if (path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot open output file: " + path);
  body(out);
  if (!out) throw InvalidArgument("failed writing output file: " + path);
}

void cmd_entropy(const Flags& f) {
  const auto rows = entropy_grid(or_default(f.sigma, {1.0, 3.0}), or_default(f.t, default_entropy_ts()),
                                 trials_or(f, 20000), f.seed);
  with_output(f.out, [&](std::ostream& os) { csv::write_entropy(os, rows); });
}

void cmd_agg_compare(const Flags& f) {
  const auto sigmas = or_default(f.sigma, {1.0});
  detail::require(sigmas.size() == 1, "agg-compare takes a single --sigma");
  const auto rows = agg_compare(or_default(f.n, default_agg_grid()), or_default(f.t, {64.0, 2048.0}),
                                sigmas[0], trials_or(f, 20000), f.seed);
  with_output(f.out, [&](std::ostream& os) { csv::write_bits(os, rows); });
}

void cmd_dp_trusted(const Flags& f) {
  const auto ns = or_default(f.n, {1000});
  detail::require(ns.size() == 1, "dp-trusted takes a single --n");
  const auto rows = dp_trusted(ns[0], f.d > 0 ? f.d : 100, or_default(f.gamma_sub, {0.3, 0.5, 1.0}),
                               or_default(f.eps, {0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0}), f.delta,
                               trials_or(f, 100), f.seed);
  with_output(f.out, [&](std::ostream& os) { csv::write_mse(os, rows); });
}

void cmd_dp_bits(const Flags& f) {
  const auto ns = or_default(f.n, {500});
  detail::require(ns.size() == 1, "dp-bits takes a single --n");
  const auto rows = dp_bits(ns[0], f.d > 0 ? f.d : 75, f.c,
                            or_default(f.eps, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0}),
                            f.delta, trials_or(f, 20), f.seed);
  with_output(f.out, [&](std::ostream& os) { csv::write_mse(os, rows); });
}

void cmd_langevin(const Flags& f) {
  LangevinConfig cfg;
  cfg.step_gamma = f.step_gamma;
  cfg.n_clients = f.n.empty() ? 5 : f.n[0];
  cfg.dim = f.d > 0 ? f.d : 10;
  cfg.points_per_client = f.points;
  cfg.bits_b = f.bits;
  cfg.burn_in = f.burn_in;
  cfg.n_samples = f.samples;
  const SharedRandomness root(f.seed);
  SharedRandomness data_rng = root.substream(0);
  cfg.data = make_langevin_data(cfg.n_clients, cfg.dim, cfg.points_per_client, data_rng);
  SharedRandomness chain = root.substream(1);
  const LangevinRun run = qlsd_star_run(cfg, chain);
  with_output(f.out, [&](std::ostream& os) {
    os << "sample,running_mse\n";
    for (std::size_t k = 0; k < run.running_mse.size(); ++k) {
      os << k << ',' << csv::num(run.running_mse[k]) << '\n';
    }
  });
  std::cerr << "coordinate,posterior_mean,sample_mean\n";
  for (int j = 0; j < cfg.dim; ++j) {
    std::cerr << j << ',' << csv::num(run.posterior.mean[j]) << ',' << csv::num(run.sample_mean[j])
              << '\n';
  }
}

UnimodalPdf codec_noise(const Flags& f) {
  const auto sigmas = or_default(f.sigma, {1.0});
  detail::require(sigmas.size() == 1, "encode/decode take a single --sigma");
  if (f.noise == "gaussian") return gaussian(sigmas[0]);
  if (f.noise == "laplace") return laplace(sigmas[0]);
  throw InvalidArgument("--noise must be gaussian or laplace");
}

LayerScheme codec_scheme(const Flags& f) {
  if (f.scheme == "direct") return LayerScheme::kDirect;
  if (f.scheme == "shifted") return LayerScheme::kShifted;
  throw InvalidArgument("--scheme must be direct or shifted");
}

// Value k of the stream is coded with the state drawn from
// derive_client_stream(Root(seed), 0, k).
void cmd_codec(const Flags& f, bool encode) {
  const LayerDensity layer(codec_noise(f), codec_scheme(f));
  const SharedRandomness root(f.seed);
  std::string token;
  std::uint64_t k = 0;
  with_output(f.out, [&](std::ostream& os) {
    while (std::cin >> token) {
      SharedRandomness rng = derive_client_stream(root, 0, k);
      const LayeredState s = sample_state(layer, rng);
      const char* first = token.data();
      const char* last = first + token.size();
      if (encode) {
        double x = 0.0;
        const auto [p, ec] = std::from_chars(first, last, x);
        if (ec != std::errc() || p != last) throw InvalidArgument("malformed input value: " + token);
        os << layered_encode(x, s) << '\n';
      } else {
        std::int64_t m = 0;
        const auto [p, ec] = std::from_chars(first, last, m);
        if (ec != std::errc() || p != last) throw InvalidArgument("malformed message: " + token);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", layered_decode(m, s));
        os << buf << '\n';
      }
      ++k;
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact-error quantization experiments and codec"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--seed", f.seed, "Root seed");
  app.add_option("--trials", f.trials, "Trials (0 selects the subcommand default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", f.out, "Output path, - for stdout");
  app.add_option("--sigma", f.sigma, "Noise scale(s)")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--n", f.n, "Client count(s)")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--d", f.d, "Dimension")->check(CLI::PositiveNumber);
  app.add_option("--t", f.t, "Input range length(s)")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--eps", f.eps, "Privacy epsilon grid")->delimiter(',')->check(CLI::PositiveNumber);
  app.add_option("--delta", f.delta, "Privacy delta")->check(CLI::Range(0.0, 1.0));
  app.add_option("--gamma-sub", f.gamma_sub, "Subsampling probabilities")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--bits", f.bits, "Quantizer bits (langevin; 0 disables compression)")
      ->check(CLI::NonNegativeNumber);

  auto* entropy = app.add_subcommand("entropy", "Conditional entropy grid (entropy.csv)");
  auto* agg = app.add_subcommand("agg-compare", "Bits per client against n (bits.csv)");
  auto* trusted = app.add_subcommand("dp-trusted", "SIGM against the dither baseline (mse.csv)");
  auto* dpbits = app.add_subcommand("dp-bits", "Bits against epsilon on l2-sphere data (mse.csv)");
  dpbits->add_option("--c", f.c, "Sphere radius")->check(CLI::PositiveNumber);
  auto* langevin = app.add_subcommand("langevin", "QLSD* on the conjugate Gaussian target");
  langevin->add_option("--step-gamma", f.step_gamma, "Discretization step")->check(CLI::PositiveNumber);
  langevin->add_option("--points", f.points, "Observations per client")->check(CLI::PositiveNumber);
  langevin->add_option("--burn-in", f.burn_in, "Burn-in iterations")->check(CLI::NonNegativeNumber);
  langevin->add_option("--samples", f.samples, "Retained iterations")->check(CLI::NonNegativeNumber);
  auto* encode = app.add_subcommand("encode", "Decimals on stdin to messages on stdout");
  auto* decode = app.add_subcommand("decode", "Messages on stdin to decimals on stdout");
  for (auto* sub : {encode, decode}) {
    sub->add_option("--scheme", f.scheme, "direct or shifted");
    sub->add_option("--noise", f.noise, "gaussian or laplace");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (entropy->parsed()) cmd_entropy(f);
    else if (agg->parsed()) cmd_agg_compare(f);
    else if (trusted->parsed()) cmd_dp_trusted(f);
    else if (dpbits->parsed()) cmd_dp_bits(f);
    else if (langevin->parsed()) cmd_langevin(f);
    else if (encode->parsed()) cmd_codec(f, true);
    else if (decode->parsed()) cmd_codec(f, false);
  } catch (const InvalidArgument& e) {
    std::cerr << "exactq: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "exactq: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
