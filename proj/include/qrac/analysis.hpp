// Copyright 2026 The qrac Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Witness curves, critical-noise solving, filter search, Monte Carlo error
// bands and ingestion of coincidence counts.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qrac/channels.hpp"
#include "qrac/errors.hpp"
#include "qrac/parallel.hpp"
#include "qrac/protocol.hpp"

namespace qrac {

inline constexpr double kClassicalWitnessBound = 2.0;
inline constexpr double kClassicalAspBound = 0.75;

// Unfiltered witness under amplitude damping: sqrt2 (1 + sqrt(1-gamma) - gamma).
inline double witness_closed_form(double gamma) {
  detail::require_unit_interval(gamma, "gamma");
  return std::numbers::sqrt2 * (1.0 + std::sqrt(1.0 - gamma) - gamma);
}

// Witness of the simulated filtered pipeline at nominal settings.
inline double simulated_witness(double gamma, double f_a, double f_b) {
  ScenarioConfig cfg;
  cfg.gamma = gamma;
  cfg.f_a = f_a;
  cfg.f_b = f_b;
  return witness(evaluate_scenario(cfg));
}

struct SweepRecord {
  double gamma = 0.0;
  double f_a = 0.0;
  double f_b = 0.0;
  double witness = std::numeric_limits<double>::quiet_NaN();
  double asp = std::numeric_limits<double>::quiet_NaN();
  double acceptance_min = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success

  bool ok() const { return error.empty(); }
};

inline SweepRecord sweep_point(double gamma, double f_a, double f_b) {
  SweepRecord r;
  r.gamma = gamma;
  r.f_a = f_a;
  r.f_b = f_b;
  ScenarioConfig cfg;
  cfg.gamma = gamma;
  cfg.f_a = f_a;
  cfg.f_b = f_b;
  cfg.validate();
  try {
    const ScenarioResult res = run_scenario(cfg);
    r.witness = witness(res.table);
    r.asp = asp_from_witness(r.witness);
    r.acceptance_min = *std::min_element(res.acceptance.begin(), res.acceptance.end());
  } catch (const FilterAnnihilatesState &e) {
    r.error = std::string(e.kind()) + ": " + e.what();
  }
  return r;
}

// One record per grid point. Points whose post-selection is undefined are
// recorded with their error instead of aborting the sweep.
inline std::vector<SweepRecord> sweep(std::span<const double> gammas, double f_a, double f_b) {
  std::vector<SweepRecord> out;
  out.reserve(gammas.size());
  for (double g : gammas) out.push_back(sweep_point(g, f_a, f_b));
  return out;
}

// n evenly spaced points from start to end inclusive (n = 1 gives {start}).
inline std::vector<double> linear_grid(double start, double end, int n) {
  if (n < 1) throw DomainError("grid needs at least one point");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    g[i] = n == 1 ? start : start + (end - start) * static_cast<double>(i) / (n - 1);
  }
  if (n > 1) g.back() = end;
  return g;
}

// Bisection for a sign change of fn on [lo, hi]; returns the midpoint of the
// final bracket, whose width is at most tol.
template <class Fn>
double bisect(Fn &&fn, double lo, double hi, double tol) {
  double f_lo = fn(lo);
  const double f_hi = fn(hi);
  if (!(f_lo * f_hi < 0.0)) {
    throw NoSignChange("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  // 200 halvings exhaust double precision on any finite interval.
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = fn(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Noise level where the filtered witness crosses the classical bound 2.
inline double critical_gamma(double f_a, double f_b, double tol = 1e-6) {
  detail::require_unit_interval(f_a, "f_a");
  detail::require_unit_interval(f_b, "f_b");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  auto excess = [&](double g) { return simulated_witness(g, f_a, f_b) - kClassicalWitnessBound; };
  auto endpoint = [&](double g) {
    try {
      return excess(g);
    } catch (const FilterAnnihilatesState &e) {
      throw NoSignChange("witness undefined at gamma=" + std::to_string(g) + " (" + e.what() + ")");
    }
  };
  const double at0 = endpoint(0.0);
  const double at1 = endpoint(1.0);
  if (!(at0 > 0.0 && at1 < 0.0)) {
    throw NoSignChange("witness does not cross 2 on gamma in [0, 1] for f_a=" + std::to_string(f_a) +
                       ", f_b=" + std::to_string(f_b) + " (W(0)-2=" + std::to_string(at0) +
                       ", W(1)-2=" + std::to_string(at1) + ")");
  }
  const double root = bisect(excess, 0.0, 1.0, tol);
  const double residual = excess(root);
  if (std::abs(residual) > 1e-4) {
    throw ConvergenceError("critical gamma residual |W-2| = " + std::to_string(std::abs(residual)));
  }
  return root;
}

// Unfiltered threshold in closed form: gamma_c = 1 - s^2 with
// s = (sqrt(1 + 4 sqrt2) - 1) / 2.
inline double critical_gamma_unfiltered_exact() {
  const double s = (std::sqrt(1.0 + 4.0 * std::numbers::sqrt2) - 1.0) / 2.0;
  return 1.0 - s * s;
}

struct OptimalFilter {
  double f_star = 0.0;
  double witness = 0.0;
};

// Best symmetric filter strength f in [0, 0.999]: grid search with step
// 0.001, then golden-section refinement around the best grid point. Ties
// within 1e-12 resolve to the smaller f.
inline OptimalFilter optimal_filter(double gamma) {
  detail::require_unit_interval(gamma, "gamma");
  constexpr double kFMax = 0.999;
  constexpr double kStep = 0.001;
  constexpr double kTie = 1e-12;
  auto w = [gamma](double f) { return simulated_witness(gamma, f, f); };

  OptimalFilter best{0.0, w(0.0)};
  for (int i = 1; i <= 999; ++i) {
    const double f = i / 1000.0;
    const double v = w(f);
    if (v > best.witness + kTie) best = {f, v};
  }

  double a = std::max(0.0, best.f_star - kStep);
  double b = std::min(kFMax, best.f_star + kStep);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double wc = w(c), wd = w(d);
  for (int it = 0; it < 60 && b - a > 1e-10; ++it) {
    if (wc >= wd) {
      b = d;
      d = c;
      wd = wc;
      c = b - inv_phi * (b - a);
      wc = w(c);
    } else {
      a = c;
      c = d;
      wc = wd;
      d = a + inv_phi * (b - a);
      wd = w(d);
    }
  }
  const double f_ref = 0.5 * (a + b);
  const double w_ref = w(f_ref);
  if (w_ref > best.witness + kTie) best = {f_ref, w_ref};
  return best;
}

// Perturbation model for the error bands: uniform waveplate offsets of
// +-halfwidth (radians) on the four preparation and two measurement plates,
// and uniform relative errors of +-filter_rel_halfwidth on f_a and f_b.
struct ErrorModelConfig {
  double hwp_prep_halfwidth = std::numbers::pi / 180.0;
  double hwp_meas_halfwidth = std::numbers::pi / 180.0;
  double filter_rel_halfwidth = 0.01;
  std::int64_t samples = 10000;
  std::uint64_t seed = 42;
  double lo_percentile = 5.0;
  double hi_percentile = 95.0;
  double max_discard_fraction = 0.01;

  void validate() const {
    if (!(hwp_prep_halfwidth >= 0.0) || !(hwp_meas_halfwidth >= 0.0) || !(filter_rel_halfwidth >= 0.0) ||
        !std::isfinite(hwp_prep_halfwidth) || !std::isfinite(hwp_meas_halfwidth) ||
        !std::isfinite(filter_rel_halfwidth)) {
      throw DomainError("error-model halfwidths must be finite and >= 0");
    }
    if (samples < 1) throw DomainError("samples must be >= 1");
    if (!(lo_percentile >= 0.0 && lo_percentile <= hi_percentile && hi_percentile <= 100.0)) {
      throw DomainError("percentiles must satisfy 0 <= lo <= hi <= 100");
    }
  }
};

struct BandRecord {
  double gamma = 0.0;
  double nominal = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::int64_t discards = 0;
};

// Deterministic random substream for sample (gamma_index, sample_index):
// std::mt19937_64 seeded through std::seed_seq with the 64-bit seed split
// into two words followed by both indices. Both engines are fully specified
// by the standard, so draws are identical across platforms.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t gamma_index, std::uint64_t sample_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(gamma_index), static_cast<std::uint32_t>(gamma_index >> 32),
                      static_cast<std::uint32_t>(sample_index),
                      static_cast<std::uint32_t>(sample_index >> 32)};
    engine_.seed(seq);
  }

  // Uniform on [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [-halfwidth, halfwidth].
  double symmetric(double halfwidth) { return halfwidth * (2.0 * uniform() - 1.0); }

 private:
  std::mt19937_64 engine_;
};

inline ScenarioConfig perturbed_config(double gamma, double f_a, double f_b, const ErrorModelConfig &em,
                                       SampleStream &rng) {
  ScenarioConfig cfg;
  cfg.gamma = gamma;
  cfg.f_a = f_a;
  cfg.f_b = f_b;
  for (double &o : cfg.prep_offsets) o = rng.symmetric(em.hwp_prep_halfwidth);
  for (double &o : cfg.meas_offsets) o = rng.symmetric(em.hwp_meas_halfwidth);
  for (double &d : cfg.filter_scale_errors) d = rng.symmetric(em.filter_rel_halfwidth);
  return cfg;
}

// Linear interpolation between closest ranks; `sorted` must be ascending
// and non-empty.
inline double percentile(std::span<const double> sorted, double p) {
  const double pos = (p / 100.0) * static_cast<double>(sorted.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  if (i + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(i);
  return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
}

struct MonteCarloRun {
  std::vector<BandRecord> bands;
  // samples[gamma_index][sample_index]; NaN marks a discarded sample.
  std::vector<std::vector<double>> samples;
};

// Band envelope [min, max] spans the sampled witnesses together with the
// unperturbed value, which is itself a point of the perturbation support.
inline BandRecord summarize_band(double gamma, double nominal, std::span<const double> draws,
                                 const ErrorModelConfig &em) {
  std::vector<double> valid;
  valid.reserve(draws.size());
  for (double v : draws) {
    if (!std::isnan(v)) valid.push_back(v);
  }
  BandRecord r;
  r.gamma = gamma;
  r.nominal = nominal;
  r.discards = static_cast<std::int64_t>(draws.size() - valid.size());
  if (static_cast<double>(r.discards) > em.max_discard_fraction * static_cast<double>(draws.size())) {
    throw TooManyDiscards(std::to_string(r.discards) + " of " + std::to_string(draws.size()) +
                          " samples discarded at gamma=" + std::to_string(gamma));
  }
  if (valid.empty()) throw TooManyDiscards("no valid samples at gamma=" + std::to_string(gamma));
  std::sort(valid.begin(), valid.end());
  r.lo = percentile(valid, em.lo_percentile);
  r.hi = percentile(valid, em.hi_percentile);
  r.min = std::min(valid.front(), nominal);
  r.max = std::max(valid.back(), nominal);
  return r;
}

// Every (gamma, sample) pair draws from its own index-addressed substream,
// so results are bitwise identical for any worker count.
inline MonteCarloRun monte_carlo_run(std::span<const double> gammas, double f_a, double f_b,
                                     const ErrorModelConfig &em, unsigned threads = 0) {
  em.validate();
  detail::require_unit_interval(f_a, "f_a");
  detail::require_unit_interval(f_b, "f_b");
  for (double g : gammas) detail::require_unit_interval(g, "gamma");

  const auto n_samples = static_cast<std::size_t>(em.samples);
  MonteCarloRun run;
  run.samples.assign(gammas.size(), std::vector<double>(n_samples));
  parallel_for(gammas.size() * n_samples, threads, [&](std::size_t k) {
    const std::size_t gi = k / n_samples;
    const std::size_t si = k % n_samples;
    SampleStream rng(em.seed, gi, si);
    const ScenarioConfig cfg = perturbed_config(gammas[gi], f_a, f_b, em, rng);
    double w = std::numeric_limits<double>::quiet_NaN();
    try {
      w = witness(evaluate_scenario(cfg));
    } catch (const FilterAnnihilatesState &) {
    }
    run.samples[gi][si] = w;
  });

  run.bands.reserve(gammas.size());
  for (std::size_t gi = 0; gi < gammas.size(); ++gi) {
    const double nominal = simulated_witness(gammas[gi], f_a, f_b);
    run.bands.push_back(summarize_band(gammas[gi], nominal, run.samples[gi], em));
  }
  return run;
}

inline std::vector<BandRecord> monte_carlo_band(std::span<const double> gammas, double f_a, double f_b,
                                                const ErrorModelConfig &em, unsigned threads = 0) {
  return monte_carlo_run(gammas, f_a, f_b, em, threads).bands;
}

struct CoincidenceRecord {
  int a0 = 0;
  int a1 = 0;
  int y = 0;
  std::uint64_t cc0 = 0;
  std::uint64_t cc1 = 0;
  std::optional<double> gamma_label{};
  std::optional<double> f_a_label{};
  std::optional<double> f_b_label{};
};

struct IngestResult {
  ProbabilityTable table;
  double witness = 0.0;
  double witness_sigma = 0.0;
  double asp = 0.0;
  double asp_sigma = 0.0;
};

// E = cc0 / (cc0 + cc1) per cell with Poisson propagation
// sigma_E = sqrt(cc0 cc1 / (cc0 + cc1)^3). Witness coefficients are all +-1,
// so sigma_W is the quadrature sum of the cell errors.
inline IngestResult ingest_counts(std::span<const CoincidenceRecord> records) {
  std::array<const CoincidenceRecord *, kNumCells> cells{};
  for (const auto &r : records) {
    detail::require_bit(r.a0, "a0");
    detail::require_bit(r.a1, "a1");
    detail::require_bit(r.y, "y");
    const std::string name = std::to_string(r.a0) + std::to_string(r.a1) + "," + std::to_string(r.y);
    auto &slot = cells[ProbabilityTable::index(r.a0, r.a1, r.y)];
    if (slot != nullptr) throw DuplicateCell("cell (a0a1,y)=(" + name + ") appears more than once");
    if (r.cc0 + r.cc1 == 0) throw EmptyCell("cell (a0a1,y)=(" + name + ") has no counts");
    slot = &r;
  }
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int y = 0; y < 2; ++y) {
        if (cells[ProbabilityTable::index(a0, a1, y)] == nullptr) {
          throw MissingCell("no record for cell (a0a1,y)=(" + std::to_string(a0) + std::to_string(a1) +
                            "," + std::to_string(y) + ")");
        }
      }
    }
  }

  IngestResult out;
  double var = 0.0;
  for (const CoincidenceRecord *r : cells) {
    const double c0 = static_cast<double>(r->cc0);
    const double c1 = static_cast<double>(r->cc1);
    const double n = c0 + c1;
    const double sigma = std::sqrt(c0 * c1 / (n * n * n));
    out.table.set(r->a0, r->a1, r->y, c0 / n);
    out.table.set_sigma(r->a0, r->a1, r->y, sigma);
    var += sigma * sigma;
  }
  out.witness = witness(out.table);
  out.witness_sigma = std::sqrt(var);
  out.asp = asp_from_witness(out.witness);
  out.asp_sigma = out.witness_sigma / 8.0;
  return out;
}

}  // namespace qrac
