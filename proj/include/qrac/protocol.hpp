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

// The 2 -> 1 random access code over a noisy qubit channel: encodings,
// Bob's dichotomic measurements, the filtered pipeline probabilities, the
// dimension witness and the success probability.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "qrac/channels.hpp"
#include "qrac/errors.hpp"
#include "qrac/qcore.hpp"

namespace qrac {

// x = a0 a1 packed as 2*a0 + a1.
inline constexpr int kNumInputs = 4;
inline constexpr int kNumQuestions = 2;
inline constexpr int kNumCells = kNumInputs * kNumQuestions;

struct ProtocolIndices {
  int a0 = 0;
  int a1 = 0;
  int y = 0;
  int b = 0;

  static ProtocolIndices make(int a0, int a1, int y, int b = 0) {
    for (int v : {a0, a1, y, b}) {
      if (v != 0 && v != 1) throw DomainError("protocol index " + std::to_string(v) + " not a bit");
    }
    return {a0, a1, y, b};
  }

  int x() const { return 2 * a0 + a1; }
  // The bit Bob is asked for.
  int requested_bit() const { return y == 0 ? a0 : a1; }
};

namespace detail {

inline void require_bit(int v, const char *name) {
  if (v != 0 && v != 1) throw DomainError(std::string(name) + " = " + std::to_string(v) + " not a bit");
}

inline void require_input(int x) {
  if (x < 0 || x >= kNumInputs) throw DomainError("input x = " + std::to_string(x) + " outside 0..3");
}

inline std::string input_label(int x) {
  return std::to_string(x >> 1) + std::to_string(x & 1);
}

}  // namespace detail

// Two-outcome projective measurement. Outcome b = 0 is the +1 eigenspace.
struct DichotomicMeasurement {
  Matrix2 observable;
  std::array<Matrix2, 2> projectors;

  static DichotomicMeasurement from_observable(const Matrix2 &m) {
    if (hermiticity_error(m) > tol::kHermitian) throw NotHermitian("observable not Hermitian");
    if (max_abs_diff(m * m, Matrix2::identity()) > 1e-12) {
      throw DomainError("observable does not square to identity");
    }
    if (std::abs(trace(m)) > 1e-12) throw DomainError("observable not traceless");
    const Matrix2 id = Matrix2::identity();
    return {m, {0.5 * (id + m), 0.5 * (id - m)}};
  }
};

// Expectation values p(b=0|x,y) indexed by (a0, a1, y), plus optional
// standard errors when the table comes from counts.
class ProbabilityTable {
 public:
  static constexpr int index(int a0, int a1, int y) { return (2 * a0 + a1) * 2 + y; }

  void set(int a0, int a1, int y, double value) {
    check(a0, a1, y);
    if (!(value >= 0.0 && value <= 1.0)) {
      throw DomainError("probability " + std::to_string(value) + " outside [0, 1]");
    }
    e_[index(a0, a1, y)] = value;
  }

  void set_sigma(int a0, int a1, int y, double sigma) {
    check(a0, a1, y);
    sigma_[index(a0, a1, y)] = sigma;
  }

  double at(int a0, int a1, int y) const {
    check(a0, a1, y);
    const auto &v = e_[index(a0, a1, y)];
    if (!v) {
      throw MissingEntry("no entry for E_" + std::to_string(a0) + std::to_string(a1) + "," +
                         std::to_string(y));
    }
    return *v;
  }

  std::optional<double> sigma(int a0, int a1, int y) const {
    check(a0, a1, y);
    return sigma_[index(a0, a1, y)];
  }

  bool has(int a0, int a1, int y) const { return e_[index(a0, a1, y)].has_value(); }

 private:
  static void check(int a0, int a1, int y) {
    detail::require_bit(a0, "a0");
    detail::require_bit(a1, "a1");
    detail::require_bit(y, "y");
  }

  std::array<std::optional<double>, kNumCells> e_{};
  std::array<std::optional<double>, kNumCells> sigma_{};
};

// Everything needed to evaluate one protocol instance. Offsets perturb the
// nominal waveplate settings (radians); filter_scale_errors are relative
// deviations applied as f -> clamp(f * (1 + delta), 0, 1).
struct ScenarioConfig {
  double gamma = 0.0;
  double f_a = 0.0;
  double f_b = 0.0;
  std::array<double, kNumInputs> prep_offsets{};
  std::array<double, kNumQuestions> meas_offsets{};
  std::array<double, 2> filter_scale_errors{};

  void validate() const {
    detail::require_unit_interval(gamma, "gamma");
    detail::require_unit_interval(f_a, "f_a");
    detail::require_unit_interval(f_b, "f_b");
    for (double v : prep_offsets) {
      if (!std::isfinite(v)) throw DomainError("non-finite preparation offset");
    }
    for (double v : meas_offsets) {
      if (!std::isfinite(v)) throw DomainError("non-finite measurement offset");
    }
    for (double v : filter_scale_errors) {
      if (!std::isfinite(v)) throw DomainError("non-finite filter scale error");
    }
  }

  double effective_f_a() const { return std::clamp(f_a * (1.0 + filter_scale_errors[0]), 0.0, 1.0); }
  double effective_f_b() const { return std::clamp(f_b * (1.0 + filter_scale_errors[1]), 0.0, 1.0); }
};

// rho_00 = |H><H|, rho_01 = |-><-|, rho_10 = |+><+|, rho_11 = |V><V|.
inline std::array<DensityMatrix, kNumInputs> canonical_states() {
  return {density_from_ket(ket_h()), density_from_ket(ket_minus()), density_from_ket(ket_plus()),
          density_from_ket(ket_v())};
}

// HWP(theta_a) acting on |H>: cos(2 theta_a)|H> + sin(2 theta_a)|V>.
inline Ket2 hwp_preparation(WaveplateAngle theta_a) {
  if (!std::isfinite(theta_a.radians)) throw DomainError("non-finite preparation angle");
  return {std::cos(2.0 * theta_a.radians), std::sin(2.0 * theta_a.radians)};
}

// Waveplate settings that realize the canonical states.
inline WaveplateAngle nominal_preparation_angle(int x) {
  detail::require_input(x);
  constexpr std::array<double, kNumInputs> kAngles = {0.0, 3.0 * std::numbers::pi / 8.0,
                                                      std::numbers::pi / 8.0, std::numbers::pi / 4.0};
  return {kAngles[x]};
}

// M_0 = (sz - sx)/sqrt2, M_1 = (sz + sx)/sqrt2.
inline std::array<DichotomicMeasurement, kNumQuestions> canonical_measurements() {
  const Matrix2 sz = pauli_z();
  const Matrix2 sx = pauli_x();
  return {DichotomicMeasurement::from_observable(kInvSqrt2 * (sz - sx)),
          DichotomicMeasurement::from_observable(kInvSqrt2 * (sz + sx))};
}

// HWP(theta_b) followed by a PBS measures H sz H = cos(4 theta_b) sz + sin(4 theta_b) sx.
inline DichotomicMeasurement hwp_measurement(WaveplateAngle theta_b) {
  if (!std::isfinite(theta_b.radians)) throw DomainError("non-finite measurement angle");
  const Matrix2 h = half_wave_plate(theta_b);
  return DichotomicMeasurement::from_observable(h * pauli_z() * h);
}

inline WaveplateAngle nominal_measurement_angle(int y) {
  detail::require_bit(y, "y");
  return {y == 0 ? 7.0 * std::numbers::pi / 16.0 : std::numbers::pi / 16.0};
}

// Final post-selected state and its acceptance N(x).
struct PipelineOutcome {
  DensityMatrix state;
  double acceptance = 1.0;
};

// rho_x -> F_A -> amplitude damping -> F_B, normalized after each filter.
// The product of the two filter acceptances equals
// N(x) = Tr[F_B Lambda(F_A rho_x F_A^dag) F_B^dag] by linearity of Lambda.
inline PipelineOutcome run_pipeline(const ScenarioConfig &cfg, int x) {
  cfg.validate();
  detail::require_input(x);
  const WaveplateAngle theta_a{nominal_preparation_angle(x).radians + cfg.prep_offsets[x]};
  const DensityMatrix rho = density_from_ket(hwp_preparation(theta_a));
  try {
    const FilterOutcome alice = apply_filter(make_filter_a(cfg.effective_f_a()), rho);
    const DensityMatrix damped = apply_channel(adc(cfg.gamma), alice.state);
    const FilterOutcome bob = apply_filter(make_filter_b(cfg.effective_f_b()), damped);
    const double n = alice.acceptance * bob.acceptance;
    if (!(n >= tol::kAcceptance)) {
      throw FilterAnnihilatesState("N(x) = " + std::to_string(n) + " below 1e-15");
    }
    return {bob.state, n};
  } catch (const FilterAnnihilatesState &e) {
    throw FilterAnnihilatesState("post-selection undefined for x=" + detail::input_label(x) + ": " +
                                 e.what());
  }
}

inline DichotomicMeasurement scenario_measurement(const ScenarioConfig &cfg, int y) {
  detail::require_bit(y, "y");
  return hwp_measurement({nominal_measurement_angle(y).radians + cfg.meas_offsets[y]});
}

// p(b|x,y) = Tr[Pi_y^b F_B Lambda F_A(rho_x)] / N(x).
inline double conditional_probability(const ScenarioConfig &cfg, int x, int y, int b) {
  detail::require_bit(b, "b");
  const PipelineOutcome out = run_pipeline(cfg, x);
  const DichotomicMeasurement m = scenario_measurement(cfg, y);
  return std::clamp(expectation(m.projectors[b], out.state), 0.0, 1.0);
}

struct ScenarioResult {
  ProbabilityTable table;
  std::array<double, kNumInputs> acceptance{};
};

inline ScenarioResult run_scenario(const ScenarioConfig &cfg) {
  const std::array<DichotomicMeasurement, kNumQuestions> meas = {scenario_measurement(cfg, 0),
                                                                  scenario_measurement(cfg, 1)};
  ScenarioResult r;
  for (int x = 0; x < kNumInputs; ++x) {
    const PipelineOutcome out = run_pipeline(cfg, x);
    r.acceptance[x] = out.acceptance;
    for (int y = 0; y < kNumQuestions; ++y) {
      r.table.set(x >> 1, x & 1, y, std::clamp(expectation(meas[y].projectors[0], out.state), 0.0, 1.0));
    }
  }
  return r;
}

inline ProbabilityTable evaluate_scenario(const ScenarioConfig &cfg) { return run_scenario(cfg).table; }

// W = E00,0 + E00,1 + E01,0 - E01,1 - E10,0 + E10,1 - E11,0 - E11,1 <= 2.
inline double witness(const ProbabilityTable &t) {
  return t.at(0, 0, 0) + t.at(0, 0, 1) + t.at(0, 1, 0) - t.at(0, 1, 1) - t.at(1, 0, 0) +
         t.at(1, 0, 1) - t.at(1, 1, 0) - t.at(1, 1, 1);
}

inline double asp_from_witness(double w) { return (w + 4.0) / 8.0; }

// (1/8) sum_{x,y} P(b = x_y | x, y).
inline double asp_direct(const ProbabilityTable &t) {
  double s = 0.0;
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int y = 0; y < 2; ++y) {
        const double e = t.at(a0, a1, y);
        const int wanted = ProtocolIndices{a0, a1, y, 0}.requested_bit();
        s += wanted == 0 ? e : 1.0 - e;
      }
    }
  }
  return s / 8.0;
}

// Deterministic classical strategy: Alice sends one bit e(x), Bob answers
// d(m, y). Bit i of each mask is the function value at argument i
// (x for the encoding, 2*m + y for the decoding).
struct ClassicalStrategy {
  unsigned encoding = 0;
  unsigned decoding = 0;

  int encode(int x) const { return static_cast<int>((encoding >> x) & 1u); }
  int decode(int m, int y) const { return static_cast<int>((decoding >> (2 * m + y)) & 1u); }

  ProbabilityTable table() const {
    ProbabilityTable t;
    for (int x = 0; x < kNumInputs; ++x) {
      for (int y = 0; y < kNumQuestions; ++y) {
        t.set(x >> 1, x & 1, y, decode(encode(x), y) == 0 ? 1.0 : 0.0);
      }
    }
    return t;
  }
};

struct ClassicalBound {
  double max_witness = 0.0;
  double max_asp = 0.0;
  int strategy_count = 0;
  std::vector<ClassicalStrategy> maximizers;
};

// Exhaustive search over the 16 x 16 deterministic strategies. Shared
// randomness only mixes these, and W is linear, so the maximum is attained
// at a deterministic strategy.
inline ClassicalBound classical_bruteforce() {
  ClassicalBound best;
  best.max_witness = -std::numeric_limits<double>::infinity();
  best.max_asp = -std::numeric_limits<double>::infinity();
  for (unsigned enc = 0; enc < 16; ++enc) {
    for (unsigned dec = 0; dec < 16; ++dec) {
      const ClassicalStrategy s{enc, dec};
      const ProbabilityTable t = s.table();
      const double w = witness(t);
      best.max_asp = std::max(best.max_asp, asp_direct(t));
      ++best.strategy_count;
      if (w > best.max_witness) {
        best.max_witness = w;
        best.maximizers.clear();
      }
      if (w == best.max_witness) best.maximizers.push_back(s);
    }
  }
  return best;
}

}  // namespace qrac
