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

// Amplitude-damping channel (abstract and Sagnac-interferometer forms) and
// the single-Kraus stochastic filters applied before and after it.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "qrac/errors.hpp"
#include "qrac/qcore.hpp"

namespace qrac {

namespace tol {
inline constexpr double kCompleteness = 1e-12;
inline constexpr double kAcceptance = 1e-15;
inline constexpr double kAngleSlack = 1e-14;
}  // namespace tol

// Waveplate fast-axis angle in radians.
struct WaveplateAngle {
  double radians = 0.0;

  static WaveplateAngle from_degrees(double deg) { return {deg * std::numbers::pi / 180.0}; }
  double degrees() const { return radians * 180.0 / std::numbers::pi; }

  // Same physical setting reduced to [0, pi); a half-wave plate is
  // pi-periodic in its fast-axis angle.
  WaveplateAngle reduced() const {
    double r = std::fmod(radians, std::numbers::pi);
    if (r < 0.0) r += std::numbers::pi;
    if (r >= std::numbers::pi) r = 0.0;
    return {r};
  }
};

// Jones matrix of a half-wave plate with fast axis at theta.
inline Matrix2 half_wave_plate(WaveplateAngle theta) {
  const double c = std::cos(2.0 * theta.radians);
  const double s = std::sin(2.0 * theta.radians);
  return {{c, s, s, -c}};
}

enum class ChannelKind { kCptp, kTraceNonIncreasing };

inline const char *to_string(ChannelKind k) {
  return k == ChannelKind::kCptp ? "CPTP" : "TraceNonIncreasing";
}

class KrausChannel {
 public:
  // Validates completeness for kCptp and sub-normalization for
  // kTraceNonIncreasing; throws InvalidChannel otherwise.
  static KrausChannel make(std::vector<Matrix2> ops, ChannelKind kind) {
    if (ops.empty()) throw InvalidChannel("channel needs at least one Kraus operator");
    for (const auto &k : ops) {
      if (!k.is_finite()) throw InvalidChannel("Kraus operator has non-finite entries");
    }
    KrausChannel ch(std::move(ops), kind);
    const Matrix2 s = ch.completeness();
    if (kind == ChannelKind::kCptp) {
      const double err = max_abs_diff(s, Matrix2::identity());
      if (err > tol::kCompleteness) {
        throw InvalidChannel("sum K^dag K deviates from identity by " + std::to_string(err));
      }
    } else if (hermitian_eigensystem(s).values[0] > 1.0 + tol::kCompleteness) {
      throw InvalidChannel("sum K^dag K has eigenvalue above 1");
    }
    return ch;
  }

  const std::vector<Matrix2> &kraus_ops() const { return ops_; }
  ChannelKind kind() const { return kind_; }

  Matrix2 completeness() const {
    Matrix2 s;
    for (const auto &k : ops_) s = s + adjoint(k) * k;
    return s;
  }

  // Unnormalized action sum_i K_i m K_i^dag on an arbitrary matrix.
  Matrix2 act(const Matrix2 &m) const {
    Matrix2 out;
    for (const auto &k : ops_) out = out + conjugate_by(k, m);
    return out;
  }

 private:
  KrausChannel(std::vector<Matrix2> ops, ChannelKind kind) : ops_(std::move(ops)), kind_(kind) {}

  std::vector<Matrix2> ops_;
  ChannelKind kind_;
};

namespace detail {

inline void require_unit_interval(double v, const char *name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw DomainError(std::string(name) + " = " + std::to_string(v) + " outside [0, 1]");
  }
}

inline double require_theta1(WaveplateAngle theta1) {
  constexpr double kMax = std::numbers::pi / 4.0;
  const double t = theta1.radians;
  if (!(t >= -tol::kAngleSlack && t <= kMax + tol::kAngleSlack)) {
    throw DomainError("theta1 = " + std::to_string(t) + " rad outside [0, pi/4]");
  }
  return std::clamp(t, 0.0, kMax);
}

}  // namespace detail

// Amplitude damping with decay probability gamma:
// K0 = |0><0| + sqrt(1-gamma)|1><1|, K1 = sqrt(gamma)|0><1|.
inline KrausChannel adc(double gamma) {
  detail::require_unit_interval(gamma, "gamma");
  Matrix2 k1;
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel::make({Matrix2::diag(1.0, std::sqrt(1.0 - gamma)), k1}, ChannelKind::kCptp);
}

inline DensityMatrix apply_channel(const KrausChannel &ch, const DensityMatrix &rho) {
  if (ch.kind() != ChannelKind::kCptp) {
    throw NotTracePreserving("apply_channel requires a CPTP channel; use apply_filter");
  }
  return DensityMatrix::from_matrix(ch.act(rho.matrix()));
}

enum class FilterSide { kAlice, kBob };

struct FilterOperation {
  Matrix2 matrix;
  double f = 0.0;
  FilterSide side = FilterSide::kAlice;

  KrausChannel as_channel() const {
    return KrausChannel::make({matrix}, ChannelKind::kTraceNonIncreasing);
  }
};

// Alice's filter attenuates |1> (vertical): |0><0| + sqrt(1-f)|1><1|.
inline FilterOperation make_filter_a(double f) {
  detail::require_unit_interval(f, "f_a");
  return {Matrix2::diag(1.0, std::sqrt(1.0 - f)), f, FilterSide::kAlice};
}

// Bob's filter attenuates |0> (horizontal): sqrt(1-f)|0><0| + |1><1|.
inline FilterOperation make_filter_b(double f) {
  detail::require_unit_interval(f, "f_b");
  return {Matrix2::diag(std::sqrt(1.0 - f), 1.0), f, FilterSide::kBob};
}

struct FilterOutcome {
  DensityMatrix state;
  double acceptance = 1.0;  // post-selection success probability
};

inline FilterOutcome apply_filter(const FilterOperation &flt, const DensityMatrix &rho) {
  const Matrix2 out = conjugate_by(flt.matrix, rho.matrix());
  const double acceptance = trace(out).real();
  if (!(acceptance >= tol::kAcceptance)) {
    throw FilterAnnihilatesState("filter acceptance " + std::to_string(acceptance) +
                                 " below 1e-15");
  }
  return {DensityMatrix::from_matrix((1.0 / acceptance) * out), acceptance};
}

// sin(2 theta1) = sqrt(gamma), on the branch theta1 in [0, pi/4].
inline WaveplateAngle gamma_to_theta1(double gamma) {
  detail::require_unit_interval(gamma, "gamma");
  return {0.5 * std::asin(std::sqrt(gamma))};
}

inline double theta1_to_gamma(WaveplateAngle theta1) {
  const double t = detail::require_theta1(theta1);
  const double s = std::sin(2.0 * t);
  return s * s;
}

// Main-text Sagnac form: K0 = |H><H| + cos(2 theta1)|V><V|,
// K1 = sin(2 theta1)|H><V|.
inline KrausChannel sagnac_channel(WaveplateAngle theta1) {
  const double t = detail::require_theta1(theta1);
  Matrix2 k1;
  k1(0, 1) = std::sin(2.0 * t);
  return KrausChannel::make({Matrix2::diag(1.0, std::cos(2.0 * t)), k1}, ChannelKind::kCptp);
}

// Kraus pair read off the two momentum outputs of the interferometer: the
// PBS routes h onto path 0 and v onto path 1, the HWP acts on path 1, and the
// second PBS pass recombines. Incoherent recombination traces out the path.
//   K0 = h - v H(theta1) v,   K1 = h H(theta1) v
// The factor i on path 1 is a global phase per branch and is dropped.
inline KrausChannel sagnac_from_interferometer(WaveplateAngle theta1) {
  const WaveplateAngle t{detail::require_theta1(theta1)};
  const Matrix2 h = outer(ket_h(), ket_h());
  const Matrix2 v = outer(ket_v(), ket_v());
  const Matrix2 hwp = half_wave_plate(t);
  const Matrix2 k0 = h - v * hwp * v;
  const Matrix2 k1 = h * hwp * v;
  return KrausChannel::make({k0, k1}, ChannelKind::kCptp);
}

// Max over the four matrix units E_jk of the entrywise distance between the
// two channel actions. Zero iff the channels act identically.
inline double channel_distance(const KrausChannel &a, const KrausChannel &b) {
  double d = 0.0;
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const Matrix2 e = Matrix2::unit(j, k);
      d = std::max(d, max_abs_diff(a.act(e), b.act(e)));
    }
  }
  return d;
}

}  // namespace qrac
