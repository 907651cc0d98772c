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

// Qubit linear algebra: 2x2 complex matrices, kets, density matrices and
// Bloch vectors. Basis convention throughout: |0> = |H>, |1> = |V>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "qrac/errors.hpp"

namespace qrac {

using Complex = std::complex<double>;

inline constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;

namespace tol {
inline constexpr double kHermitian = 1e-12;
inline constexpr double kTrace = 1e-12;
inline constexpr double kPsd = 1e-10;
inline constexpr double kEigenHermitian = 1e-10;
inline constexpr double kKetNorm = 1e-9;
inline constexpr double kBlochBall = 1e-10;
inline constexpr double kDegenerateGap = 1e-12;
}  // namespace tol

// Row-major 2x2 complex matrix.
struct Matrix2 {
  std::array<Complex, 4> a{};

  constexpr Complex &operator()(int r, int c) { return a[2 * r + c]; }
  constexpr const Complex &operator()(int r, int c) const { return a[2 * r + c]; }

  static constexpr Matrix2 zero() { return {}; }
  static constexpr Matrix2 identity() { return {{1.0, 0.0, 0.0, 1.0}}; }
  static constexpr Matrix2 diag(Complex d0, Complex d1) { return {{d0, 0.0, 0.0, d1}}; }
  // Matrix unit |j><k|.
  static constexpr Matrix2 unit(int j, int k) {
    Matrix2 m;
    m(j, k) = 1.0;
    return m;
  }

  bool is_finite() const {
    return std::all_of(a.begin(), a.end(), [](const Complex &z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  friend bool operator==(const Matrix2 &, const Matrix2 &) = default;
};

inline Matrix2 operator+(const Matrix2 &x, const Matrix2 &y) {
  Matrix2 r;
  for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] + y.a[i];
  return r;
}

inline Matrix2 operator-(const Matrix2 &x, const Matrix2 &y) {
  Matrix2 r;
  for (int i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
  return r;
}

inline Matrix2 operator*(const Matrix2 &x, const Matrix2 &y) {
  Matrix2 r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      r(i, j) = x(i, 0) * y(0, j) + x(i, 1) * y(1, j);
    }
  }
  return r;
}

inline Matrix2 operator*(Complex s, const Matrix2 &x) {
  Matrix2 r;
  for (int i = 0; i < 4; ++i) r.a[i] = s * x.a[i];
  return r;
}

inline Matrix2 operator*(const Matrix2 &x, Complex s) { return s * x; }

inline Matrix2 adjoint(const Matrix2 &x) {
  return {{std::conj(x(0, 0)), std::conj(x(1, 0)), std::conj(x(0, 1)), std::conj(x(1, 1))}};
}

inline Complex trace(const Matrix2 &x) { return x(0, 0) + x(1, 1); }

// Largest entrywise modulus of x - y.
inline double max_abs_diff(const Matrix2 &x, const Matrix2 &y) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(x.a[i] - y.a[i]));
  return m;
}

inline double hermiticity_error(const Matrix2 &x) { return max_abs_diff(x, adjoint(x)); }

// Sandwich k * m * k^dagger.
inline Matrix2 conjugate_by(const Matrix2 &k, const Matrix2 &m) { return k * m * adjoint(k); }

inline Matrix2 pauli_x() { return {{0.0, 1.0, 1.0, 0.0}}; }
inline Matrix2 pauli_y() { return {{0.0, Complex(0, -1), Complex(0, 1), 0.0}}; }
inline Matrix2 pauli_z() { return Matrix2::diag(1.0, -1.0); }

struct Ket2 {
  Complex c0{1.0};
  Complex c1{0.0};

  double norm2() const { return std::norm(c0) + std::norm(c1); }
  bool is_normalized() const { return std::abs(norm2() - 1.0) <= tol::kKetNorm; }
};

inline Ket2 ket_h() { return {1.0, 0.0}; }
inline Ket2 ket_v() { return {0.0, 1.0}; }
inline Ket2 ket_plus() { return {kInvSqrt2, kInvSqrt2}; }
inline Ket2 ket_minus() { return {kInvSqrt2, -kInvSqrt2}; }

// |u><v|
inline Matrix2 outer(const Ket2 &u, const Ket2 &v) {
  return {{u.c0 * std::conj(v.c0), u.c0 * std::conj(v.c1), u.c1 * std::conj(v.c0),
           u.c1 * std::conj(v.c1)}};
}

inline Complex inner(const Ket2 &u, const Ket2 &v) {
  return std::conj(u.c0) * v.c0 + std::conj(u.c1) * v.c1;
}

struct Eigensystem {
  std::array<double, 2> values{};  // descending
  std::array<Ket2, 2> vectors{};
};

// Closed-form eigendecomposition of a Hermitian 2x2 matrix, written as
// t*1 + r.sigma. The top eigenvector is the pure state with Bloch direction
// r/|r|; the bottom one is its orthogonal complement. Below the degeneracy
// gap the canonical basis is returned.
inline Eigensystem hermitian_eigensystem(const Matrix2 &m) {
  if (!m.is_finite()) throw NotHermitian("matrix has non-finite entries");
  if (hermiticity_error(m) > tol::kEigenHermitian) {
    throw NotHermitian("matrix deviates from its adjoint by " +
                       std::to_string(hermiticity_error(m)));
  }
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  // Average the off-diagonal pair so tiny anti-Hermitian noise is ignored.
  const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
  const double t = 0.5 * (a + d);
  const double rx = b.real();
  const double ry = -b.imag();
  const double rz = 0.5 * (a - d);
  const double r = std::hypot(rx, ry, rz);

  Eigensystem es;
  es.values = {t + r, t - r};
  if (2.0 * r < tol::kDegenerateGap) {
    es.vectors = {ket_h(), ket_v()};
    return es;
  }
  const double nx = rx / r, ny = ry / r, nz = rz / r;
  Ket2 top;
  if (nz >= 0.0) {
    const double s = std::sqrt(2.0 * (1.0 + nz));
    top = {Complex(1.0 + nz, 0.0) / s, Complex(nx, ny) / s};
  } else {
    const double s = std::sqrt(2.0 * (1.0 - nz));
    top = {Complex(nx, -ny) / s, Complex(1.0 - nz, 0.0) / s};
  }
  es.vectors = {top, Ket2{-std::conj(top.c1), std::conj(top.c0)}};
  return es;
}

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::hypot(x, y, z); }
};

// Validated qubit state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  // Maximally mixed state.
  DensityMatrix() : m_(0.5 * Matrix2::identity()) {}

  // Throws InvalidState when any invariant fails.
  static DensityMatrix from_matrix(const Matrix2 &m) {
    validate(m);
    return DensityMatrix(m);
  }

  static void validate(const Matrix2 &m) {
    if (!m.is_finite()) throw InvalidState("density matrix has non-finite entries");
    const double herm = hermiticity_error(m);
    if (herm > tol::kHermitian) {
      throw InvalidState("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const Complex tr = trace(m);
    if (std::abs(tr - 1.0) > tol::kTrace) {
      throw InvalidState("density matrix trace " + std::to_string(tr.real()) + " != 1");
    }
    const auto es = hermitian_eigensystem(m);
    if (es.values[1] < -tol::kPsd) {
      throw InvalidState("density matrix has negative eigenvalue " + std::to_string(es.values[1]));
    }
  }

  const Matrix2 &matrix() const { return m_; }
  Complex operator()(int r, int c) const { return m_(r, c); }

  double purity() const { return trace(m_ * m_).real(); }

 private:
  explicit DensityMatrix(const Matrix2 &m) : m_(m) {}
  Matrix2 m_;
};

inline DensityMatrix density_from_ket(const Ket2 &k) {
  if (!k.is_normalized()) {
    throw NotNormalized("ket norm^2 = " + std::to_string(k.norm2()));
  }
  return DensityMatrix::from_matrix(outer(k, k));
}

inline DensityMatrix from_bloch(const BlochVector &r) {
  if (!(r.norm() <= 1.0 + tol::kBlochBall)) {
    throw OutsideBlochBall("Bloch vector norm " + std::to_string(r.norm()) + " exceeds 1");
  }
  const Matrix2 m{{Complex(0.5 * (1.0 + r.z), 0.0), Complex(0.5 * r.x, -0.5 * r.y),
                   Complex(0.5 * r.x, 0.5 * r.y), Complex(0.5 * (1.0 - r.z), 0.0)}};
  return DensityMatrix::from_matrix(m);
}

inline BlochVector to_bloch(const DensityMatrix &rho) {
  const Matrix2 &m = rho.matrix();
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

// Expectation Tr(op * rho), real part.
inline double expectation(const Matrix2 &op, const DensityMatrix &rho) {
  return trace(op * rho.matrix()).real();
}

}  // namespace qrac
