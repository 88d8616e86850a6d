// Copyright 2026 The extravisc Authors
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

// Shared fixtures for the unit and acceptance tests. Deliberately uses its own
// RNG (std::mt19937 + uniform_real_distribution) rather than the library
// generator so the tests do not inherit generator bugs.

#ifndef EXTRAVISC_TESTS_SUPPORT_HPP
#define EXTRAVISC_TESTS_SUPPORT_HPP

#include "extravisc/model.hpp"
#include "extravisc/qp.hpp"

#include <Eigen/Dense>

#include <random>

namespace extravisc::testing {

class TestRng {
 public:
  explicit TestRng(unsigned seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Vector vector(Index m, double lo, double hi) {
    Vector v(m);
    for (Index i = 0; i < m; ++i) v[i] = uniform(lo, hi);
    return v;
  }

  Matrix matrix(Index r, Index c, double lo, double hi) {
    Matrix M(r, c);
    for (Index j = 0; j < c; ++j) {
      for (Index i = 0; i < r; ++i) M(i, j) = uniform(lo, hi);
    }
    return M;
  }

  /// Random polyhedron that contains `inside` (b = A inside + positive slack).
  PolyhedralSet polyhedron(Index m, Index k, const Vector& inside) {
    Matrix A = matrix(k, m, -1.0, 1.0);
    Vector b = A * inside + vector(k, 0.05, 1.0);
    return PolyhedralSet(std::move(A), std::move(b));
  }

  /// Symmetric with eigenvalues in [lo, hi].
  Matrix symmetric(Index m, double lo, double hi) {
    const Matrix G = matrix(m, m, -1.0, 1.0);
    Eigen::HouseholderQR<Matrix> qr(G);
    const Matrix U = qr.householderQ() * Matrix::Identity(m, m);
    const Vector eig = vector(m, lo, hi);
    Matrix S = U * eig.asDiagonal() * U.transpose();
    return 0.5 * (S + S.transpose());
  }

  std::mt19937& engine() { return engine_; }

 private:
  std::mt19937 engine_;
};

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Two-dimensional box [lo, hi]^2 as four half-space rows.
inline PolyhedralSet box2(double lo, double hi) {
  Matrix A(4, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1;
  Vector b(4);
  b << hi, hi, -lo, -lo;
  return PolyhedralSet(A, b);
}

inline Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace extravisc::testing

#endif  // EXTRAVISC_TESTS_SUPPORT_HPP
