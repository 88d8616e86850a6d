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

#include "extravisc/extragradient.hpp"

#include <algorithm>
#include <cmath>

namespace extravisc {

double evaluate_bifunction(const LinearBifunction& f, const Vector& x, const Vector& y) {
  if (x.size() != f.dimension() || y.size() != f.dimension()) {
    throw std::invalid_argument("evaluate_bifunction: dimension mismatch");
  }
  return (f.P() * x + f.Q() * y + f.q()).dot(y - x);
}

double spectral_norm(const Matrix& B) {
  if (B.size() == 0) return 0.0;
  const Matrix gram = B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

LipschitzConstants lipschitz_constants(const LinearBifunction& f) {
  const double c = 0.5 * spectral_norm(f.P() - f.Q());
  return {c, c};
}

LipschitzConstants family_constants(std::span<const LinearBifunction> fs) {
  LipschitzConstants out;
  for (const auto& f : fs) {
    const LipschitzConstants c = lipschitz_constants(f);
    out.c1 = std::max(out.c1, c.c1);
    out.c2 = std::max(out.c2, c.c2);
  }
  return out;
}

QuadraticSubproblem proximal_subproblem(const LinearBifunction& f, const Vector& anchor,
                                        const Vector& point, double rho,
                                        const PolyhedralSet& set) {
  if (!(rho > 0.0)) throw std::invalid_argument("proximal step: rho must be positive");
  const Index m = f.dimension();
  if (anchor.size() != m || point.size() != m || set.dimension() != m) {
    throw std::invalid_argument("proximal step: dimension mismatch");
  }
  Matrix H = rho * (f.Q() + f.Q().transpose());
  H.diagonal().array() += 1.0;
  Vector c = rho * (f.P() * point - f.Q() * point + f.q()) - anchor;
  return {std::move(H), std::move(c), set};
}

QpSolution solve_proximal(const LinearBifunction& f, const Vector& anchor,
                          const Vector& point, double rho, const PolyhedralSet& set,
                          double tol, const std::optional<Vector>& warm_start) {
  return solve_qp(proximal_subproblem(f, anchor, point, rho, set), warm_start, tol);
}

Vector proximal_step(const LinearBifunction& f, const Vector& anchor, const Vector& point,
                     double rho, const PolyhedralSet& set, double tol) {
  return require_converged(solve_proximal(f, anchor, point, rho, set, tol), "proximal_step").y;
}

}  // namespace extravisc
