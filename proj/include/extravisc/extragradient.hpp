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

#ifndef EXTRAVISC_EXTRAGRADIENT_HPP
#define EXTRAVISC_EXTRAGRADIENT_HPP

#include "extravisc/model.hpp"
#include "extravisc/qp.hpp"

#include <optional>
#include <span>

namespace extravisc {

/// <P x + Q y + q, y - x>
double evaluate_bifunction(const LinearBifunction& f, const Vector& x, const Vector& y);

/// Largest singular value, as the square root of the top eigenvalue of B'B.
double spectral_norm(const Matrix& B);

/// c1 = c2 = ||P - Q||_2 / 2.
LipschitzConstants lipschitz_constants(const LinearBifunction& f);

/// Componentwise maxima over the family.
LipschitzConstants family_constants(std::span<const LinearBifunction> fs);

/// The QP realizing argmin { rho f(point, y) + 1/2 ||anchor - y||^2 : y in C }:
/// H = rho (Q + Q') + I, c = rho (P point - Q point + q) - anchor.
QuadraticSubproblem proximal_subproblem(const LinearBifunction& f, const Vector& anchor,
                                        const Vector& point, double rho,
                                        const PolyhedralSet& set);

/// Solves the proximal subproblem. With point = anchor = x_n this is the
/// first extragradient step; with point = y_n and anchor = x_n the second.
/// The result is not checked for convergence; see `proximal_step`.
QpSolution solve_proximal(const LinearBifunction& f, const Vector& anchor,
                          const Vector& point, double rho, const PolyhedralSet& set,
                          double tol = kDefaultInnerTol,
                          const std::optional<Vector>& warm_start = std::nullopt);

/// Throwing convenience form of `solve_proximal`.
Vector proximal_step(const LinearBifunction& f, const Vector& anchor, const Vector& point,
                     double rho, const PolyhedralSet& set, double tol = kDefaultInnerTol);

}  // namespace extravisc

#endif  // EXTRAVISC_EXTRAGRADIENT_HPP
