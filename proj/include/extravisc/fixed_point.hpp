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

#ifndef EXTRAVISC_FIXED_POINT_HPP
#define EXTRAVISC_FIXED_POINT_HPP

#include "extravisc/model.hpp"
#include "extravisc/qp.hpp"

#include <optional>
#include <stdexcept>

namespace extravisc {

class ParameterOutOfRange : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// S = P_C P_T. Defined on all of R^m; its image lies in C. Every point of
/// C n T is fixed. Holds a non-owning reference to C, which must outlive
/// the map.
class CompositeProjectionMap {
 public:
  CompositeProjectionMap(const PolyhedralSet& set, HalfSpace halfspace,
                         double demicontractive_modulus = 0.0);

  const PolyhedralSet& set() const { return *set_; }
  const HalfSpace& halfspace() const { return halfspace_; }
  double modulus() const { return modulus_; }

 private:
  const PolyhedralSet* set_;
  HalfSpace halfspace_;
  double modulus_;
};

/// Builds S_j for every half-space of the instance.
std::vector<CompositeProjectionMap> make_maps(const ProblemInstance& instance);

/// S(x), with the QP status of the outer projection onto C.
QpSolution apply_map_solution(const CompositeProjectionMap& S, const Vector& x,
                              double tol = kDefaultInnerTol,
                              const std::optional<Vector>& warm_start = std::nullopt);

/// S(x); throws on inner QP failure.
Vector apply_map(const CompositeProjectionMap& S, const Vector& x,
                 double tol = kDefaultInnerTol);

/// (1 - beta_n) t + beta_n s, where s = S(t) has already been evaluated.
/// Throws ParameterOutOfRange unless 0 < beta_n < (1 - modulus)/2.
Vector mann_combination(const Vector& t, const Vector& s, double beta_n, double modulus);

/// (1 - beta_n) t + beta_n S(t).
Vector mann_step(const CompositeProjectionMap& S, const Vector& t, double beta_n,
                 double tol = kDefaultInnerTol);

Vector evaluate_operator(const Operator& F, const Vector& x);

/// z - alpha F(z), i.e. G^alpha(z) with G^mu = I - mu F.
Vector viscosity_point(const Operator& F, const Vector& z, double alpha);

/// sqrt(1 - mu (2 eta - mu L^2)), the contraction factor of I - mu F for
/// mu in (0, 2 eta / L^2).
double contraction_factor(const Operator& F, double mu);

/// 1 - contraction_factor(F, mu).
double contraction_gap(const Operator& F, double mu);

/// Largest admissible viscosity step, 0.99 * 2 eta / L^2.
double max_viscosity_step(const Operator& F);

}  // namespace extravisc

#endif  // EXTRAVISC_FIXED_POINT_HPP
