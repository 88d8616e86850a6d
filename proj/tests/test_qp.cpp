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

#include "extravisc/qp.hpp"
#include "support.hpp"

#include <doctest.h>

#include <limits>

using namespace extravisc;
using extravisc::testing::max_abs_diff;
using extravisc::testing::TestRng;
using extravisc::testing::vec;

namespace {

// Independent of brute_force_qp: Schur-complement solve per active set and
// pick the feasible, dual-feasible one with the lowest objective.
Vector schur_oracle(const Matrix& H, const Vector& c, const Matrix& A, const Vector& b) {
  const Index k = A.rows();
  const Eigen::LLT<Matrix> llt(H);
  Vector best;
  double best_val = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<Index> act;
    for (Index r = 0; r < k; ++r) {
      if (mask & (1u << r)) act.push_back(r);
    }
    Vector y = -llt.solve(c);
    Vector lam;
    if (!act.empty()) {
      Matrix Aw(static_cast<Index>(act.size()), A.cols());
      Vector bw(static_cast<Index>(act.size()));
      for (std::size_t i = 0; i < act.size(); ++i) {
        Aw.row(static_cast<Index>(i)) = A.row(act[i]);
        bw[static_cast<Index>(i)] = b[act[i]];
      }
      const Matrix S = Aw * llt.solve(Aw.transpose());
      Eigen::ColPivHouseholderQR<Matrix> qr(S);
      if (qr.rank() < S.rows()) continue;
      lam = qr.solve(Aw * y - bw);
      if (lam.minCoeff() < -1e-9) continue;
      y -= llt.solve(Aw.transpose() * lam);
    }
    if ((A * y - b).maxCoeff() > 1e-9) continue;
    const double val = 0.5 * y.dot(H * y) + c.dot(y);
    if (val < best_val) {
      best_val = val;
      best = y;
    }
  }
  return best;
}

QuadraticSubproblem random_qp(TestRng& rng, Index m, Index k) {
  const Matrix H = rng.symmetric(m, 0.2, 5.0);
  const Vector c = rng.vector(m, -3.0, 3.0);
  return QuadraticSubproblem{H, c, rng.polyhedron(m, k, rng.vector(m, -1.0, 1.0))};
}

}  // namespace

TEST_CASE("project_halfspace examples") {
  const HalfSpace e1(vec({1, 0}), 1.0);
  CHECK(project_halfspace(e1, vec({0.5, 3})) == vec({0.5, 3}));
  CHECK(max_abs_diff(project_halfspace(e1, vec({2, 0})), vec({1, 0})) == 0.0);
  const HalfSpace diag(vec({1, 1}), 0.0);
  CHECK(max_abs_diff(project_halfspace(diag, vec({1, 1})), vec({0, 0})) <= 1e-15);

  TestRng rng(11);
  for (int t = 0; t < 100; ++t) {
    const HalfSpace hs(rng.vector(4, -2, 2), rng.uniform(-1, 1));
    const Vector p = project_halfspace(hs, rng.vector(4, -5, 5));
    CHECK(hs.normal().dot(p) <= hs.offset() + 1e-12);
  }
}

TEST_CASE("solve_qp unconstrained is the completed square") {
  const Vector xbar = vec({0.3, -1.7, 2.0});
  const QuadraticSubproblem qp{Matrix::Identity(3, 3), -xbar, PolyhedralSet(Matrix(0, 3), Vector(0))};
  const auto sol = solve_qp(qp);
  CHECK(sol.converged());
  CHECK(sol.y == xbar);
  CHECK(brute_force_qp(qp) == xbar);
}

TEST_CASE("solve_qp clipped optimum") {
  Matrix A(2, 2);
  A << 1, 0, 0, 1;
  const QuadraticSubproblem qp{Matrix::Identity(2, 2), vec({-2, 0}), PolyhedralSet(A, vec({1, 1}))};
  const auto sol = solve_qp(qp);
  CHECK(sol.converged());
  CHECK(max_abs_diff(sol.y, vec({1, 0})) <= 1e-10);
  CHECK(max_abs_diff(brute_force_qp(qp), vec({1, 0})) <= 1e-12);
  CHECK(max_abs_diff(brute_force_qp(qp), sol.y) <= 1e-8);
  CHECK(sol.active_set == std::vector<int>{0});
  CHECK(sol.kkt_residual <= kDefaultInnerTol);
}

TEST_CASE("solve_qp lower bound with H = diag(1, 2)") {
  Matrix A(1, 2);
  A << -1, 0;
  const QuadraticSubproblem qp{Vector(vec({1, 2})).asDiagonal(), Vector::Zero(2), PolyhedralSet(A, vec({-1}))};
  CHECK(max_abs_diff(solve_qp(qp).y, vec({1, 0})) <= 1e-10);
  CHECK(max_abs_diff(brute_force_qp(qp), vec({1, 0})) <= 1e-12);
}

TEST_CASE("solve_qp reports an infeasible set") {
  Matrix A(2, 1);
  A << 1, -1;
  const QuadraticSubproblem qp{Matrix::Identity(1, 1), vec({0}), PolyhedralSet(A, vec({-1, -1}))};
  const auto sol = solve_qp(qp);
  CHECK(sol.status == QpStatus::kInfeasible);
  CHECK_THROWS_AS(require_converged(sol, "test"), InfeasibleSet);
  CHECK_THROWS_AS(brute_force_qp(qp), InfeasibleSet);
  CHECK_FALSE(find_feasible_point(qp.set).has_value());
}

TEST_CASE("brute_force_qp refuses large constraint counts") {
  const QuadraticSubproblem qp{Matrix::Identity(2, 2), Vector::Zero(2),
                               PolyhedralSet(Matrix::Ones(13, 2), Vector::Ones(13))};
  CHECK_THROWS_AS(brute_force_qp(qp), DimensionTooLarge);
}

TEST_CASE("brute_force_qp agrees with an independent Schur-complement oracle") {
  TestRng rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto qp = random_qp(rng, rng.integer(1, 4), rng.integer(1, 6));
    const Vector ref = schur_oracle(qp.hessian, qp.linear, qp.set.A(), qp.set.b());
    REQUIRE(ref.size() == qp.hessian.rows());
    CHECK(max_abs_diff(brute_force_qp(qp), ref) <= 1e-8);
  }
}

TEST_CASE("solve_qp matches the oracle on degenerate constraints") {
  // Duplicate and parallel rows make the active gram matrix singular.
  Matrix A(4, 2);
  A << 1, 1, 1, 1, 2, 2, 1, 0;
  const QuadraticSubproblem qp{Matrix::Identity(2, 2), vec({-3, -3}), PolyhedralSet(A, vec({1, 1, 2, 5}))};
  const auto sol = solve_qp(qp);
  CHECK(sol.converged());
  CHECK(max_abs_diff(sol.y, vec({0.5, 0.5})) <= 1e-9);
}

TEST_CASE("solve_qp is deterministic and honours warm starts") {
  TestRng rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto qp = random_qp(rng, 4, 6);
    const auto a = solve_qp(qp);
    const auto b = solve_qp(qp);
    CHECK(a.y == b.y);
    const auto warm = solve_qp(qp, a.multipliers);
    CHECK(max_abs_diff(warm.y, a.y) <= 1e-9);
    CHECK(warm.iterations <= a.iterations + 1);
  }
}

TEST_CASE("project_polyhedron examples") {
  const auto box = extravisc::testing::box2(0, 1);
  const auto inside = solve_projection(box, vec({0.2, 0.9}));
  CHECK(inside.y == vec({0.2, 0.9}));
  CHECK(inside.kkt_residual == 0.0);
  CHECK(max_abs_diff(project_polyhedron(box, vec({2, -1})), vec({1, 0})) <= 1e-10);

  TestRng rng(2);
  for (int t = 0; t < 50; ++t) {
    const HalfSpace hs(rng.vector(3, -1, 1), rng.uniform(-1, 1));
    const PolyhedralSet single(hs.normal().transpose(), Vector::Constant(1, hs.offset()));
    const Vector x = rng.vector(3, -3, 3);
    CHECK(max_abs_diff(project_polyhedron(single, x), project_halfspace(hs, x)) <= 1e-10);
  }
}

TEST_CASE("solve_qp on ill-conditioned and nearly degenerate problems") {
  TestRng rng(404);
  int checked = 0;
  for (int t = 0; t < 1500; ++t) {
    const Index m = rng.integer(1, 5), k = rng.integer(1, 10);
    const Matrix H = rng.symmetric(m, rng.uniform(0.01, 1.0), rng.uniform(1.0, 100.0));
    const PolyhedralSet base = rng.polyhedron(m, k, rng.vector(m, -2, 2));
    Matrix A = base.A();
    Vector b = base.b();
    if (t % 2 == 1 && k > 1) {
      // Parallel duplicate row.
      A.row(k - 1) = 2.0 * A.row(0);
      b[k - 1] = 2.0 * b[0];
    }
    const QuadraticSubproblem qp{H, rng.vector(m, -5, 5) * rng.uniform(0.1, 10.0), PolyhedralSet(A, b)};
    const auto sol = solve_qp(qp);
    REQUIRE(sol.converged());
    const Vector ref = brute_force_qp(qp);
    CHECK(max_abs_diff(sol.y, ref) <= 1e-6 * (1.0 + ref.lpNorm<Eigen::Infinity>()));
    ++checked;
  }
  CHECK(checked == 1500);
}

TEST_CASE("solve_qp detects emptiness among many rows") {
  // a'y <= b together with a'y >= b + 0.5, hidden among random rows.
  TestRng rng(405);
  for (int t = 0; t < 300; ++t) {
    const Index m = rng.integer(1, 5), k = rng.integer(2, 10);
    const PolyhedralSet base = rng.polyhedron(m, k, rng.vector(m, -2, 2));
    Matrix A = base.A();
    Vector b = base.b();
    A.row(k - 1) = -A.row(0);
    b[k - 1] = -b[0] - 0.5;
    const QuadraticSubproblem qp{rng.symmetric(m, 0.05, 20.0), rng.vector(m, -5, 5), PolyhedralSet(A, b)};
    CHECK(solve_qp(qp).status == QpStatus::kInfeasible);
  }
}
