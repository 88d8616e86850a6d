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

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace extravisc {

namespace {

constexpr int kPolishEvery = 10;
constexpr int kInfeasibilityCheckEvery = 25;
constexpr int kMaxBruteForceRows = 12;

// The dual of min 1/2 y'Hy + c'y s.t. Ay <= b, written over the multipliers:
//   y(l) = y0 - H^{-1} A' l,   grad(l) = A y(l) - b = slack0 - G l,
// with G = A H^{-1} A'.
struct DualProblem {
  Vector y0;
  Matrix hinv;
  Matrix hinv_at;
  Matrix gram;
  Vector slack0;
  double step = 1.0;
};

DualProblem make_dual(const QuadraticSubproblem& qp) {
  const Matrix& H = qp.hessian;
  const Matrix& A = qp.set.A();
  Eigen::LLT<Matrix> llt(H);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("QP Hessian is not positive definite");
  }
  DualProblem d;
  d.y0 = -llt.solve(qp.linear);
  d.hinv = llt.solve(Matrix::Identity(H.rows(), H.cols()));
  d.hinv_at = d.hinv * A.transpose();
  d.gram = A * d.hinv_at;
  d.slack0 = A * d.y0 - qp.set.b();
  if (d.gram.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(d.gram, Eigen::EigenvaluesOnly);
    const double top = eig.eigenvalues().maxCoeff();
    d.step = top > 0.0 ? 1.0 / top : 1.0;
  }
  return d;
}

Vector primal_from(const DualProblem& d, const Vector& lambda) {
  return d.y0 - d.hinv_at * lambda;
}

std::vector<int> support_of(const Vector& lambda) {
  std::vector<int> w;
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > 0.0) w.push_back(static_cast<int>(i));
  }
  return w;
}

struct Candidate {
  Vector y;
  Vector lambda;
  double residual = std::numeric_limits<double>::infinity();
};

// Primal-dual active-set refinement seeded by `active`: solve the KKT system
// with the rows of `active` held tight, drop the most negative multiplier or
// add the most violated row, and repeat until the residual drops below tol.
Candidate polish(const QuadraticSubproblem& qp, const DualProblem& d,
                 std::vector<int> active, double tol) {
  const Index k = qp.set.constraint_count();
  Candidate best;
  const int max_steps = 2 * static_cast<int>(k) + 4;
  for (int step = 0; step < max_steps; ++step) {
    Vector lambda = Vector::Zero(k);
    if (!active.empty()) {
      const Index s = static_cast<Index>(active.size());
      Matrix gw(s, s);
      Vector rhs(s);
      for (Index r = 0; r < s; ++r) {
        rhs[r] = d.slack0[active[r]];
        for (Index c = 0; c < s; ++c) gw(r, c) = d.gram(active[r], active[c]);
      }
      const Vector sol = gw.completeOrthogonalDecomposition().solve(rhs);
      Index worst = 0;
      const double most_negative = sol.minCoeff(&worst);
      if (most_negative < -tol) {
        active.erase(active.begin() + worst);
        continue;
      }
      for (Index r = 0; r < s; ++r) lambda[active[r]] = std::max(sol[r], 0.0);
    }
    Vector y = primal_from(d, lambda);
    const Vector slack = qp.set.A() * y - qp.set.b();
    Index row = 0;
    const double worst_violation = k > 0 ? slack.maxCoeff(&row) : 0.0;
    if (worst_violation > tol) {
      if (std::find(active.begin(), active.end(), row) != active.end()) break;
      active.push_back(static_cast<int>(row));
      std::sort(active.begin(), active.end());
      continue;
    }
    const double res = kkt_residual(qp, y, lambda);
    if (res < best.residual) best = Candidate{std::move(y), std::move(lambda), res};
    break;
  }
  return best;
}

// Farkas test on a multiplier displacement: d >= 0, A' d = 0 and b'd < 0
// certify that {Ay <= b} is empty.
bool certifies_infeasible(const PolyhedralSet& set, const Vector& delta) {
  const double scale = delta.lpNorm<Eigen::Infinity>();
  if (!(scale > 0.0)) return false;
  const Vector dir = delta / scale;
  if (dir.minCoeff() < -1e-9) return false;
  const double a_scale = std::max(1.0, set.A().lpNorm<Eigen::Infinity>());
  const double b_scale = std::max(1.0, set.b().lpNorm<Eigen::Infinity>());
  const double stationarity = (set.A().transpose() * dir).lpNorm<Eigen::Infinity>();
  return stationarity <= 1e-9 * a_scale && set.b().dot(dir) < -1e-7 * b_scale;
}

struct ActiveSetOutcome {
  Candidate candidate;
  int steps = 0;
  bool infeasible = false;
};

// Dual active-set method of Goldfarb and Idnani, started from the
// unconstrained minimum. Each round picks the most violated row p and raises
// its multiplier t while keeping the active rows tight:
//   y(t) = y + t z,  lambda_W(t) = lambda_W - t r,  lambda_p(t) = t,
// with z = -(H^-1 - H^-1 N S^-1 N' H^-1) a_p, r = S^-1 N' H^-1 a_p and
// S = N' H^-1 N. A row whose multiplier reaches zero first is dropped (partial
// step); otherwise p joins the active set (full step). If a_p lies in the
// span of the active rows and no multiplier can decrease, the set is empty.
ActiveSetOutcome dual_active_set(const QuadraticSubproblem& qp, const DualProblem& d, double tol) {
  const Matrix& A = qp.set.A();
  const Vector& b = qp.set.b();
  const Index m = d.y0.size();
  const Index k = A.rows();
  ActiveSetOutcome out;
  Vector y = d.y0;
  Vector lambda = Vector::Zero(k);
  std::vector<int> active;
  const int max_steps = 20 * static_cast<int>(k + m) + 50;

  while (out.steps < max_steps && k > 0) {
    Index p = 0;
    if ((A * y - b).maxCoeff(&p) <= 0.1 * tol) break;
    if (std::find(active.begin(), active.end(), p) != active.end()) break;
    const Vector ap = A.row(p).transpose();
    const Vector hinv_ap = d.hinv * ap;

    bool added = false;
    while (!added && out.steps++ < max_steps) {
      const Index q = static_cast<Index>(active.size());
      Vector z = -hinv_ap;
      Vector r(q);
      if (q > 0) {
        Matrix N(m, q);
        for (Index c = 0; c < q; ++c) N.col(c) = A.row(active[c]).transpose();
        const Matrix hn = d.hinv * N;
        r = (N.transpose() * hn).ldlt().solve(hn.transpose() * ap);
        z += hn * r;
      }
      double t1 = std::numeric_limits<double>::infinity();
      Index drop = -1;
      const double r_floor = 1e-12 * std::max(1.0, q > 0 ? r.lpNorm<Eigen::Infinity>() : 0.0);
      for (Index c = 0; c < q; ++c) {
        if (r[c] > r_floor && lambda[active[c]] / r[c] < t1) {
          t1 = lambda[active[c]] / r[c];
          drop = c;
        }
      }
      double t2 = std::numeric_limits<double>::infinity();
      // a_p' H_act a_p, tiny when a_p lies in the span of the active rows.
      const double curvature = -ap.dot(z);
      if (q < m && curvature > 1e-10 * ap.dot(hinv_ap)) t2 = std::max(0.0, (ap.dot(y) - b[p]) / curvature);
      if (drop < 0 && !std::isfinite(t2)) {
        out.infeasible = true;
        break;
      }
      const double t = std::min(t1, t2);
      if (std::isfinite(t2)) y += t * z;
      for (Index c = 0; c < q; ++c) lambda[active[c]] -= t * r[c];
      lambda[p] += t;
      if (t2 <= t1) {
        active.push_back(static_cast<int>(p));
        added = true;
      } else {
        lambda[active[drop]] = 0.0;
        active.erase(active.begin() + drop);
      }
    }
    if (out.infeasible) break;
  }
  lambda = lambda.cwiseMax(0.0);
  const double res = kkt_residual(qp, y, lambda);
  out.candidate = Candidate{std::move(y), std::move(lambda), res};
  return out;
}

std::vector<int> tight_rows(const QuadraticSubproblem& qp, const Vector& y,
                            const Vector& lambda, double tol) {
  std::vector<int> rows;
  const Vector slack = qp.set.A() * y - qp.set.b();
  const double near = std::max(10.0 * tol, 1e-12);
  for (Index i = 0; i < slack.size(); ++i) {
    if (lambda[i] > 0.0 || std::abs(slack[i]) <= near) rows.push_back(static_cast<int>(i));
  }
  return rows;
}

QpSolution finish(const QuadraticSubproblem& qp, Candidate c, int iterations,
                  QpStatus status, double tol) {
  QpSolution sol;
  sol.active_set = tight_rows(qp, c.y, c.lambda, tol);
  sol.y = std::move(c.y);
  sol.multipliers = std::move(c.lambda);
  sol.kkt_residual = c.residual;
  sol.iterations = iterations;
  sol.status = status;
  return sol;
}

}  // namespace

double kkt_residual(const QuadraticSubproblem& qp, const Vector& y,
                    const Vector& multipliers) {
  const Matrix& A = qp.set.A();
  double res = (qp.hessian * y + qp.linear + A.transpose() * multipliers)
                   .lpNorm<Eigen::Infinity>();
  if (A.rows() == 0) return res;
  const Vector slack = A * y - qp.set.b();
  res = std::max(res, slack.maxCoeff());
  res = std::max(res, -multipliers.minCoeff());
  res = std::max(res, multipliers.cwiseProduct(slack).lpNorm<Eigen::Infinity>());
  return res;
}

Vector project_halfspace(const HalfSpace& hs, const Vector& x) {
  const Vector& h = hs.normal();
  const double excess = h.dot(x) - hs.offset();
  if (excess <= 0.0) return x;
  return x - (excess / h.squaredNorm()) * h;
}

QpSolution solve_qp(const QuadraticSubproblem& qp,
                    const std::optional<Vector>& warm_start, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_qp: tol must be positive");
  const Index m = qp.set.dimension();
  const Index k = qp.set.constraint_count();
  if (qp.hessian.rows() != m || qp.hessian.cols() != m || qp.linear.size() != m) {
    throw std::invalid_argument("solve_qp: dimension mismatch");
  }
  const DualProblem d = make_dual(qp);

  Candidate best = polish(qp, d, {}, tol);
  if (best.residual <= tol) return finish(qp, std::move(best), 0, QpStatus::kConverged, tol);

  Vector lambda = Vector::Zero(k);
  if (warm_start && warm_start->size() == k) {
    lambda = warm_start->cwiseMax(0.0);
    Candidate c = polish(qp, d, support_of(lambda), tol);
    if (c.residual < best.residual) best = std::move(c);
    if (best.residual <= tol) return finish(qp, std::move(best), 0, QpStatus::kConverged, tol);
  }

  auto fill_from = [&](Candidate& c, const Vector& l) {
    if (c.y.size()) return;
    Vector y = primal_from(d, l);
    const double res = kkt_residual(qp, y, l);
    c = Candidate{std::move(y), l, res};
  };

  const int cap = static_cast<int>(50 * k * m);
  Vector momentum = lambda;
  Vector checkpoint = lambda;
  double t = 1.0;
  for (int it = 1; it <= cap; ++it) {
    Vector next = (momentum + d.step * (d.slack0 - d.gram * momentum)).cwiseMax(0.0);
    // Restart when the momentum direction disagrees with the projected step.
    if ((momentum - next).dot(next - lambda) > 0.0) t = 1.0;
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    momentum = next + ((t - 1.0) / t_next) * (next - lambda);
    lambda = std::move(next);
    t = t_next;

    if (it % kPolishEvery == 0) {
      Vector y = primal_from(d, lambda);
      const double res = kkt_residual(qp, y, lambda);
      if (res < best.residual) best = Candidate{std::move(y), lambda, res};
      Candidate c = polish(qp, d, support_of(lambda), tol);
      if (c.residual < best.residual) best = std::move(c);
      if (best.residual <= tol) return finish(qp, std::move(best), it, QpStatus::kConverged, tol);
    }
    if (it % kInfeasibilityCheckEvery == 0) {
      if (certifies_infeasible(qp.set, lambda - checkpoint)) {
        fill_from(best, lambda);
        return finish(qp, std::move(best), it, QpStatus::kInfeasible, tol);
      }
      checkpoint = lambda;
    }
  }
  // The gradient iteration stalls on degenerate or nearly degenerate active
  // sets; finish with the finite active-set method.
  ActiveSetOutcome exact = dual_active_set(qp, d, tol);
  if (exact.infeasible) {
    return finish(qp, std::move(exact.candidate), cap + exact.steps, QpStatus::kInfeasible, tol);
  }
  if (exact.candidate.residual < best.residual) best = std::move(exact.candidate);
  fill_from(best, lambda);
  const QpStatus status = best.residual <= tol ? QpStatus::kConverged : QpStatus::kIterationLimit;
  return finish(qp, std::move(best), cap + exact.steps, status, tol);
}

Vector brute_force_qp(const QuadraticSubproblem& qp) {
  const Matrix& H = qp.hessian;
  const Matrix& A = qp.set.A();
  const Vector& b = qp.set.b();
  const Index m = H.rows();
  const Index k = A.rows();
  if (k > kMaxBruteForceRows) {
    throw DimensionTooLarge("brute_force_qp: at most 12 constraints supported");
  }
  const double feas_tol = 1e-9 * (1.0 + (k > 0 ? b.lpNorm<Eigen::Infinity>() : 0.0));
  double best_kkt = std::numeric_limits<double>::infinity();
  double best_any = std::numeric_limits<double>::infinity();
  Vector kkt_point;
  Vector any_point;
  for (unsigned long mask = 0; mask < (1ul << k); ++mask) {
    std::vector<Index> rows;
    for (Index i = 0; i < k; ++i) {
      if (mask & (1ul << i)) rows.push_back(i);
    }
    const Index s = static_cast<Index>(rows.size());
    Matrix K = Matrix::Zero(m + s, m + s);
    Vector rhs(m + s);
    K.topLeftCorner(m, m) = H;
    rhs.head(m) = -qp.linear;
    for (Index r = 0; r < s; ++r) {
      K.block(0, m + r, m, 1) = A.row(rows[r]).transpose();
      K.block(m + r, 0, 1, m) = A.row(rows[r]);
      rhs[m + r] = b[rows[r]];
    }
    Eigen::FullPivLU<Matrix> lu(K);
    const Vector sol = lu.solve(rhs);
    if ((K * sol - rhs).norm() > 1e-9 * (1.0 + rhs.norm())) continue;
    const Vector y = sol.head(m);
    if (k > 0 && (A * y - b).maxCoeff() > feas_tol) continue;
    const double obj = 0.5 * y.dot(H * y) + qp.linear.dot(y);
    if (obj < best_any) {
      best_any = obj;
      any_point = y;
    }
    if (s > 0 && sol.tail(s).minCoeff() < -1e-9) continue;
    if (obj < best_kkt) {
      best_kkt = obj;
      kkt_point = y;
    }
  }
  if (kkt_point.size()) return kkt_point;
  if (any_point.size()) return any_point;
  throw InfeasibleSet("brute_force_qp: no feasible candidate active set");
}

QpSolution solve_projection(const PolyhedralSet& set, const Vector& x,
                            const std::optional<Vector>& warm_start, double tol) {
  if (set.contains(x)) {
    QpSolution sol;
    sol.y = x;
    sol.multipliers = Vector::Zero(set.constraint_count());
    return sol;
  }
  const Index m = set.dimension();
  return solve_qp(QuadraticSubproblem{Matrix::Identity(m, m), -x, set}, warm_start, tol);
}

Vector project_polyhedron(const PolyhedralSet& set, const Vector& x, double tol) {
  return require_converged(solve_projection(set, x, std::nullopt, tol), "project_polyhedron").y;
}

std::optional<Vector> find_feasible_point(const PolyhedralSet& set, double tol) {
  const QpSolution sol = solve_projection(set, Vector::Zero(set.dimension()), std::nullopt, tol);
  if (sol.status == QpStatus::kInfeasible) return std::nullopt;
  return require_converged(sol, "find_feasible_point").y;
}

const QpSolution& require_converged(const QpSolution& sol, const std::string& context) {
  switch (sol.status) {
    case QpStatus::kConverged:
      return sol;
    case QpStatus::kInfeasible:
      throw InfeasibleSet(context + ": constraint set is empty");
    case QpStatus::kIterationLimit: {
      std::ostringstream msg;
      msg << context << ": QP iteration limit after " << sol.iterations
          << " iterations (KKT residual " << sol.kkt_residual << ")";
      throw IterationLimitExceeded(msg.str(), sol);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace extravisc
