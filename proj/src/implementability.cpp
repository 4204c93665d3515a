#include "incentives/implementability.hpp"

#include <cmath>
#include <limits>

#include "incentives/error.hpp"
#include "incentives/orders.hpp"

namespace incentives {

namespace {

constexpr double kBoundaryZero = 1e-12;

void validate(const Experiment& e_p, const PosteriorDistribution& target, const PosteriorCost& cost) {
  if (target.num_states() != e_p.num_states() || cost.prior().size() != e_p.num_states()) {
    throw InputError("implementability: experiment, target and cost disagree on the state space");
  }
  if (!is_bayes_plausible(target, cost.prior())) {
    throw InputError("implementability: target does not average back to the cost's prior");
  }
}

// Fills residuals and verdict for the adjusted marginal costs g.
void assess(const PseudoInverse& pi, const Matrix& g, const Tolerances& tol, ImplementabilityReport& r) {
  const Eigen::Index k = g.cols();
  r.residuals.assign(static_cast<std::size_t>(k), 0.0);
  r.thresholds.assign(static_cast<std::size_t>(k), tol.residual);
  r.implementable = true;
  for (Eigen::Index j = 0; j + 1 < k; ++j) {
    const Vector diff = g.col(j) - g.col(k - 1);
    const double thr = tol.residual * std::max(diff.norm(), 1.0);
    const double res = r.full_row_rank ? 0.0 : column_space_residual(pi, diff);
    r.residuals[static_cast<std::size_t>(j)] = res;
    r.thresholds[static_cast<std::size_t>(j)] = thr;
    if (res > thr) r.implementable = false;
  }
  if (r.implementable) {
    const Matrix& l = pi.left_null_basis;
    const Vector mean_g = g.rowwise().mean();
    r.lambda = l.cols() ? Vector(-(l * (l.transpose() * mean_g))) : Vector(Vector::Zero(g.rows()));
  } else {
    r.reason = "marginal cost differences leave the column space of the contractible experiment";
  }
}

ImplementabilityReport infinite_cost_report(const Experiment& e_p, const Tolerances& tol) {
  ImplementabilityReport r;
  r.implementable = false;
  r.rank = numerical_rank(e_p.kernel(), tol.rank);
  r.full_row_rank = r.rank == e_p.num_states();
  r.reason = "target has infinite information cost";
  return r;
}

}  // namespace

std::string to_string(ImplementabilityMode m) {
  return m == ImplementabilityMode::Interior ? "interior" : "corner";
}

ImplementabilityReport check_implementable(const Experiment& e_p, const PosteriorDistribution& target,
                                           const PosteriorCost& cost, const Tolerances& tol) {
  tol.validate();
  validate(e_p, target, cost);
  if (!std::isfinite(total_cost(cost, target))) return infinite_cost_report(e_p, tol);
  if (!target.all_interior()) return check_implementable_corner(e_p, target, cost, tol);

  ImplementabilityReport r;
  r.mode = ImplementabilityMode::Interior;
  r.nabla = marginal_cost_matrix(cost, target).nabla;
  const PseudoInverse pi = pseudo_inverse(e_p.kernel(), tol.rank);
  r.rank = pi.rank;
  r.full_row_rank = pi.rank == e_p.num_states();
  assess(pi, r.nabla, tol, r);
  return r;
}

ImplementabilityReport check_implementable_corner(const Experiment& e_p,
                                                  const PosteriorDistribution& target,
                                                  const PosteriorCost& cost, const Tolerances& tol) {
  tol.validate();
  validate(e_p, target, cost);
  if (!std::isfinite(total_cost(cost, target))) return infinite_cost_report(e_p, tol);

  ImplementabilityReport r;
  r.mode = target.all_interior() ? ImplementabilityMode::Interior : ImplementabilityMode::Corner;
  r.nabla = marginal_cost_matrix(cost, target).nabla;
  const PseudoInverse pi = pseudo_inverse(e_p.kernel(), tol.rank);
  r.rank = pi.rank;
  r.full_row_rank = pi.rank == e_p.num_states();

  const Eigen::Index n = e_p.num_states();
  const Eigen::Index k = static_cast<Eigen::Index>(target.size());
  Matrix eta = Matrix::Zero(n, k);

  // eta variables exist only on zero coordinates of the posteriors.
  std::vector<std::pair<Eigen::Index, Eigen::Index>> cells;
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (target.support[static_cast<std::size_t>(j)](i) < kBoundaryZero) cells.emplace_back(i, j);
    }
  }

  if (!r.full_row_rank && !cells.empty() && k > 1) {
    // minimize t  s.t.  |L'(d_j - eta_j + eta_K)| <= t  componentwise, eta >= 0.
    const Matrix& l = pi.left_null_basis;
    const Eigen::Index q = l.cols();
    const Eigen::Index nv = static_cast<Eigen::Index>(cells.size()) + 1;
    const Eigen::Index t_idx = nv - 1;
    LpProblem lp(nv);
    lp.objective(t_idx) = 1.0;
    for (Eigen::Index j = 0; j + 1 < k; ++j) {
      const Vector ld = l.transpose() * (r.nabla.col(j) - r.nabla.col(k - 1));
      for (Eigen::Index a = 0; a < q; ++a) {
        Vector coeff = Vector::Zero(nv);  // coefficients of L'(eta_j - eta_K) in row a
        for (std::size_t c = 0; c < cells.size(); ++c) {
          const auto [i, col] = cells[c];
          if (col == j) coeff(static_cast<Eigen::Index>(c)) += l(i, a);
          if (col == k - 1) coeff(static_cast<Eigen::Index>(c)) -= l(i, a);
        }
        Vector up = coeff;
        up(t_idx) = -1.0;
        lp.add_le(up, ld(a));   //  L'eta_diff - t <= L'd
        Vector lo = -coeff;
        lo(t_idx) = -1.0;
        lp.add_le(lo, -ld(a));  // -L'eta_diff - t <= -L'd
      }
    }
    LpOptions opts;
    opts.feasibility_tol = tol.lp;
    const LpSolution sol = solve_lp(lp, opts);
    if (!sol.optimal()) {
      throw SolverError("check_implementable_corner: multiplier LP ended with " + to_string(sol.status) +
                        (sol.message.empty() ? "" : ": " + sol.message));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      eta(cells[c].first, cells[c].second) = std::max(0.0, sol.x(static_cast<Eigen::Index>(c)));
    }
  }

  assess(pi, r.nabla - eta, tol, r);
  if (r.implementable) {
    r.eta = eta;
  }
  return r;
}

bool check_unique_implementable(const Experiment& e_p, const PosteriorDistribution& target,
                                const PosteriorCost& cost, const Tolerances& tol) {
  if (!cost.strictly_convex()) return false;
  if (!check_implementable(e_p, target, cost, tol).implementable) return false;
  return numerical_rank(target.matrix(), tol.rank) == static_cast<int>(target.size());
}

bool check_no_dominance(const MarginalCostMatrix& m, const LpOptions& opts) {
  const Matrix& g = m.nabla;
  require_finite(g, "check_no_dominance");
  const Eigen::Index n = g.rows();
  const Eigen::Index k = g.cols();
  for (Eigen::Index j = 0; j < k; ++j) {
    std::vector<Eigen::Index> others;
    for (Eigen::Index o = 0; o < k; ++o) {
      if (o != j && (g.col(o) - g.col(j)).cwiseAbs().maxCoeff() > kSumTolerance) others.push_back(o);
    }
    if (others.empty()) continue;
    const Eigen::Index nv = static_cast<Eigen::Index>(others.size());
    LpProblem lp(nv);
    lp.add_eq(Vector::Ones(nv), 1.0);
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector row(nv);
      for (Eigen::Index a = 0; a < nv; ++a) row(a) = -g(i, others[static_cast<std::size_t>(a)]);
      lp.add_le(row, -g(i, j));
    }
    const LpSolution sol = solve_lp(lp, opts);
    if (sol.status == LpStatus::SolverFailure) throw SolverError("check_no_dominance: " + sol.message);
    if (sol.optimal()) return false;
  }
  return true;
}

OrderVerdict compare_implementable_sets(const Experiment& e_p, const Experiment& e_p2, double rank_tol) {
  return colspace_compare(e_p, e_p2, rank_tol);
}

}  // namespace incentives
