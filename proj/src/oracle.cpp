#include "incentives/oracle.hpp"

#include <cmath>
#include <limits>

#include "incentives/error.hpp"

namespace incentives {

namespace {

constexpr double kSupportWeight = 1e-9;

std::vector<Vector> simplex_grid(Eigen::Index n, int resolution) {
  std::vector<Vector> pts;
  const int steps = resolution - 1;
  const double h = 1.0 / static_cast<double>(steps);
  if (n == 2) {
    pts.reserve(static_cast<std::size_t>(resolution));
    for (int i = 0; i <= steps; ++i) {
      Vector p(2);
      p(0) = i * h;
      p(1) = (steps - i) * h;
      pts.push_back(p);
    }
  } else {
    pts.reserve(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution + 1) / 2);
    for (int i = 0; i <= steps; ++i) {
      for (int j = 0; i + j <= steps; ++j) {
        Vector p(3);
        p(0) = i * h;
        p(1) = j * h;
        p(2) = (steps - i - j) * h;
        pts.push_back(p);
      }
    }
  }
  return pts;
}

}  // namespace

int GridSpec::default_resolution(Eigen::Index num_states) { return num_states == 2 ? 2001 : 201; }

OracleResult agent_best_response(const Experiment& e_p, const Contract& t, const PosteriorCost& cost,
                                 const Belief& prior, const GridSpec& grid,
                                 const PosteriorDistribution* target) {
  const Eigen::Index n = e_p.num_states();
  if (n != 2 && n != 3) throw UnsupportedError("agent_best_response: only 2 or 3 states are supported");
  if (prior.size() != n || cost.prior().size() != n) throw InputError("agent_best_response: dimension mismatch");
  if (t.payments.rows() != e_p.num_realizations()) {
    throw InputError("agent_best_response: contract rows do not match the experiment's realizations");
  }
  require_finite(t.payments, "agent_best_response");
  const int resolution = grid.resolution > 0 ? grid.resolution : GridSpec::default_resolution(n);
  if (resolution < 101) throw InputError("agent_best_response: grid resolution must be at least 101");

  std::vector<Vector> pts = simplex_grid(n, resolution);
  pts.push_back(prior.probs());
  if (target) {
    if (target->num_states() != n) throw InputError("agent_best_response: target dimension mismatch");
    for (const Belief& b : target->support) pts.push_back(b.probs());
  }
  for (const Vector& a : grid.augment) {
    if (a.size() != n) throw InputError("agent_best_response: augment point dimension mismatch");
    pts.push_back(Belief(a).probs());
  }

  const Matrix u = e_p.kernel() * t.payments;  // N x K
  std::vector<Vector> kept;
  std::vector<double> phi;
  std::vector<int> argmax;
  kept.reserve(pts.size());
  for (const Vector& p : pts) {
    const double c = cost.value(p);
    if (!std::isfinite(c)) continue;
    Eigen::Index best = 0;
    const Vector vals = u.transpose() * p;
    vals.maxCoeff(&best);
    kept.push_back(p);
    phi.push_back(vals(best) - c);
    argmax.push_back(static_cast<int>(best));
  }
  if (kept.empty()) throw InputError("agent_best_response: cost is infinite on the whole grid");

  const Eigen::Index g = static_cast<Eigen::Index>(kept.size());
  LpProblem lp(g);
  lp.a_eq.resize(n, g);
  lp.b_eq.resize(n);
  for (Eigen::Index j = 0; j < g; ++j) {
    lp.objective(j) = -phi[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i + 1 < n; ++i) lp.a_eq(i, j) = kept[static_cast<std::size_t>(j)](i);
    lp.a_eq(n - 1, j) = 1.0;
  }
  lp.b_eq.head(n - 1) = prior.probs().head(n - 1);
  lp.b_eq(n - 1) = 1.0;
  const LpSolution sol = solve_lp(lp);
  if (!sol.optimal()) {
    throw SolverError("agent_best_response: concavification LP ended with " + to_string(sol.status) +
                      (sol.message.empty() ? "" : ": " + sol.message));
  }

  OracleResult out;
  out.resolution = resolution;
  out.grid_points = static_cast<int>(g);
  std::vector<double> w;
  for (Eigen::Index j = 0; j < g; ++j) {
    const double wj = sol.x(j);
    out.optimal_value += wj * phi[static_cast<std::size_t>(j)];
    if (wj > kSupportWeight) {
      out.support.emplace_back(Vector(kept[static_cast<std::size_t>(j)]));
      out.reports.push_back(argmax[static_cast<std::size_t>(j)]);
      w.push_back(wj);
    }
  }
  out.weights = Eigen::Map<Vector>(w.data(), static_cast<Eigen::Index>(w.size()));

  if (target) {
    if (t.payments.cols() != static_cast<Eigen::Index>(target->size())) {
      throw InputError("agent_best_response: contract columns do not match the target's reports");
    }
    double tv = 0.0;
    for (std::size_t k = 0; k < target->size(); ++k) {
      const Vector& x = target->support[k].probs();
      tv += target->weights(static_cast<Eigen::Index>(k)) *
            (x.dot(u.col(static_cast<Eigen::Index>(k))) - cost.value(x));
    }
    out.target_value = tv;
    out.gap = out.optimal_value - tv;
    out.target_in_support = true;
    for (const Belief& b : target->support) {
      bool found = false;
      for (const Belief& s : out.support) {
        if ((s.probs() - b.probs()).cwiseAbs().maxCoeff() <= 1e-9) found = true;
      }
      out.target_in_support = out.target_in_support && found;
    }
  } else {
    out.target_value = std::numeric_limits<double>::quiet_NaN();
    out.gap = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

bool verify_contract(const Experiment& e_p, const PosteriorDistribution& target, const PosteriorCost& cost,
                     const Contract& t, double tol, const GridSpec& grid) {
  const OracleResult r = agent_best_response(e_p, t, cost, cost.prior(), grid, &target);
  return r.gap <= tol;
}

}  // namespace incentives
