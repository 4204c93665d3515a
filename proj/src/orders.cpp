#include "incentives/orders.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <limits>

#include "incentives/error.hpp"

namespace incentives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kRatioTol = 1e-12;

bool approx_eq(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= kRatioTol * std::max({1.0, std::abs(a), std::abs(b)});
}

bool approx_ge(double a, double b) { return a > b || approx_eq(a, b); }

void check_same_states(const Experiment& e, const Experiment& f, const char* what) {
  if (e.num_states() != f.num_states()) {
    throw InputError(std::string(what) + ": experiments have different state spaces");
  }
}

// Nonnegative V with e V = f, column by column.
std::optional<Matrix> cone_certificate(const Matrix& e, const Matrix& f, const LpOptions& opts) {
  Matrix v(e.cols(), f.cols());
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    LpProblem lp(e.cols());
    lp.a_eq = e;
    lp.b_eq = f.col(j);
    const LpSolution sol = solve_lp(lp, opts);
    if (sol.status == LpStatus::SolverFailure) throw SolverError("cone_compare: " + sol.message);
    if (!sol.optimal()) return std::nullopt;
    v.col(j) = sol.x.cwiseMax(0.0);
  }
  return v;
}

bool map_checks(const Matrix& e, const Matrix& f, const Matrix& g, bool stochastic, double tol) {
  if (g.rows() != e.cols() || g.cols() != f.cols()) return false;
  if (g.minCoeff() < -tol) return false;
  if (stochastic && (g.rowwise().sum().array() - 1.0).abs().maxCoeff() > tol) return false;
  return (e * g - f).cwiseAbs().maxCoeff() <= tol;
}

Matrix joined(const Matrix& e, const Matrix& f) {
  Matrix j(e.rows(), e.cols() + f.cols());
  j << e, f;
  return j;
}

}  // namespace

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Dominates: return "Dominates";
    case Relation::DominatedBy: return "DominatedBy";
    case Relation::Equivalent: return "Equivalent";
    case Relation::Incomparable: return "Incomparable";
  }
  return "Incomparable";
}

Relation combine(bool forward, bool backward) {
  if (forward && backward) return Relation::Equivalent;
  if (forward) return Relation::Dominates;
  if (backward) return Relation::DominatedBy;
  return Relation::Incomparable;
}

bool OrderVerdict::verify(const Matrix& e, const Matrix& f, double tol) const {
  const OrderCertificate& c = certificate;
  const bool fwd = relation == Relation::Dominates || relation == Relation::Equivalent;
  const bool bwd = relation == Relation::DominatedBy || relation == Relation::Equivalent;
  if (c.kind == "garbling" || c.kind == "cone") {
    const bool stochastic = c.kind == "garbling";
    if (fwd != c.forward.has_value() || bwd != c.backward.has_value()) return false;
    if (c.forward && !map_checks(e, f, *c.forward, stochastic, tol)) return false;
    if (c.backward && !map_checks(f, e, *c.backward, stochastic, tol)) return false;
    return true;
  }
  if (c.kind == "rank") {
    const int re = numerical_rank(e);
    const int rf = numerical_rank(f);
    const int rj = numerical_rank(joined(e, f));
    return re == c.rank_e && rf == c.rank_f && rj == c.rank_joint && fwd == (rj == re) &&
           bwd == (rj == rf);
  }
  if (c.kind == "likelihood") {
    const LikelihoodRatios a = binary_likelihood_ratios(Experiment(e));
    const LikelihoodRatios b = binary_likelihood_ratios(Experiment(f));
    const bool f2 = approx_ge(a.spread(), b.spread()) && approx_ge(a.reciprocal_spread(), b.reciprocal_spread());
    const bool b2 = approx_ge(b.spread(), a.spread()) && approx_ge(b.reciprocal_spread(), a.reciprocal_spread());
    return f2 == fwd && b2 == bwd && approx_eq(a.spread(), c.spread_e) && approx_eq(b.spread(), c.spread_f);
  }
  return false;
}

double LikelihoodRatios::spread() const { return std::isinf(l2) ? kInf : l2 - l1; }

double LikelihoodRatios::reciprocal_spread() const {
  if (l1 == 0.0) return kInf;
  const double inv2 = std::isinf(l2) ? 0.0 : 1.0 / l2;
  return 1.0 / l1 - inv2;
}

LikelihoodRatios binary_likelihood_ratios(const Experiment& e) {
  if (e.num_states() != 2 || e.num_realizations() != 2) {
    throw UnsupportedError(
        "binary likelihood ratios need 2 states and 2 realizations; use the general "
        "cost comparison for other shapes");
  }
  const Matrix& k = e.kernel();
  double l[2];
  for (int m = 0; m < 2; ++m) {
    const double p1 = k(0, m);
    const double p2 = k(1, m);
    if (p1 == 0.0 && p2 == 0.0) {
      throw DegenerateExperimentError("realization " + e.realizations()[static_cast<std::size_t>(m)] +
                                      " is never sent");
    }
    l[m] = p1 == 0.0 ? kInf : p2 / p1;
  }
  LikelihoodRatios r;
  r.swapped = l[0] > l[1];
  r.l1 = r.swapped ? l[1] : l[0];
  r.l2 = r.swapped ? l[0] : l[1];
  if (approx_eq(r.l1, r.l2)) r.l1 = r.l2 = 1.0;
  return r;
}

OrderVerdict cone_compare(const Experiment& e, const Experiment& f, const LpOptions& opts) {
  check_same_states(e, f, "cone_compare");
  OrderVerdict v;
  v.certificate.kind = "cone";
  v.certificate.forward = cone_certificate(e.kernel(), f.kernel(), opts);
  v.certificate.backward = cone_certificate(f.kernel(), e.kernel(), opts);
  v.relation = combine(v.certificate.forward.has_value(), v.certificate.backward.has_value());
  v.strict = v.relation == Relation::Dominates || v.relation == Relation::DominatedBy;
  return v;
}

OrderVerdict colspace_compare(const Experiment& e, const Experiment& f, double rank_tol) {
  check_same_states(e, f, "colspace_compare");
  OrderVerdict v;
  OrderCertificate& c = v.certificate;
  c.kind = "rank";
  c.rank_e = numerical_rank(e.kernel(), rank_tol);
  c.rank_f = numerical_rank(f.kernel(), rank_tol);
  c.rank_joint = numerical_rank(joined(e.kernel(), f.kernel()), rank_tol);
  v.relation = combine(c.rank_joint == c.rank_e, c.rank_joint == c.rank_f);
  v.strict = v.relation == Relation::Dominates || v.relation == Relation::DominatedBy;
  return v;
}

OrderVerdict binary_k_compare(const Experiment& e, const Experiment& f) {
  const LikelihoodRatios a = binary_likelihood_ratios(e);
  const LikelihoodRatios b = binary_likelihood_ratios(f);
  OrderVerdict v;
  OrderCertificate& c = v.certificate;
  c.kind = "likelihood";
  c.l1_e = a.l1;
  c.l2_e = a.l2;
  c.l1_f = b.l1;
  c.l2_f = b.l2;
  c.spread_e = a.spread();
  c.reciprocal_spread_e = a.reciprocal_spread();
  c.spread_f = b.spread();
  c.reciprocal_spread_f = b.reciprocal_spread();
  const bool fwd = approx_ge(c.spread_e, c.spread_f) && approx_ge(c.reciprocal_spread_e, c.reciprocal_spread_f);
  const bool bwd = approx_ge(c.spread_f, c.spread_e) && approx_ge(c.reciprocal_spread_f, c.reciprocal_spread_e);
  v.relation = combine(fwd, bwd);
  v.strict = v.relation == Relation::Dominates || v.relation == Relation::DominatedBy;
  return v;
}

bool k_dominance_sufficient(const Experiment& e, const Experiment& f, const LpOptions& opts) {
  return cone_compare(e, f, opts).dominates_or_equivalent();
}

}  // namespace incentives
