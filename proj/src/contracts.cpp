#include "incentives/contracts.hpp"

#include <cmath>
#include <limits>

#include "incentives/error.hpp"
#include "incentives/orders.hpp"

namespace incentives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kClamp = 1e-9;

std::vector<std::string> report_labels(const PosteriorDistribution& d) { return d.labels; }

Contract make_contract(const ContractFamily& fam, Matrix payments, bool ll) {
  Contract c;
  c.payments = std::move(payments);
  c.limited_liability = ll;
  c.realizations = fam.realizations;
  c.reports = fam.reports;
  return c;
}

// Sets entries in (-kClamp, 0) to zero; anything more negative is a solver fault.
void clamp_nonnegative(Matrix& t) {
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
      if (t(i, j) < 0.0) {
        if (t(i, j) < -kClamp) throw SolverError("optimal_contract: negative payment from the LP");
        t(i, j) = 0.0;
      }
    }
  }
}

Vector solve_deficient(const ContractFamily& fam, const Vector& q, const Tolerances& tol) {
  const Eigen::Index m = fam.num_realizations();
  const Eigen::Index k = fam.num_reports();
  const Matrix& nb = fam.null_basis();
  const Eigen::Index d = nb.cols();
  const Eigen::Index nv = m + k * d;
  LpProblem lp(nv);
  lp.objective.head(m) = q;
  for (Eigen::Index j = 0; j < nv; ++j) lp.set_free(j);
  for (Eigen::Index col = 0; col < k; ++col) {
    for (Eigen::Index row = 0; row < m; ++row) {
      Vector a = Vector::Zero(nv);
      a(row) = -1.0;
      for (Eigen::Index c = 0; c < d; ++c) a(m + col * d + c) = -nb(row, c);
      lp.add_le(a, fam.base(row, col));
    }
  }
  LpOptions opts;
  opts.feasibility_tol = tol.lp;
  const LpSolution sol = solve_lp(lp, opts);
  if (!sol.optimal()) {
    throw SolverError("optimal_contract: payment LP ended with " + to_string(sol.status) +
                      (sol.message.empty() ? "" : ": " + sol.message));
  }
  return sol.x;
}

}  // namespace

TargetNotImplementable::TargetNotImplementable(ImplementabilityReport r)
    : NotImplementableError("target is not implementable: " + r.reason), report_(std::move(r)) {}

Contract ContractFamily::member(const Vector& z, const Matrix& w) const {
  if (z.size() != num_realizations() || w.rows() != num_realizations() || w.cols() != num_reports()) {
    throw InputError("ContractFamily::member: Z or W has the wrong shape");
  }
  const double leak = (pinv.source * w).cwiseAbs().maxCoeff();
  if (leak > 1e-9 * std::max(1.0, w.cwiseAbs().maxCoeff())) {
    throw InputError("ContractFamily::member: W is not in the kernel of E_P");
  }
  Matrix t = base + w;
  t.colwise() += z;
  return make_contract(*this, std::move(t), false);
}

Contract ContractFamily::member_from_coordinates(const Vector& z, const Matrix& omega) const {
  if (omega.rows() != null_basis().cols() || omega.cols() != num_reports()) {
    throw InputError("ContractFamily::member_from_coordinates: omega has the wrong shape");
  }
  return member(z, null_basis() * omega);
}

Vector ContractFamily::lambda(const Vector& z) const { return lambda0 + pinv.source * z; }

ContractFamily synthesize_family(const Experiment& e_p, const PosteriorDistribution& target,
                                 const PosteriorCost& cost, const Tolerances& tol) {
  ImplementabilityReport rep = check_implementable(e_p, target, cost, tol);
  if (!rep.implementable) throw TargetNotImplementable(std::move(rep));
  ContractFamily fam;
  fam.nabla = rep.eta ? Matrix(rep.nabla - *rep.eta) : rep.nabla;
  fam.pinv = pseudo_inverse(e_p.kernel(), tol.rank);
  fam.base = fam.pinv.pinv * fam.nabla;
  fam.lambda0 = (e_p.kernel() * fam.base - fam.nabla).rowwise().mean();
  fam.realizations = e_p.realizations();
  fam.reports = report_labels(target);
  fam.report = std::move(rep);
  return fam;
}

PaymentBreakdown expected_payment_breakdown(const Experiment& e_p, const PosteriorDistribution& target,
                                            const Belief& prior, const Contract& t) {
  const Eigen::Index k = static_cast<Eigen::Index>(target.size());
  if (t.payments.rows() != e_p.num_realizations() || t.payments.cols() != k) {
    throw InputError("expected_payment: contract shape does not match experiment and target");
  }
  if (prior.size() != e_p.num_states() || target.num_states() != e_p.num_states()) {
    throw InputError("expected_payment: state dimension mismatch");
  }
  const Matrix u = e_p.kernel() * t.payments;  // N x K state-contingent values
  PaymentBreakdown out;
  for (Eigen::Index j = 0; j < k; ++j) {
    out.joint += target.weights(j) * target.support[static_cast<std::size_t>(j)].probs().dot(u.col(j));
  }
  for (Eigen::Index n = 0; n < prior.size(); ++n) {
    for (Eigen::Index j = 0; j < k; ++j) {
      const double ea = target.weights(j) * target.support[static_cast<std::size_t>(j)](n) / prior(n);
      out.kernel += prior(n) * ea * u(n, j);
    }
  }
  return out;
}

double expected_payment(const Experiment& e_p, const PosteriorDistribution& target, const Belief& prior,
                        const Contract& t) {
  return expected_payment_breakdown(e_p, target, prior, t).joint;
}

double foc_deviation(const Experiment& e_p, const Matrix& payments, const Matrix& nabla) {
  return max_column_deviation(e_p.kernel() * payments - nabla);
}

CostReport optimal_contract(const Experiment& e_p, const PosteriorDistribution& target,
                            const PosteriorCost& cost, const Tolerances& tol) {
  CostReport out;
  out.first_best = total_cost(cost, target);
  ImplementabilityReport rep = check_implementable(e_p, target, cost, tol);
  if (!rep.implementable) {
    out.implementable = false;
    out.kappa = kInf;
    out.kappa_rowmin = kInf;
    out.kappa_lemma_a2 = kInf;
    out.agency_rent = kInf;
    out.implementability = std::move(rep);
    return out;
  }
  if (rep.mode == ImplementabilityMode::Corner) {
    throw UnsupportedError(
        "optimal_contract: targets with boundary posteriors are not supported; the corner "
        "multipliers are not unique and change the payment");
  }

  const ContractFamily fam = synthesize_family(e_p, target, cost, tol);
  const Belief& prior = cost.prior();
  const Matrix& ep = e_p.kernel();
  const Eigen::Index m = ep.cols();
  const Eigen::Index n = ep.rows();
  const Vector q = ep.transpose() * prior.probs();  // realization probabilities

  const Vector z_rowmin = -rowmin(fam.base);
  Matrix t_rowmin = fam.base;
  t_rowmin.colwise() += z_rowmin;

  Matrix t;
  if (fam.pinv.rank == n && n == m) {
    out.method = "rowmin";
    out.z = z_rowmin;
    t = t_rowmin;
  } else {
    out.method = "lp";
    const Vector x = solve_deficient(fam, q, tol);
    out.z = x.head(m);
    const Eigen::Index d = fam.null_basis().cols();
    Matrix omega(d, fam.num_reports());
    for (Eigen::Index k = 0; k < fam.num_reports(); ++k) omega.col(k) = x.segment(m + k * d, d);
    t = fam.base + fam.null_basis() * omega;
    t.colwise() += out.z;
  }
  clamp_nonnegative(t);
  clamp_nonnegative(t_rowmin);

  Contract c = make_contract(fam, std::move(t), true);
  out.kappa = expected_payment(e_p, target, prior, c);
  out.kappa_rowmin = expected_payment(e_p, target, prior, make_contract(fam, t_rowmin, true));

  const Experiment e_a = experiment_from_posteriors(target, prior);
  const Matrix p = fam.pinv.column_projector();
  const double constant = prior.probs().dot(p * fam.nabla * e_a.kernel().transpose() * prior.probs());
  out.kappa_lemma_a2 = constant + q.dot(out.z);

  const double scale = std::max(1.0, c.payments.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < c.payments.rows(); ++i) {
    for (Eigen::Index k = 0; k < c.payments.cols(); ++k) {
      if (c.payments(i, k) <= 1e-10 * scale) out.binding.emplace_back(static_cast<int>(i), static_cast<int>(k));
    }
  }
  out.implementable = true;
  out.agency_rent = out.kappa - out.first_best;
  out.contract = std::move(c);
  out.implementability = fam.report;
  return out;
}

Contract first_best_contract(const Experiment& e_p, const PosteriorDistribution& target,
                             const PosteriorCost& cost, const Tolerances& tol) {
  const ContractFamily fam = synthesize_family(e_p, target, cost, tol);
  const Belief& prior = cost.prior();
  const Vector ones_pre = fam.pinv.pinv * Vector::Ones(e_p.num_states());
  Matrix unit = ones_pre.replicate(1, fam.num_reports());
  const double denom = expected_payment(e_p, target, prior, make_contract(fam, unit, false));
  if (!(std::abs(denom) > 0.5)) {
    throw SolverError("first_best_contract: normalizing denominator vanished");
  }
  const double base_pay = expected_payment(e_p, target, prior, make_contract(fam, fam.base, false));
  const double z = (total_cost(cost, target) - base_pay) / denom;
  return make_contract(fam, fam.base + z * unit, false);
}

BinaryRentProfile binary_rent_profile(const Experiment& e_p) {
  const LikelihoodRatios r = binary_likelihood_ratios(e_p);
  if (r.l1 == r.l2) throw DegenerateExperimentError("binary_rent_profile: experiment is uninformative");
  BinaryRentProfile p;
  p.l1 = r.l1;
  p.l2 = r.l2;
  p.swapped = r.swapped;
  p.spread = r.spread();
  p.reciprocal_spread = r.reciprocal_spread();
  p.du1_r1 = r.l1 / p.spread;
  p.du1_r2 = 1.0 / p.reciprocal_spread;
  p.du2_r1 = 1.0 / p.spread;
  p.du2_r2 = r.l1 / p.spread;
  return p;
}

}  // namespace incentives
