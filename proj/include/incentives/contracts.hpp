#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "incentives/costs.hpp"
#include "incentives/error.hpp"
#include "incentives/experiments.hpp"
#include "incentives/implementability.hpp"

namespace incentives {

/// M x K payments, row = realization of E_P, column = agent report.
struct Contract {
  Matrix payments;
  bool limited_liability = true;
  std::vector<std::string> realizations;
  std::vector<std::string> reports;
};

/// All contracts implementing a target: T_k = base_k + Z + W_k with E_P W_k = 0.
struct ContractFamily {
  Matrix base;        // E_P^+ g, M x K
  PseudoInverse pinv;
  Matrix nabla;       // corner-adjusted marginal costs used for the base
  Vector lambda0;     // FOC multiplier of the base itself
  ImplementabilityReport report;
  std::vector<std::string> realizations;
  std::vector<std::string> reports;

  Eigen::Index num_realizations() const { return base.rows(); }
  Eigen::Index num_reports() const { return base.cols(); }
  /// Orthonormal basis of ker E_P; every W column is a combination of these.
  const Matrix& null_basis() const { return pinv.null_basis; }

  /// Throws InputError if E_P w != 0 for some column of w.
  Contract member(const Vector& z, const Matrix& w) const;
  /// Member with W = null_basis() * omega.
  Contract member_from_coordinates(const Vector& z, const Matrix& omega) const;
  /// lambda = lambda0 + E_P z.
  Vector lambda(const Vector& z) const;
};

struct CostReport {
  bool implementable = false;
  /// Minimum expected payment; +inf when not implementable.
  double kappa = 0.0;
  /// Total information cost of the target.
  double first_best = 0.0;
  double agency_rent = 0.0;
  std::optional<Contract> contract;
  /// Cells (m, k) of the optimal contract that pay zero.
  std::vector<std::pair<int, int>> binding;
  /// "rowmin" for square invertible E_P, "lp" otherwise.
  std::string method;
  /// Payment of the contract Z = -rowmin(base); an upper bound on kappa.
  double kappa_rowmin = 0.0;
  /// Lemma-style constant mu0' P grad E_A' mu0 plus mu0' E_P Z*.
  double kappa_lemma_a2 = 0.0;
  Vector z;
  ImplementabilityReport implementability;
};

struct BinaryRentProfile {
  double l1 = 0.0;
  double l2 = 0.0;
  /// True when the realization columns were swapped to get l1 <= 1 <= l2.
  bool swapped = false;
  double spread = 0.0;             // l2 - l1
  double reciprocal_spread = 0.0;  // 1/l1 - 1/l2
  /// Units of (r1, r2) needed per unit of du1 and du2.
  double du1_r1 = 0.0, du1_r2 = 0.0;
  double du2_r1 = 0.0, du2_r2 = 0.0;
};

/// Raised by synthesis when the target is not implementable.
class TargetNotImplementable : public NotImplementableError {
 public:
  explicit TargetNotImplementable(ImplementabilityReport r);
  const ImplementabilityReport& report() const { return report_; }

 private:
  ImplementabilityReport report_;
};

/// Throws TargetNotImplementable when the target cannot be implemented.
ContractFamily synthesize_family(const Experiment& e_p, const PosteriorDistribution& target,
                                 const PosteriorCost& cost, const Tolerances& tol = {});

/// Cost-minimizing contract under limited liability. Not implementable
/// targets yield kappa = +inf and no contract.
CostReport optimal_contract(const Experiment& e_p, const PosteriorDistribution& target,
                            const PosteriorCost& cost, const Tolerances& tol = {});

/// Benchmark without limited liability: expected payment equals the total cost.
Contract first_best_contract(const Experiment& e_p, const PosteriorDistribution& target,
                             const PosteriorCost& cost, const Tolerances& tol = {});

struct PaymentBreakdown {
  double joint = 0.0;   // sum_k w_k x_k' E_P T_k
  double kernel = 0.0;  // sum_{n,k} prior_n E_A(k|n) (E_P T)_{nk}
};

PaymentBreakdown expected_payment_breakdown(const Experiment& e_p, const PosteriorDistribution& target,
                                            const Belief& prior, const Contract& t);

/// Expected payment of t when the agent follows the target.
double expected_payment(const Experiment& e_p, const PosteriorDistribution& target, const Belief& prior,
                        const Contract& t);

/// max_k ||(E_P T - g)_k - (E_P T - g)_0||_inf; zero iff T satisfies the FOC for g.
double foc_deviation(const Experiment& e_p, const Matrix& payments, const Matrix& nabla);

BinaryRentProfile binary_rent_profile(const Experiment& e_p);

}  // namespace incentives
