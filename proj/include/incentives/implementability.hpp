#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incentives/costs.hpp"
#include "incentives/experiments.hpp"
#include "incentives/verdict.hpp"

namespace incentives {

enum class ImplementabilityMode { Interior, Corner };

std::string to_string(ImplementabilityMode m);

struct ImplementabilityReport {
  bool implementable = false;
  ImplementabilityMode mode = ImplementabilityMode::Interior;
  /// residuals[k] = ||(I - P)(g_k - g_K)|| with P the projector onto Col E_P,
  /// g the (corner-adjusted) marginal costs. The last entry is 0.
  std::vector<double> residuals;
  /// Tolerance each residual was compared against.
  std::vector<double> thresholds;
  /// FOC multiplier of the base contract, E_P T = grad + lambda 1'.
  std::optional<Vector> lambda;
  /// Corner multipliers, N x K, zero wherever x_k(n) > 0.
  std::optional<Matrix> eta;
  int rank = 0;
  bool full_row_rank = false;
  Matrix nabla;
  std::string reason;
};

/// Interior test. Full row rank of E_P short-circuits to true. Targets with
/// boundary posteriors are dispatched to the corner test.
ImplementabilityReport check_implementable(const Experiment& e_p, const PosteriorDistribution& target,
                                           const PosteriorCost& cost, const Tolerances& tol = {});

/// Corner test: exists eta_k >= 0 vanishing where x_k > 0 with
/// (g_k - eta_k) - (g_K - eta_K) in Col E_P, decided by an LP over eta.
ImplementabilityReport check_implementable_corner(const Experiment& e_p,
                                                  const PosteriorDistribution& target,
                                                  const PosteriorCost& cost,
                                                  const Tolerances& tol = {});

bool check_unique_implementable(const Experiment& e_p, const PosteriorDistribution& target,
                                const PosteriorCost& cost, const Tolerances& tol = {});

/// True iff no column of nabla is weakly dominated by a convex combination
/// of the other (non-identical) columns.
bool check_no_dominance(const MarginalCostMatrix& nabla, const LpOptions& opts = {});

/// Column-space order; decides inclusion of implementable sets.
OrderVerdict compare_implementable_sets(const Experiment& e_p, const Experiment& e_p2,
                                        double rank_tol = Tolerances{}.rank);

}  // namespace incentives
