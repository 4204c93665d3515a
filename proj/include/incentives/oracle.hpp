#pragma once

#include <vector>

#include "incentives/contracts.hpp"
#include "incentives/costs.hpp"
#include "incentives/experiments.hpp"

namespace incentives {

/// Uniform simplex grid. `resolution` counts points per edge, so the
/// barycentric step is 1/(resolution - 1). Zero selects the default for N.
struct GridSpec {
  int resolution = 0;
  std::vector<Vector> augment;

  static int default_resolution(Eigen::Index num_states);
};

struct OracleResult {
  double optimal_value = 0.0;
  std::vector<Belief> support;
  Vector weights;
  /// Best report at each support point (first maximizer).
  std::vector<int> reports;
  /// Net value of following the target; NaN when no target was given.
  double target_value = 0.0;
  double gap = 0.0;
  bool target_in_support = false;
  int resolution = 0;
  int grid_points = 0;
};

/// Concavification of phi(mu) = max_k mu . (E_P T)_k - c(mu) over a simplex
/// grid by LP. Supports N = 2 and N = 3. The grid always contains the prior
/// and, when `target` is given, the target posteriors.
OracleResult agent_best_response(const Experiment& e_p, const Contract& t, const PosteriorCost& cost,
                                 const Belief& prior, const GridSpec& grid = {},
                                 const PosteriorDistribution* target = nullptr);

inline constexpr double kOracleTolerance = 1e-5;

/// True iff the target is a best response to t up to `tol`.
bool verify_contract(const Experiment& e_p, const PosteriorDistribution& target, const PosteriorCost& cost,
                     const Contract& t, double tol = kOracleTolerance, const GridSpec& grid = {});

}  // namespace incentives
