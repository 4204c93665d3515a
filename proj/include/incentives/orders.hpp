#pragma once

#include "incentives/experiments.hpp"
#include "incentives/verdict.hpp"

namespace incentives {

/// Conic span order: e dominates f iff every column of f is a nonnegative
/// combination of the columns of e.
OrderVerdict cone_compare(const Experiment& e, const Experiment& f, const LpOptions& opts = {});

/// Column space order via rank([E | F]) == rank(E).
OrderVerdict colspace_compare(const Experiment& e, const Experiment& f,
                              double rank_tol = Tolerances{}.rank);

/// Indirect-cost order between two binary-state, binary-realization
/// experiments. e dominates f iff l2 - l1 and 1/l1 - 1/l2 are both at least
/// as large as f's. Other shapes raise UnsupportedError.
OrderVerdict binary_k_compare(const Experiment& e, const Experiment& f);

/// Sufficient test for indirect-cost dominance: cone dominance or equivalence.
bool k_dominance_sufficient(const Experiment& e, const Experiment& f, const LpOptions& opts = {});

}  // namespace incentives

namespace incentives {

/// Likelihood ratios l_m = E(m | w2) / E(m | w1) of a 2 x 2 experiment,
/// ordered so l1 <= l2. A realization with zero probability in both states
/// raises DegenerateExperimentError; other shapes raise UnsupportedError.
struct LikelihoodRatios {
  double l1 = 1.0;
  double l2 = 1.0;
  bool swapped = false;
  double spread() const;             // l2 - l1, +inf allowed
  double reciprocal_spread() const;  // 1/l1 - 1/l2, +inf allowed
};

LikelihoodRatios binary_likelihood_ratios(const Experiment& e);

}  // namespace incentives
