#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "incentives/experiments.hpp"

namespace incentives {

/// Posterior-separable information cost c, normalized so that c(prior) = 0
/// and mu . grad(mu) = c(mu).
class PosteriorCost {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using MarginalFn = std::function<Vector(const Vector&)>;

  struct Flags {
    bool strictly_convex = false;
    bool infinite_boundary_slope = false;
    bool finite_on_boundary = true;
  };

  PosteriorCost(std::string kind, Belief prior, ValueFn value, MarginalFn marginal, Flags flags);

  const std::string& kind() const { return kind_; }
  const Belief& prior() const { return prior_; }
  const Flags& flags() const { return flags_; }
  bool strictly_convex() const { return flags_.strictly_convex; }
  bool infinite_boundary_slope() const { return flags_.infinite_boundary_slope; }
  bool finite_on_boundary() const { return flags_.finite_on_boundary; }

  /// c(mu); may be +inf.
  double value(const Vector& mu) const;
  double value(const Belief& mu) const { return value(mu.probs()); }
  /// Normalized marginal cost vector; entries may be -inf at the boundary.
  Vector marginal(const Vector& mu) const;
  Vector marginal(const Belief& mu) const { return marginal(mu.probs()); }

  /// Parameters used for serialization; empty for custom costs.
  double scale = 1.0;
  double log_base = std::exp(1.0);

 private:
  std::string kind_;
  Belief prior_;
  ValueFn value_;
  MarginalFn marginal_;
  Flags flags_;
};

/// c(mu) = H(prior) - H(mu), Shannon entropy in the given log base (nats by default).
PosteriorCost entropy_cost(const Belief& prior, double log_base = std::exp(1.0));

/// c(mu) = scale * ||mu - prior||^2.
PosteriorCost quadratic_cost(const Belief& prior, double scale = 1.0);

struct CostValidation {
  int samples = 200;
  std::uint64_t seed = 7;
  double tol = 1e-7;
};

/// Registers a user cost after sampling its normalization, convexity and
/// derivative consistency. Throws AssumptionError on the first failed check.
PosteriorCost custom_cost(std::string kind, const Belief& prior, PosteriorCost::ValueFn value,
                          PosteriorCost::MarginalFn marginal, PosteriorCost::Flags flags,
                          const CostValidation& check = {});

struct MarginalCostMatrix {
  Matrix nabla;  // N x K, column k is grad c(x_k)
  std::vector<Belief> posteriors;
  Vector weights;
};

/// Throws AssumptionError when a posterior sits on the boundary under an
/// infinite-slope cost, or when a marginal entry is not finite.
MarginalCostMatrix marginal_cost_matrix(const PosteriorCost& cost, const PosteriorDistribution& d);

double total_cost(const PosteriorCost& cost, const PosteriorDistribution& d);

}  // namespace incentives
