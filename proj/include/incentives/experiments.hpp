#pragma once

#include <string>
#include <vector>

#include "incentives/numerics.hpp"
#include "incentives/verdict.hpp"

namespace incentives {

inline constexpr double kSumTolerance = 1e-12;
inline constexpr double kInteriorThreshold = 1e-9;
inline constexpr double kPlausibilityTolerance = 1e-9;

/// A probability vector over N states.
class Belief {
 public:
  Belief() = default;
  /// Throws InputError unless entries are >= 0 and sum to 1 within 1e-12.
  explicit Belief(Vector probs);
  Belief(std::initializer_list<double> probs);

  static Belief uniform(Eigen::Index n);

  const Vector& probs() const { return probs_; }
  Eigen::Index size() const { return probs_.size(); }
  double operator()(Eigen::Index i) const { return probs_(i); }
  bool is_interior(double threshold = kInteriorThreshold) const;

 private:
  Vector probs_;
};

/// Row-stochastic N x M kernel E(x | omega).
class Experiment {
 public:
  Experiment() = default;
  explicit Experiment(Matrix kernel);
  Experiment(Matrix kernel, std::vector<std::string> states,
             std::vector<std::string> realizations);

  const Matrix& kernel() const { return kernel_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::vector<std::string>& realizations() const { return realizations_; }
  Eigen::Index num_states() const { return kernel_.rows(); }
  Eigen::Index num_realizations() const { return kernel_.cols(); }

 private:
  Matrix kernel_;
  std::vector<std::string> states_;
  std::vector<std::string> realizations_;
};

/// Finite distribution over posteriors.
struct PosteriorDistribution {
  std::vector<Belief> support;
  Vector weights;
  std::vector<std::string> labels;
  /// Realizations that were dropped because they have zero probability.
  std::vector<std::string> dropped;

  PosteriorDistribution() = default;
  /// Validates matching sizes, weights >= 0 and summing to 1.
  PosteriorDistribution(std::vector<Belief> support, Vector weights,
                        std::vector<std::string> labels = {});

  std::size_t size() const { return support.size(); }
  Eigen::Index num_states() const { return support.empty() ? 0 : support.front().size(); }
  /// N x K matrix whose columns are the posteriors.
  Matrix matrix() const;
  Vector mean() const;
  bool all_interior(double threshold = kInteriorThreshold) const;
};

/// Weights for the given posteriors that average back to the prior. Throws
/// InputError when no such weights exist or they are not unique.
Vector bayes_weights(const std::vector<Belief>& posteriors, const Belief& prior);

PosteriorDistribution posteriors(const Experiment& e, const Belief& prior);

bool is_bayes_plausible(const PosteriorDistribution& d, const Belief& prior,
                        double tol = kPlausibilityTolerance);

/// Kernel E(x_k | omega_n) = w_k x_k(n) / prior(n), rows renormalized.
Experiment experiment_from_posteriors(const PosteriorDistribution& d, const Belief& prior);

bool has_full_row_rank(const Experiment& e, double rank_tol = Tolerances{}.rank);

bool has_uniform_random_noise(const Experiment& e);

/// Garbling order: e dominates f iff f = e G for a row-stochastic G.
OrderVerdict blackwell_compare(const Experiment& e, const Experiment& f,
                               const LpOptions& opts = {});

}  // namespace incentives
