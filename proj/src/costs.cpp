#include "incentives/costs.hpp"

#include <limits>
#include <random>

#include "incentives/error.hpp"

namespace incentives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double entropy(const Vector& mu) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > 0.0) h -= mu(i) * std::log(mu(i));
  }
  return h;
}

void check_dimension(const Belief& prior, const Vector& mu) {
  if (mu.size() != prior.size()) throw InputError("cost: belief dimension mismatch");
}

Vector random_interior(std::mt19937_64& rng, Eigen::Index n) {
  std::exponential_distribution<double> exp1(1.0);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = exp1(rng) + 1e-3;
  return v / v.sum();
}

}  // namespace

PosteriorCost::PosteriorCost(std::string kind, Belief prior, ValueFn value, MarginalFn marginal,
                             Flags flags)
    : kind_(std::move(kind)),
      prior_(std::move(prior)),
      value_(std::move(value)),
      marginal_(std::move(marginal)),
      flags_(flags) {
  if (!value_ || !marginal_) throw InputError("cost: value and marginal maps are required");
  if (!prior_.is_interior()) throw InputError("cost: prior must be interior");
}

double PosteriorCost::value(const Vector& mu) const {
  check_dimension(prior_, mu);
  return value_(mu);
}

Vector PosteriorCost::marginal(const Vector& mu) const {
  check_dimension(prior_, mu);
  Vector g = marginal_(mu);
  if (g.size() != mu.size()) throw InputError("cost: marginal map returned wrong dimension");
  return g;
}

PosteriorCost entropy_cost(const Belief& prior, double log_base) {
  if (!prior.is_interior()) throw InputError("entropy_cost: prior must be interior");
  if (!(log_base > 0.0) || log_base == 1.0 || !std::isfinite(log_base)) {
    throw InputError("entropy_cost: log base must be positive and different from 1");
  }
  const double unit = std::log(log_base);
  const double h0 = entropy(prior.probs());
  auto value = [h0, unit](const Vector& mu) { return (h0 - entropy(mu)) / unit; };
  auto marginal = [h0, unit](const Vector& mu) {
    Vector g(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      g(i) = mu(i) > 0.0 ? (std::log(mu(i)) + h0) / unit : -kInf;
    }
    return g;
  };
  PosteriorCost c("entropy", prior, value, marginal, {true, true, true});
  c.log_base = log_base;
  return c;
}

PosteriorCost quadratic_cost(const Belief& prior, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("quadratic_cost: scale must be positive");
  const Vector p = prior.probs();
  auto value = [p, scale](const Vector& mu) { return scale * (mu - p).squaredNorm(); };
  auto marginal = [p, scale](const Vector& mu) {
    const Vector g = 2.0 * scale * (mu - p);
    const double c = scale * (mu - p).squaredNorm();
    return Vector(g.array() + (c - mu.dot(g)));
  };
  PosteriorCost c("quadratic", prior, value, marginal, {true, false, true});
  c.scale = scale;
  return c;
}

PosteriorCost custom_cost(std::string kind, const Belief& prior, PosteriorCost::ValueFn value,
                          PosteriorCost::MarginalFn marginal, PosteriorCost::Flags flags,
                          const CostValidation& check) {
  PosteriorCost cost(std::move(kind), prior, std::move(value), std::move(marginal), flags);
  const Eigen::Index n = prior.size();
  const double tol = check.tol;
  if (std::abs(cost.value(prior)) > tol) throw AssumptionError("custom cost: c(prior) != 0");

  std::mt19937_64 rng(check.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < check.samples; ++s) {
    const Vector mu = random_interior(rng, n);
    const Vector nu = random_interior(rng, n);
    const double cm = cost.value(mu);
    const double cn = cost.value(nu);
    const Vector g = cost.marginal(mu);
    if (!std::isfinite(cm) || !g.allFinite()) {
      throw AssumptionError("custom cost: not finite at an interior belief");
    }
    if (std::abs(mu.dot(g) - cm) > tol * std::max(1.0, std::abs(cm))) {
      throw AssumptionError("custom cost: marginal map is not normalized (mu . grad != c)");
    }
    const double a = unit(rng);
    const double mix = cost.value(a * mu + (1.0 - a) * nu);
    if (mix > a * cm + (1.0 - a) * cn + tol * std::max(1.0, std::abs(cm) + std::abs(cn))) {
      throw AssumptionError("custom cost: convexity fails on a sampled segment");
    }
    const double h = 1e-6;
    const double fd = (cost.value(mu + h * (nu - mu)) - cost.value(mu - h * (nu - mu))) / (2.0 * h);
    const double dd = (nu - mu).dot(g);
    if (std::abs(fd - dd) > 1e-4 * std::max(1.0, std::abs(dd))) {
      throw AssumptionError("custom cost: marginal map disagrees with directional derivatives");
    }
  }
  return cost;
}

MarginalCostMatrix marginal_cost_matrix(const PosteriorCost& cost, const PosteriorDistribution& d) {
  if (d.num_states() != cost.prior().size()) throw InputError("marginal_cost_matrix: dimension mismatch");
  MarginalCostMatrix out;
  out.posteriors = d.support;
  out.weights = d.weights;
  out.nabla.resize(d.num_states(), static_cast<Eigen::Index>(d.size()));
  for (std::size_t k = 0; k < d.size(); ++k) {
    const Belief& x = d.support[k];
    if (cost.infinite_boundary_slope() && !x.is_interior()) {
      throw AssumptionError(
          "marginal_cost_matrix: boundary posterior under a cost with infinite boundary slope; "
          "such posteriors are never optimal for the agent");
    }
    Vector g = cost.marginal(x);
    if (!g.allFinite()) throw AssumptionError("marginal_cost_matrix: marginal cost is not finite");
    out.nabla.col(static_cast<Eigen::Index>(k)) = g;
  }
  return out;
}

double total_cost(const PosteriorCost& cost, const PosteriorDistribution& d) {
  double total = 0.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const double w = d.weights(static_cast<Eigen::Index>(k));
    if (w == 0.0) continue;
    const double c = cost.value(d.support[k]);
    if (std::isinf(c) && c > 0) return kInf;
    total += w * c;
  }
  return total;
}

}  // namespace incentives
