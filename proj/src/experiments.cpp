#include "incentives/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "incentives/error.hpp"

namespace incentives {

namespace {

std::vector<std::string> default_labels(const char* prefix, Eigen::Index n) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i + 1));
  return out;
}

void check_same_states(const Experiment& e, const Experiment& f, const char* what) {
  if (e.num_states() != f.num_states()) {
    throw InputError(std::string(what) + ": experiments have different state spaces");
  }
}

// Feasibility of G >= 0, G 1 = 1, e G = f. Returns G when feasible.
std::optional<Matrix> find_garbling(const Matrix& e, const Matrix& f, const LpOptions& opts) {
  const Eigen::Index n = e.rows();
  const Eigen::Index me = e.cols();
  const Eigen::Index mf = f.cols();
  LpProblem lp(me * mf);
  auto idx = [mf](Eigen::Index i, Eigen::Index j) { return i * mf + j; };
  for (Eigen::Index i = 0; i < me; ++i) {
    Vector row = Vector::Zero(me * mf);
    for (Eigen::Index j = 0; j < mf; ++j) row(idx(i, j)) = 1.0;
    lp.add_eq(row, 1.0);
  }
  for (Eigen::Index s = 0; s < n; ++s) {
    for (Eigen::Index j = 0; j < mf; ++j) {
      Vector row = Vector::Zero(me * mf);
      for (Eigen::Index i = 0; i < me; ++i) row(idx(i, j)) = e(s, i);
      lp.add_eq(row, f(s, j));
    }
  }
  const LpSolution sol = solve_lp(lp, opts);
  if (sol.status == LpStatus::SolverFailure) throw SolverError("blackwell_compare: " + sol.message);
  if (!sol.optimal()) return std::nullopt;
  Matrix g(me, mf);
  for (Eigen::Index i = 0; i < me; ++i) {
    for (Eigen::Index j = 0; j < mf; ++j) g(i, j) = std::max(0.0, sol.x(idx(i, j)));
  }
  return g;
}

}  // namespace

Belief::Belief(Vector probs) : probs_(std::move(probs)) {
  if (probs_.size() == 0) throw InputError("belief: empty probability vector");
  if (!probs_.allFinite()) throw InputError("belief: non-finite entry");
  if (probs_.minCoeff() < 0.0) throw InputError("belief: negative probability");
  if (std::abs(probs_.sum() - 1.0) > kSumTolerance) {
    throw InputError("belief: probabilities sum to " + std::to_string(probs_.sum()));
  }
}

Belief::Belief(std::initializer_list<double> probs)
    : Belief(Vector(Eigen::Map<const Vector>(probs.begin(), static_cast<Eigen::Index>(probs.size())))) {}

Belief Belief::uniform(Eigen::Index n) {
  if (n <= 0) throw InputError("belief: need at least one state");
  return Belief(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

bool Belief::is_interior(double threshold) const { return probs_.minCoeff() >= threshold; }

Experiment::Experiment(Matrix kernel)
    : Experiment(kernel, default_labels("w", kernel.rows()), default_labels("y", kernel.cols())) {}

Experiment::Experiment(Matrix kernel, std::vector<std::string> states,
                       std::vector<std::string> realizations)
    : kernel_(std::move(kernel)), states_(std::move(states)), realizations_(std::move(realizations)) {
  require_finite(kernel_, "experiment");
  if (static_cast<Eigen::Index>(states_.size()) != kernel_.rows() ||
      static_cast<Eigen::Index>(realizations_.size()) != kernel_.cols()) {
    throw InputError("experiment: label count does not match kernel shape");
  }
  if (kernel_.minCoeff() < 0.0) throw InputError("experiment: negative conditional probability");
  for (Eigen::Index n = 0; n < kernel_.rows(); ++n) {
    const double s = kernel_.row(n).sum();
    if (std::abs(s - 1.0) > kSumTolerance) {
      throw InputError("experiment: row " + std::to_string(n) + " sums to " + std::to_string(s));
    }
  }
}

PosteriorDistribution::PosteriorDistribution(std::vector<Belief> support_, Vector weights_,
                                             std::vector<std::string> labels_)
    : support(std::move(support_)), weights(std::move(weights_)), labels(std::move(labels_)) {
  if (support.empty()) throw InputError("posterior distribution: empty support");
  if (static_cast<Eigen::Index>(support.size()) != weights.size()) {
    throw InputError("posterior distribution: support and weights differ in length");
  }
  for (const Belief& b : support) {
    if (b.size() != support.front().size()) {
      throw InputError("posterior distribution: beliefs of different dimension");
    }
  }
  if (!weights.allFinite() || weights.minCoeff() < 0.0) {
    throw InputError("posterior distribution: weights must be finite and nonnegative");
  }
  if (std::abs(weights.sum() - 1.0) > kPlausibilityTolerance) {
    throw InputError("posterior distribution: weights sum to " + std::to_string(weights.sum()));
  }
  if (labels.empty()) labels = default_labels("x", weights.size());
  if (labels.size() != support.size()) {
    throw InputError("posterior distribution: label count does not match support");
  }
}

Matrix PosteriorDistribution::matrix() const {
  Matrix x(num_states(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t k = 0; k < support.size(); ++k) x.col(static_cast<Eigen::Index>(k)) = support[k].probs();
  return x;
}

Vector PosteriorDistribution::mean() const { return matrix() * weights; }

bool PosteriorDistribution::all_interior(double threshold) const {
  for (const Belief& b : support) {
    if (!b.is_interior(threshold)) return false;
  }
  return true;
}

Vector bayes_weights(const std::vector<Belief>& posteriors, const Belief& prior) {
  if (posteriors.empty()) throw InputError("bayes_weights: no posteriors");
  const Eigen::Index n = prior.size();
  const Eigen::Index k = static_cast<Eigen::Index>(posteriors.size());
  Matrix a(n + 1, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (posteriors[static_cast<std::size_t>(j)].size() != n) {
      throw InputError("bayes_weights: posterior dimension differs from prior");
    }
    a.block(0, j, n, 1) = posteriors[static_cast<std::size_t>(j)].probs();
    a(n, j) = 1.0;
  }
  Vector rhs(n + 1);
  rhs << prior.probs(), 1.0;
  if (numerical_rank(a) < k) {
    throw InputError("bayes_weights: posteriors are affinely dependent, weights are not unique");
  }
  Vector w = a.colPivHouseholderQr().solve(rhs);
  if ((a * w - rhs).cwiseAbs().maxCoeff() > kPlausibilityTolerance || w.minCoeff() < -kSumTolerance) {
    throw InputError("bayes_weights: the prior is not in the convex hull of the posteriors");
  }
  w = w.cwiseMax(0.0);
  return w / w.sum();
}

PosteriorDistribution posteriors(const Experiment& e, const Belief& prior) {
  if (prior.size() != e.num_states()) throw InputError("posteriors: prior dimension mismatch");
  if (!prior.is_interior()) throw InputError("posteriors: prior must be interior");
  std::vector<Belief> support;
  std::vector<double> weights;
  std::vector<std::string> labels;
  std::vector<std::string> dropped;
  for (Eigen::Index m = 0; m < e.num_realizations(); ++m) {
    const Vector joint = prior.probs().cwiseProduct(e.kernel().col(m));
    const double p = joint.sum();
    const std::string& label = e.realizations()[static_cast<std::size_t>(m)];
    if (!(p > 0.0)) {
      dropped.push_back(label);
      continue;
    }
    Vector post = joint / p;
    post /= post.sum();
    support.emplace_back(std::move(post));
    weights.push_back(p);
    labels.push_back(label);
  }
  Vector w = Eigen::Map<Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  w /= w.sum();
  PosteriorDistribution d(std::move(support), std::move(w), std::move(labels));
  d.dropped = std::move(dropped);
  return d;
}

bool is_bayes_plausible(const PosteriorDistribution& d, const Belief& prior, double tol) {
  if (d.support.empty() || d.num_states() != prior.size()) return false;
  if (d.weights.minCoeff() < 0.0 || std::abs(d.weights.sum() - 1.0) > tol) return false;
  return (d.mean() - prior.probs()).cwiseAbs().maxCoeff() <= tol;
}

Experiment experiment_from_posteriors(const PosteriorDistribution& d, const Belief& prior) {
  if (!prior.is_interior()) throw InputError("experiment_from_posteriors: prior must be interior");
  if (!is_bayes_plausible(d, prior)) {
    throw InputError("experiment_from_posteriors: distribution is not Bayes plausible");
  }
  const Eigen::Index n = prior.size();
  const Eigen::Index k = static_cast<Eigen::Index>(d.size());
  Matrix kernel(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    kernel.col(j) = d.weights(j) * d.support[static_cast<std::size_t>(j)].probs().cwiseQuotient(prior.probs());
  }
  for (Eigen::Index i = 0; i < n; ++i) kernel.row(i) /= kernel.row(i).sum();
  std::vector<std::string> states;
  for (Eigen::Index i = 0; i < n; ++i) states.push_back("w" + std::to_string(i + 1));
  return Experiment(std::move(kernel), std::move(states), d.labels);
}

bool has_full_row_rank(const Experiment& e, double rank_tol) {
  return numerical_rank(e.kernel(), rank_tol) == e.num_states();
}

bool has_uniform_random_noise(const Experiment& e) {
  const Matrix& k = e.kernel();
  std::vector<Eigen::Index> argmax;
  for (Eigen::Index n = 0; n < k.rows(); ++n) {
    Eigen::Index best = 0;
    for (Eigen::Index m = 1; m < k.cols(); ++m) {
      if (k(n, m) > k(n, best)) best = m;
    }
    double other = -1.0;
    for (Eigen::Index m = 0; m < k.cols(); ++m) {
      if (m == best) continue;
      if (k(n, m) >= k(n, best) - kSumTolerance) return false;  // max not strict
      if (other < 0.0) {
        other = k(n, m);
      } else if (std::abs(k(n, m) - other) > kSumTolerance) {
        return false;
      }
    }
    if (std::find(argmax.begin(), argmax.end(), best) != argmax.end()) return false;
    argmax.push_back(best);
  }
  return true;
}

OrderVerdict blackwell_compare(const Experiment& e, const Experiment& f, const LpOptions& opts) {
  check_same_states(e, f, "blackwell_compare");
  OrderVerdict v;
  v.certificate.kind = "garbling";
  v.certificate.forward = find_garbling(e.kernel(), f.kernel(), opts);
  v.certificate.backward = find_garbling(f.kernel(), e.kernel(), opts);
  v.relation = combine(v.certificate.forward.has_value(), v.certificate.backward.has_value());
  v.strict = v.relation == Relation::Dominates || v.relation == Relation::DominatedBy;
  return v;
}

}  // namespace incentives
