#include <doctest.h>

#include <cmath>

#include "incentives/contracts.hpp"
#include "incentives/error.hpp"
#include "incentives/oracle.hpp"
#include "testing.hpp"

using namespace incentives;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

const Experiment kE1(mat({{0.7, 0.3}, {0.3, 0.7}}));

PosteriorDistribution symmetric_target() {
  return PosteriorDistribution({Belief{0.7, 0.3}, Belief{0.3, 0.7}}, (Vector(2) << 0.5, 0.5).finished());
}

/// phi(mu) = max_k mu . (E_P T)_k - c(mu), evaluated directly.
double phi(const Matrix& ep, const Matrix& t, const PosteriorCost& c, const Vector& mu) {
  return (mu.transpose() * ep * t).maxCoeff() - c.value(mu);
}

struct BinaryInstance {
  Experiment e;
  PosteriorDistribution d;
  Belief prior;
};

BinaryInstance random_binary() {
  Matrix ep;
  do {
    ep = testing::random_stochastic(2, 2, 0.05);
  } while (std::abs(ep(0, 0) - ep(1, 0)) < 0.1);
  const double a = testing::uniform(0.1, 0.45), b = testing::uniform(0.55, 0.9);
  const double w = testing::uniform(0.2, 0.8);
  PosteriorDistribution d({Belief{a, 1 - a}, Belief{b, 1 - b}}, (Vector(2) << w, 1 - w).finished());
  return {Experiment(ep), d, Belief(d.mean())};
}

}  // namespace

TEST_CASE("zero contract: no payment, no learning") {
  for (const Belief& prior : {Belief{0.3, 0.7}, Belief{0.2, 0.3, 0.5}}) {
    const Eigen::Index n = prior.size();
    const Experiment e(testing::random_stochastic(n, 2, 0.05));
    const Contract t{Matrix::Zero(2, 1), true, {}, {}};
    const OracleResult o = agent_best_response(e, t, entropy_cost(prior), prior);
    CHECK(std::abs(o.optimal_value) < 1e-12);
    REQUIRE(o.support.size() >= 1);
    double w_prior = 0.0;
    for (std::size_t i = 0; i < o.support.size(); ++i)
      if ((o.support[i].probs() - prior.probs()).norm() < 1e-12) w_prior += o.weights(static_cast<Eigen::Index>(i));
    CHECK(w_prior == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::isnan(o.target_value));
    CHECK(o.resolution == GridSpec::default_resolution(n));
  }
}

TEST_CASE("default grids") {
  CHECK(GridSpec::default_resolution(2) == 2001);
  CHECK(GridSpec::default_resolution(3) == 201);
}

TEST_CASE("first-best contract leaves the agent nothing") {
  const Belief prior = Belief::uniform(2);
  const PosteriorCost c = entropy_cost(prior);
  const PosteriorDistribution d = symmetric_target();
  const Contract fb = first_best_contract(kE1, d, c);
  const OracleResult o = agent_best_response(kE1, fb, c, prior, {}, &d);
  CHECK(std::abs(o.optimal_value) < 1e-6);
  CHECK(o.gap < 1e-6);
  CHECK(o.gap >= -1e-9);
}

TEST_CASE("optimal contract puts the target in the optimal support") {
  const Belief prior = Belief::uniform(2);
  const PosteriorCost c = entropy_cost(prior);
  const PosteriorDistribution d = symmetric_target();
  const CostReport r = optimal_contract(kE1, d, c);
  const OracleResult o = agent_best_response(kE1, *r.contract, c, prior, {}, &d);
  CHECK(o.gap < 1e-6);
  CHECK(o.target_in_support);
  // Bayes plausibility of the returned support
  Vector mean = Vector::Zero(2);
  for (std::size_t i = 0; i < o.support.size(); ++i) mean += o.weights(static_cast<Eigen::Index>(i)) * o.support[i].probs();
  CHECK((mean - prior.probs()).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(o.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verify_contract(kE1, d, c, *r.contract));
}

TEST_CASE("zero contract cannot implement an informative target") {
  const Belief prior = Belief::uniform(2);
  const PosteriorDistribution d = symmetric_target();
  CHECK_FALSE(verify_contract(kE1, d, entropy_cost(prior), Contract{Matrix::Zero(2, 2), true, {}, {}}));
}

TEST_CASE("a tilted binding cell breaks optimality") {
  const Belief prior = Belief::uniform(2);
  const PosteriorCost c = entropy_cost(prior);
  const PosteriorDistribution d = symmetric_target();
  const CostReport r = optimal_contract(kE1, d, c);
  REQUIRE_FALSE(r.binding.empty());
  Contract bumped = *r.contract;
  bumped.payments(r.binding[0].first, r.binding[0].second) += 0.1;
  const OracleResult o = agent_best_response(kE1, bumped, c, prior, {}, &d);
  CHECK(o.gap > kOracleTolerance);
  CHECK_FALSE(verify_contract(kE1, d, c, bumped));
}

TEST_CASE("random family members are verified") {
  for (int t = 0; t < 20; ++t) {
    const BinaryInstance inst = random_binary();
    const PosteriorCost c = entropy_cost(inst.prior);
    const ContractFamily fam = synthesize_family(inst.e, inst.d, c);
    const Vector z = testing::random_matrix(2, 1, -2, 2).col(0);
    const Contract m = fam.member_from_coordinates(z, Matrix(0, 2));
    CHECK(verify_contract(inst.e, inst.d, c, m));
  }
  // three states, wide kernel with a nontrivial W
  for (int t = 0; t < 5; ++t) {
    const Belief prior(testing::random_simplex(3, 0.1));
    const Experiment e(testing::random_stochastic(3, 4, 0.05));
    const PosteriorDistribution d = posteriors(Experiment(testing::random_stochastic(3, 2, 0.1)), prior);
    const PosteriorCost c = entropy_cost(prior);
    const ContractFamily fam = synthesize_family(e, d, c);
    const Contract m = fam.member_from_coordinates(testing::random_matrix(4, 1, -1, 1).col(0),
                                                   testing::random_matrix(fam.null_basis().cols(), 2, -1, 1));
    CHECK(verify_contract(e, d, c, m));
  }
}

TEST_CASE("optimum is the concave envelope at the prior") {
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = t % 2 == 0 ? 2 : 3;
    const Belief prior(testing::random_simplex(n, 0.1));
    const Matrix ep = testing::random_stochastic(n, 3, 0.05);
    const Matrix pay = testing::random_matrix(3, 3, 0.0, 1.0);
    const PosteriorCost c = t % 4 < 2 ? entropy_cost(prior) : quadratic_cost(prior, 2.0);
    GridSpec g;
    g.resolution = n == 2 ? 1001 : 101;
    const OracleResult o = agent_best_response(Experiment(ep), Contract{pay, true, {}, {}}, c, prior, g);
    CHECK(o.optimal_value >= phi(ep, pay, c, prior.probs()) - 1e-12);
    // value of the reported support equals the optimum
    double v = 0.0;
    for (std::size_t i = 0; i < o.support.size(); ++i)
      v += o.weights(static_cast<Eigen::Index>(i)) * phi(ep, pay, c, o.support[i].probs());
    CHECK(v == doctest::Approx(o.optimal_value).epsilon(1e-9));
    // reported best reports are maximizers
    for (std::size_t i = 0; i < o.support.size(); ++i) {
      const Vector u = (o.support[i].probs().transpose() * ep * pay).transpose();
      CHECK(u(o.reports[i]) == doctest::Approx(u.maxCoeff()).epsilon(1e-12));
    }
  }
}

TEST_CASE("entropy keeps the support off the boundary") {
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = t % 2 == 0 ? 2 : 3;
    const Belief prior(testing::random_simplex(n, 0.1));
    const Matrix ep = testing::random_stochastic(n, 2, 0.05);
    const Matrix pay = testing::random_matrix(2, 3, 0.0, 3.0);
    const OracleResult o = agent_best_response(Experiment(ep), Contract{pay, true, {}, {}}, entropy_cost(prior), prior);
    for (const Belief& b : o.support) CHECK(b.probs().minCoeff() > 0.0);
  }
}

TEST_CASE("a report-independent bonus shifts the value and keeps the support") {
  for (int t = 0; t < 20; ++t) {
    const Eigen::Index n = t % 2 == 0 ? 2 : 3;
    const Belief prior(testing::random_simplex(n, 0.1));
    const Matrix ep = testing::random_stochastic(n, 3, 0.05);
    const Matrix pay = testing::random_matrix(3, 2, 0.0, 2.0);
    const Vector z = testing::random_matrix(3, 1, 0.0, 1.0).col(0);
    const PosteriorCost c = entropy_cost(prior);
    const OracleResult a = agent_best_response(Experiment(ep), Contract{pay, true, {}, {}}, c, prior);
    const Matrix shifted = pay.colwise() + z;
    const OracleResult b = agent_best_response(Experiment(ep), Contract{shifted, true, {}, {}}, c, prior);
    CHECK(b.optimal_value - a.optimal_value == doctest::Approx(prior.probs().dot(ep * z)).epsilon(1e-9));
    REQUIRE(a.support.size() == b.support.size());
    for (std::size_t i = 0; i < a.support.size(); ++i) {
      double closest = 1.0;
      for (const Belief& s : b.support) closest = std::min(closest, (s.probs() - a.support[i].probs()).cwiseAbs().maxCoeff());
      CHECK(closest < 1e-9);
    }
  }
}

TEST_CASE("grid refinement") {
  for (int t = 0; t < 20; ++t) {
    const BinaryInstance inst = random_binary();
    const PosteriorCost c = entropy_cost(inst.prior);
    GridSpec coarse, fine;
    coarse.resolution = 501;
    fine.resolution = 1001;
    // nested grids: the finer value can only improve, and by little
    const Matrix pay = testing::random_matrix(2, 2, 0.0, 2.0);
    const Contract arbitrary{pay, true, {}, {}};
    const double vc = agent_best_response(inst.e, arbitrary, c, inst.prior, coarse).optimal_value;
    const double vf = agent_best_response(inst.e, arbitrary, c, inst.prior, fine).optimal_value;
    CHECK(vf >= vc - 1e-12);
    CHECK(vf - vc < 1e-4);

    // implementing contract: the change is within the coarse gap estimate
    const CostReport r = optimal_contract(inst.e, inst.d, c);
    const OracleResult oc = agent_best_response(inst.e, *r.contract, c, inst.prior, coarse, &inst.d);
    const OracleResult of = agent_best_response(inst.e, *r.contract, c, inst.prior, fine, &inst.d);
    CHECK(std::abs(of.optimal_value - oc.optimal_value) <= std::max(oc.gap, 0.0) + 1e-9);
  }
}

TEST_CASE("augmented grid points are used") {
  const Belief prior = Belief::uniform(2);
  GridSpec g;
  g.resolution = 101;
  g.augment.push_back((Vector(2) << 0.123456, 0.876544).finished());
  const Contract t{Matrix::Zero(2, 1), true, {}, {}};
  const OracleResult o = agent_best_response(kE1, t, entropy_cost(prior), prior, g);
  CHECK(o.grid_points >= 103);
}

TEST_CASE("input checks") {
  const Belief prior = Belief::uniform(2);
  const PosteriorCost c = entropy_cost(prior);
  const Contract t{Matrix::Zero(2, 2), true, {}, {}};
  GridSpec small;
  small.resolution = 50;
  CHECK_THROWS_AS(agent_best_response(kE1, t, c, prior, small), InputError);
  const Belief p4 = Belief::uniform(4);
  CHECK_THROWS_AS(agent_best_response(Experiment(Matrix::Identity(4, 4)), Contract{Matrix::Zero(4, 1), true, {}, {}},
                                      entropy_cost(p4), p4),
                  UnsupportedError);
  CHECK_THROWS_AS(agent_best_response(kE1, Contract{Matrix::Zero(3, 2), true, {}, {}}, c, prior), InputError);
}
