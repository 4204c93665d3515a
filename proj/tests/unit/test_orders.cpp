#include <doctest.h>

#include <cmath>
#include <limits>

#include "incentives/contracts.hpp"
#include "incentives/error.hpp"
#include "incentives/orders.hpp"
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
const Experiment kE2(mat({{0.5, 0.5}, {0.2, 0.8}}));
const Experiment kA1(mat({{3.0 / 8, 5.0 / 8}, {3.0 / 8, 5.0 / 8}, {3.0 / 4, 1.0 / 4}}));
const Experiment kA2(mat({{3.0 / 4, 1.0 / 4}, {1.0 / 4, 3.0 / 4}, {1.0 / 2, 1.0 / 2}}));

Matrix binary_kernel() {
  const double p = testing::uniform(0.02, 0.98), q = testing::uniform(0.02, 0.98);
  return mat({{p, 1 - p}, {q, 1 - q}});
}

}  // namespace

TEST_CASE("cone order examples") {
  const OrderVerdict a = cone_compare(kE1, kE2);
  CHECK(a.relation == Relation::Incomparable);
  CHECK(a.certificate.kind == "cone");
  CHECK(a.verify(kE1.kernel(), kE2.kernel()));

  const Experiment id(Matrix::Identity(3, 3));
  const OrderVerdict b = cone_compare(id, kA1);
  CHECK(b.relation == Relation::Dominates);
  CHECK(b.strict);
  REQUIRE(b.certificate.forward);
  CHECK((*b.certificate.forward - kA1.kernel()).cwiseAbs().maxCoeff() < 1e-9);

  CHECK(cone_compare(kE1, kE1).relation == Relation::Equivalent);
  CHECK(cone_compare(kE2, kE1).relation == Relation::Incomparable);
}

TEST_CASE("cone order against an explicit garbling") {
  for (int t = 0; t < 50; ++t) {
    const int n = testing::uniform_int(2, 4), m = testing::uniform_int(2, 4);
    const Matrix e = testing::random_stochastic(n, m, 0.02);
    const Matrix g = testing::random_stochastic(m, testing::uniform_int(2, 4), 0.02);
    const OrderVerdict v = cone_compare(Experiment(e), Experiment(e * g));
    CHECK(v.dominates_or_equivalent());
    CHECK(v.verify(e, e * g));
    const OrderVerdict back = cone_compare(Experiment(e * g), Experiment(e));
    CHECK((back.relation == Relation::DominatedBy || back.relation == Relation::Equivalent));
  }
}

TEST_CASE("cone certificates re-verify") {
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = testing::uniform_int(2, 4);
    const Matrix e = testing::random_stochastic(n, testing::uniform_int(2, 5), t % 3 == 0 ? 0.0 : 0.02);
    const Matrix f = t % 2 == 0 ? Matrix(e * testing::random_stochastic(e.cols(), 3, 0.0))
                                : testing::random_stochastic(n, testing::uniform_int(2, 4), 0.02);
    const OrderVerdict v = cone_compare(Experiment(e), Experiment(f));
    if (!v.verify(e, f)) ++failures;
    if (v.certificate.forward && (v.certificate.forward->minCoeff() < -1e-12 ||
                                  (e * *v.certificate.forward - f).cwiseAbs().maxCoeff() > 1e-9))
      ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("tampered certificates are rejected") {
  const Matrix e = testing::random_stochastic(3, 3, 0.05);
  const Matrix f = e * testing::random_stochastic(3, 2, 0.05);
  OrderVerdict v = cone_compare(Experiment(e), Experiment(f));
  REQUIRE(v.certificate.forward);
  (*v.certificate.forward)(0, 0) += 0.1;
  CHECK_FALSE(v.verify(e, f));
}

TEST_CASE("column space order examples") {
  const Experiment full1(testing::random_stochastic(3, 3, 0.05));
  const Experiment full2(testing::random_stochastic(3, 4, 0.05));
  CHECK(colspace_compare(full1, full2).relation == Relation::Equivalent);

  const OrderVerdict a = colspace_compare(kA1, kA2);
  CHECK(a.relation == Relation::Incomparable);
  CHECK(a.certificate.rank_e == 2);
  CHECK(a.certificate.rank_f == 2);
  CHECK(a.certificate.rank_joint == 3);
  CHECK(a.verify(kA1.kernel(), kA2.kernel()));

  // A rank-one garbling: every row becomes the same distribution.
  const Matrix g = Vector::Ones(2) * (Vector(3) << 0.2, 0.3, 0.5).finished().transpose();
  const Matrix f = kA1.kernel() * g;
  const OrderVerdict b = colspace_compare(kA1, Experiment(f));
  CHECK(b.relation == Relation::Dominates);
  CHECK(b.strict);
  CHECK(b.certificate.rank_f == 1);
  CHECK(colspace_compare(Experiment(f), kA1).relation == Relation::DominatedBy);
  CHECK(colspace_compare(kA1, kA1).relation == Relation::Equivalent);
}

TEST_CASE("column space ranks agree with exact integer elimination") {
  for (int t = 0; t < 200; ++t) {
    const int n = testing::uniform_int(2, 4);
    const int r = testing::uniform_int(1, n);
    auto int_kernel = [&](int m) {
      std::vector<std::vector<long long>> a(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(m)));
      Matrix b(n, r), c(r, m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < r; ++j) b(i, j) = testing::uniform_int(0, 3);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < m; ++j) c(i, j) = testing::uniform_int(0, 3);
      Matrix k = b * c;
      k.col(0).array() += 1.0;  // rows must be positive before normalization
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<long long>(k(i, j));
      return std::pair{a, k};
    };
    auto [ia, ka] = int_kernel(testing::uniform_int(1, 4));
    auto [ib, kb] = int_kernel(testing::uniform_int(1, 4));
    std::vector<std::vector<long long>> joint = ia;
    for (std::size_t i = 0; i < joint.size(); ++i) joint[i].insert(joint[i].end(), ib[i].begin(), ib[i].end());
    const int ra = testing::bareiss_rank(ia), rb = testing::bareiss_rank(ib), rj = testing::bareiss_rank(joint);
    Matrix ea = ka, eb = kb;
    for (int i = 0; i < n; ++i) {
      ea.row(i) /= ka.row(i).sum();
      eb.row(i) /= kb.row(i).sum();
    }
    // Row normalization keeps each rank; the joint rank survives only when
    // both kernels were scaled by the same diagonal.
    const OrderVerdict v = colspace_compare(Experiment(ea), Experiment(eb));
    CHECK(v.certificate.rank_e == ra);
    CHECK(v.certificate.rank_f == rb);
    if ((ka.rowwise().sum() - kb.rowwise().sum()).cwiseAbs().maxCoeff() == 0.0) {
      CHECK(v.certificate.rank_joint == rj);
    }
  }
}

TEST_CASE("binary indirect-cost order of the two example experiments") {
  const OrderVerdict v = binary_k_compare(kE1, kE2);
  CHECK(v.relation == Relation::Dominates);
  CHECK(v.strict);
  CHECK(v.certificate.kind == "likelihood");
  CHECK(v.certificate.spread_e == doctest::Approx(40.0 / 21).epsilon(1e-12));
  CHECK(v.certificate.reciprocal_spread_e == doctest::Approx(40.0 / 21).epsilon(1e-12));
  CHECK(v.certificate.spread_f == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(v.certificate.reciprocal_spread_f == doctest::Approx(1.875).epsilon(1e-12));
  CHECK(v.verify(kE1.kernel(), kE2.kernel()));
  CHECK(binary_k_compare(kE2, kE1).relation == Relation::DominatedBy);
  CHECK(binary_k_compare(kE1, kE1).relation == Relation::Equivalent);

  const Experiment id(Matrix::Identity(2, 2));
  const OrderVerdict r = binary_k_compare(id, kE2);
  CHECK(r.relation == Relation::Dominates);
  CHECK(std::isinf(r.certificate.spread_e));

  CHECK_THROWS_AS(binary_k_compare(kA1, kA2), UnsupportedError);
  CHECK_THROWS_AS(binary_k_compare(kE1, Experiment(mat({{0.2, 0.3, 0.5}, {0.5, 0.3, 0.2}}))), UnsupportedError);
}

TEST_CASE("likelihood ratios") {
  const LikelihoodRatios a = binary_likelihood_ratios(kE2);
  CHECK(a.l1 == doctest::Approx(0.4));
  CHECK(a.l2 == doctest::Approx(1.6));
  CHECK_FALSE(a.swapped);
  const LikelihoodRatios b = binary_likelihood_ratios(Experiment(mat({{0.5, 0.5}, {0.8, 0.2}})));
  CHECK(b.swapped);
  CHECK(b.l1 <= 1.0);
  CHECK(b.l2 >= 1.0);
  const LikelihoodRatios c = binary_likelihood_ratios(Experiment(mat({{0.0, 1.0}, {0.5, 0.5}})));
  CHECK(c.l1 == doctest::Approx(0.5));
  CHECK(std::isinf(c.l2));
  CHECK(std::isinf(c.spread()));
  CHECK(c.reciprocal_spread() == doctest::Approx(2.0));
  CHECK_THROWS_AS(binary_likelihood_ratios(Experiment(mat({{1.0, 0.0}, {1.0, 0.0}}))), DegenerateExperimentError);
}

TEST_CASE("cone dominance is sufficient for indirect-cost dominance") {
  CHECK_FALSE(k_dominance_sufficient(kE1, kE2));
  CHECK(k_dominance_sufficient(Experiment(Matrix::Identity(2, 2)), kE2));
  const Matrix g = testing::random_stochastic(2, 2, 0.1);
  CHECK(k_dominance_sufficient(kE1, Experiment(kE1.kernel() * g)));
}

TEST_CASE("Blackwell implies cone implies indirect-cost dominance") {
  int violations = 0, blackwell = 0, cone = 0;
  for (int t = 0; t < 1000; ++t) {
    const Matrix e = binary_kernel();
    const Matrix f = t % 2 == 0 ? Matrix(e * testing::random_stochastic(2, 2)) : binary_kernel();
    const Experiment ee(e), ef(f);
    if (std::abs(f(0, 0) - f(1, 0)) < 1e-9) continue;  // uninformative garbling
    const bool bw = blackwell_compare(ee, ef).dominates_or_equivalent();
    const bool cn = cone_compare(ee, ef).dominates_or_equivalent();
    const bool k2 = binary_k_compare(ee, ef).dominates_or_equivalent();
    blackwell += bw;
    cone += cn;
    if (bw && !cn) ++violations;
    if (cn && !k2) ++violations;
  }
  CHECK(violations == 0);
  CHECK(blackwell > 100);
  CHECK(cone >= blackwell);
}

TEST_CASE("indirect-cost verdicts agree with the minimum expected payment") {
  int violations = 0, dominated_pairs = 0;
  for (int t = 0; t < 200; ++t) {
    const Matrix e = binary_kernel();
    const Matrix f = binary_kernel();
    const OrderVerdict v = binary_k_compare(Experiment(e), Experiment(f));
    if (!v.dominates_or_equivalent() && v.relation != Relation::DominatedBy) continue;
    const Matrix& strong = v.dominates_or_equivalent() ? e : f;
    const Matrix& weak = v.dominates_or_equivalent() ? f : e;
    ++dominated_pairs;
    const double a = testing::uniform(0.05, 0.95), b = testing::uniform(0.05, 0.95);
    const double w = testing::uniform(0.1, 0.9);
    const PosteriorDistribution d({Belief{a, 1 - a}, Belief{b, 1 - b}}, (Vector(2) << w, 1 - w).finished());
    const Belief prior(d.mean());
    const PosteriorCost c = t % 2 == 0 ? entropy_cost(prior) : quadratic_cost(prior, testing::uniform(0.5, 3.0));
    const double ks = optimal_contract(Experiment(strong), d, c).kappa;
    const double kw = optimal_contract(Experiment(weak), d, c).kappa;
    if (ks > kw + 1e-9) ++violations;
  }
  CHECK(violations == 0);
  CHECK(dominated_pairs > 50);
}

TEST_CASE("verdicts compose from the two one-sided tests") {
  CHECK(combine(true, true) == Relation::Equivalent);
  CHECK(combine(true, false) == Relation::Dominates);
  CHECK(combine(false, true) == Relation::DominatedBy);
  CHECK(combine(false, false) == Relation::Incomparable);
  CHECK(to_string(Relation::DominatedBy) == "DominatedBy");
}
