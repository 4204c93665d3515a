#include <doctest.h>

#include <cmath>
#include <limits>

#include "incentives/error.hpp"
#include "incentives/numerics.hpp"
#include "testing.hpp"

using namespace incentives;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("single lower bound") {
  LpProblem p(1);
  p.objective << 1.0;
  p.lower = Vector::Constant(1, 3.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.x(0) == doctest::Approx(3.0));
  CHECK(s.objective == doctest::Approx(3.0));
}

TEST_CASE("scalar scaling feasibility") {
  LpProblem p(1);
  p.a_eq = (Matrix(2, 1) << 0.7, 0.3).finished();
  p.b_eq = (Vector(2) << 0.35, 0.15).finished();
  const LpSolution s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.x(0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("contradictory equalities are infeasible") {
  LpProblem p(1);
  p.a_eq = (Matrix(2, 1) << 1.0, -1.0).finished();
  p.b_eq = (Vector(2) << 1.0, 1.0).finished();
  CHECK(solve_lp(p).status == LpStatus::Infeasible);
}

TEST_CASE("unbounded direction is reported") {
  LpProblem p(2);
  p.objective << -1.0, 0.0;
  p.add_le((Vector(2) << 0.0, 1.0).finished(), 1.0);
  CHECK(solve_lp(p).status == LpStatus::Unbounded);
}

TEST_CASE("free, mirrored and boxed variables") {
  // min x0 - x1 + x2, x0 free with x0 >= -2 via a row, x1 <= 4 (no lower), 1 <= x2 <= 3
  LpProblem p(3);
  p.objective << 1.0, -1.0, 1.0;
  p.set_free(0);
  p.lower = (Vector(3) << -kInf, -kInf, 1.0).finished();
  p.upper = (Vector(3) << kInf, 4.0, 3.0).finished();
  p.add_le((Vector(3) << -1.0, 0.0, 0.0).finished(), 2.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(-2.0 - 4.0 + 1.0));
  CHECK(lp_violation(p, s.x) <= 1e-9);
}

TEST_CASE("redundant equality rows are tolerated") {
  LpProblem p(2);
  p.objective << 1.0, 2.0;
  p.add_eq((Vector(2) << 1.0, 1.0).finished(), 1.0);
  p.add_eq((Vector(2) << 2.0, 2.0).finished(), 2.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(1.0));
}

TEST_CASE("degenerate problem terminates") {
  // Classic cycling example under textbook Dantzig rules (Beale).
  LpProblem p(4);
  p.objective << -0.75, 150.0, -0.02, 6.0;
  p.add_le((Vector(4) << 0.25, -60.0, -0.04, 9.0).finished(), 0.0);
  p.add_le((Vector(4) << 0.5, -90.0, -0.02, 3.0).finished(), 0.0);
  p.add_le((Vector(4) << 0.0, 0.0, 1.0, 0.0).finished(), 1.0);
  const LpSolution s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective == doctest::Approx(-0.05));
}

TEST_CASE("optimum agrees with vertex enumeration on random boxed problems") {
  int disagreements = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = testing::uniform_int(1, 6);
    const int m = testing::uniform_int(0, 8);
    const Vector c = testing::random_matrix(n, 1, -1.0, 1.0);
    const Matrix a = testing::random_matrix(m, n, -1.0, 1.0);
    const Vector b = testing::random_matrix(m, 1, -0.5, 1.0);
    const Vector ub = testing::random_matrix(n, 1, 0.5, 2.0);
    LpProblem p(n);
    p.objective = c;
    p.a_le = a;
    p.b_le = b;
    p.upper = ub;
    const LpSolution s = solve_lp(p);
    const auto ref = testing::vertex_enumeration_min(c, a, b, ub);
    if (!ref) {
      if (s.status != LpStatus::Infeasible) ++disagreements;
      continue;
    }
    if (!s.optimal() || std::abs(s.objective - *ref) > 1e-8 || lp_violation(p, s.x) > 1e-7) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("reported objective matches recomputation") {
  for (int t = 0; t < 100; ++t) {
    const int n = testing::uniform_int(2, 10);
    LpProblem p(n);
    p.objective = testing::random_matrix(n, 1, 0.0, 1.0);
    p.add_eq(Vector::Ones(n), 1.0);
    const Matrix a = testing::random_matrix(3, n);
    const Vector x0 = testing::random_simplex(n);
    for (int i = 0; i < 3; ++i) p.add_eq(a.row(i).transpose(), a.row(i).dot(x0));
    const LpSolution s = solve_lp(p);
    REQUIRE(s.optimal());
    CHECK(s.objective == doctest::Approx(p.objective.dot(s.x)).epsilon(1e-12));
    CHECK(lp_violation(p, s.x) <= 1e-7);
  }
}

TEST_CASE("iteration limit surfaces as solver failure") {
  LpProblem p(3);
  p.objective << -1.0, -1.0, -1.0;
  for (int i = 0; i < 3; ++i) {
    Vector r = Vector::Ones(3);
    r(i) = 2.0;
    p.add_le(r, 4.0);
  }
  LpOptions o;
  o.max_iterations = 1;
  CHECK(solve_lp(p, o).status == LpStatus::SolverFailure);
}

TEST_CASE("malformed problems are input errors") {
  LpProblem p(2);
  p.a_eq = Matrix::Ones(1, 3);
  p.b_eq = Vector::Ones(1);
  CHECK_THROWS_AS(solve_lp(p), InputError);
  LpProblem q(1);
  q.objective(0) = std::nan("");
  CHECK_THROWS_AS(solve_lp(q), InputError);
}
