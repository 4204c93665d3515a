#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace incentives {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical tolerances shared by all modules. Every field is overridable
/// from the CLI and from the environment.
struct Tolerances {
  /// Relative factor in the rank cutoff sigma_max * max(rows, cols) * rank.
  double rank = 1e-12;
  /// Absolute primal feasibility tolerance of the LP kernel.
  double lp = 1e-7;
  /// Column-space membership tolerance for projection residuals.
  double residual = 1e-9;

  void validate() const;
};

/// Moore-Penrose pseudo-inverse together with the SVD data it came from.
struct PseudoInverse {
  Matrix source;
  Matrix pinv;
  int rank = 0;
  Vector singular_values;  // descending
  double cutoff = 0.0;

  /// Orthogonal projector onto Col(source): source * pinv.
  Matrix column_projector() const { return source * pinv; }
  /// Orthogonal projector onto Row(source): pinv * source.
  Matrix row_projector() const { return pinv * source; }
  /// Orthonormal basis of the orthogonal complement of Col(source), rows x (rows - rank).
  Matrix left_null_basis;
  /// Orthonormal basis of ker(source), cols x (cols - rank).
  Matrix null_basis;
};

/// Throws InputError if any entry is NaN or infinite, or the matrix is empty.
void require_finite(const Matrix& a, const char* what);

/// Pseudo-inverse via a full SVD. Singular values at or below
/// sigma_max * max(rows, cols) * rank_tol are treated as zero.
PseudoInverse pseudo_inverse(const Matrix& a, double rank_tol = Tolerances{}.rank);

/// Numerical rank with the same cutoff rule as pseudo_inverse.
int numerical_rank(const Matrix& a, double rank_tol = Tolerances{}.rank);

/// ||(I - A A^+) v||, the distance from v to Col A.
double column_space_residual(const Matrix& a, const Vector& v,
                             double rank_tol = Tolerances{}.rank);
double column_space_residual(const PseudoInverse& pi, const Vector& v);

/// Vector of row-wise minima.
Vector rowmin(const Matrix& a);
/// Index of the first minimal entry in each row.
std::vector<int> rowmin_index(const Matrix& a);

/// Largest pairwise deviation between columns, max_{k} ||col_k - col_0||_inf.
double max_column_deviation(const Matrix& a);

// ---------------------------------------------------------------------------
// Linear programming

enum class LpStatus { Optimal, Infeasible, Unbounded, SolverFailure };

std::string to_string(LpStatus s);

/// minimize c'x  s.t.  A_eq x = b_eq,  A_le x <= b_le,  lower <= x <= upper.
/// Empty lower/upper default to 0 and +inf respectively. Use -inf / +inf
/// for free directions.
struct LpProblem {
  Vector objective;
  Matrix a_eq;
  Vector b_eq;
  Matrix a_le;
  Vector b_le;
  Vector lower;
  Vector upper;

  explicit LpProblem(Eigen::Index num_vars = 0);
  Eigen::Index num_vars() const { return objective.size(); }

  /// Appends one equality row.
  void add_eq(const Vector& row, double rhs);
  /// Appends one <= row.
  void add_le(const Vector& row, double rhs);
  void set_free(Eigen::Index j);
};

struct LpOptions {
  double feasibility_tol = Tolerances{}.lp;
  double pivot_tol = 1e-10;
  double optimality_tol = 1e-10;
  long max_iterations = 200000;
};

struct LpSolution {
  LpStatus status = LpStatus::SolverFailure;
  Vector x;
  double objective = 0.0;
  long iterations = 0;
  std::string message;

  bool optimal() const { return status == LpStatus::Optimal; }
};

LpSolution solve_lp(const LpProblem& p, const LpOptions& opts = {});

/// Max violation of all constraints and bounds at x.
double lp_violation(const LpProblem& p, const Vector& x);

}  // namespace incentives
