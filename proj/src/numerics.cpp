#include "incentives/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "incentives/error.hpp"

namespace incentives {

void Tolerances::validate() const {
  if (!(rank > 0.0) || !(lp > 0.0) || !(residual > 0.0)) {
    throw InputError("tolerances must be positive");
  }
}

void require_finite(const Matrix& a, const char* what) {
  if (a.size() == 0) {
    throw InputError(std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw InputError(std::string(what) + ": non-finite entry");
  }
}

PseudoInverse pseudo_inverse(const Matrix& a, double rank_tol) {
  require_finite(a, "pseudo_inverse");
  if (!(rank_tol > 0.0)) throw InputError("pseudo_inverse: rank_tol must be positive");

  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();

  PseudoInverse out;
  out.source = a;
  out.singular_values = sv;
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  out.cutoff = smax * static_cast<double>(std::max(rows, cols)) * rank_tol;

  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > out.cutoff) ++r;
  }
  out.rank = r;

  const Matrix& u = svd.matrixU();
  const Matrix& v = svd.matrixV();
  Matrix pinv = Matrix::Zero(cols, rows);
  for (int i = 0; i < r; ++i) {
    pinv.noalias() += (v.col(i) / sv(i)) * u.col(i).transpose();
  }
  out.pinv = std::move(pinv);
  out.left_null_basis = u.rightCols(rows - r);
  out.null_basis = v.rightCols(cols - r);
  return out;
}

int numerical_rank(const Matrix& a, double rank_tol) {
  require_finite(a, "numerical_rank");
  Eigen::JacobiSVD<Matrix> svd(a);
  const Vector& sv = svd.singularValues();
  const double cutoff =
      (sv.size() > 0 ? sv(0) : 0.0) * static_cast<double>(std::max(a.rows(), a.cols())) * rank_tol;
  return static_cast<int>((sv.array() > cutoff).count());
}

double column_space_residual(const PseudoInverse& pi, const Vector& v) {
  if (v.size() != pi.source.rows()) {
    throw InputError("column_space_residual: dimension mismatch");
  }
  if (!v.allFinite()) throw InputError("column_space_residual: non-finite vector");
  // Projection onto the complement is numerically cleaner than v - A A^+ v.
  if (pi.left_null_basis.cols() == 0) return 0.0;
  return (pi.left_null_basis.transpose() * v).norm();
}

double column_space_residual(const Matrix& a, const Vector& v, double rank_tol) {
  return column_space_residual(pseudo_inverse(a, rank_tol), v);
}

Vector rowmin(const Matrix& a) {
  if (a.cols() == 0) throw InputError("rowmin: matrix has no columns");
  return a.rowwise().minCoeff();
}

std::vector<int> rowmin_index(const Matrix& a) {
  if (a.cols() == 0) throw InputError("rowmin_index: matrix has no columns");
  std::vector<int> idx(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < a.cols(); ++j) {
      if (a(i, j) < a(i, best)) best = j;
    }
    idx[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return idx;
}

double max_column_deviation(const Matrix& a) {
  double dev = 0.0;
  for (Eigen::Index k = 1; k < a.cols(); ++k) {
    dev = std::max(dev, (a.col(k) - a.col(0)).cwiseAbs().maxCoeff());
  }
  return dev;
}

}  // namespace incentives
