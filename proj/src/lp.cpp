// Dense two-phase tableau simplex. The problems solved here have at most a
// few hundred rows and tens of thousands of columns (the concavification grid),
// so a row-major dense tableau with vectorized row updates is enough.

#include <algorithm>
#include <cmath>
#include <limits>

#include "incentives/error.hpp"
#include "incentives/numerics.hpp"

namespace incentives {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// How an original variable maps onto nonnegative standard-form columns.
struct VarMap {
  enum Kind { Shift, Mirror, Split } kind = Shift;
  double offset = 0.0;  // x = offset + sign * s   (Split: x = s+ - s-)
  Eigen::Index col = 0;  // first standard column
};

struct StandardForm {
  Matrix a;   // m x n, rows scaled so b >= 0
  Vector b;
  Vector c;
  std::vector<VarMap> vars;
  std::vector<Eigen::Index> slack_basis;  // per row: column usable as initial basis, or -1
};

StandardForm to_standard(const LpProblem& p) {
  const Eigen::Index n = p.num_vars();
  Vector lower = p.lower.size() ? p.lower : Vector::Zero(n);
  Vector upper = p.upper.size() ? p.upper : Vector::Constant(n, kInf);

  StandardForm sf;
  sf.vars.resize(static_cast<std::size_t>(n));
  Eigen::Index cols = 0;
  std::vector<Eigen::Index> upper_rows;  // original vars needing s <= u - l
  for (Eigen::Index j = 0; j < n; ++j) {
    VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
    vm.col = cols;
    if (std::isfinite(lower(j))) {
      vm.kind = VarMap::Shift;
      vm.offset = lower(j);
      cols += 1;
      if (std::isfinite(upper(j))) upper_rows.push_back(j);
    } else if (std::isfinite(upper(j))) {
      vm.kind = VarMap::Mirror;
      vm.offset = upper(j);
      cols += 1;
    } else {
      vm.kind = VarMap::Split;
      cols += 2;
    }
  }
  const Eigen::Index n_struct = cols;
  const Eigen::Index m_eq = p.a_eq.rows();
  const Eigen::Index m_le = p.a_le.rows();
  const Eigen::Index m_up = static_cast<Eigen::Index>(upper_rows.size());
  const Eigen::Index m = m_eq + m_le + m_up;
  const Eigen::Index n_std = n_struct + m_le + m_up;

  sf.a = Matrix::Zero(m, n_std);
  sf.b = Vector::Zero(m);
  sf.c = Vector::Zero(n_std);
  sf.slack_basis.assign(static_cast<std::size_t>(m), -1);

  auto place = [&](Eigen::Index row, const auto& coeffs, double rhs) {
    double shifted = rhs;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double aij = coeffs(j);
      if (aij == 0.0) continue;
      const VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
      switch (vm.kind) {
        case VarMap::Shift:
          sf.a(row, vm.col) += aij;
          shifted -= aij * vm.offset;
          break;
        case VarMap::Mirror:
          sf.a(row, vm.col) -= aij;
          shifted -= aij * vm.offset;
          break;
        case VarMap::Split:
          sf.a(row, vm.col) += aij;
          sf.a(row, vm.col + 1) -= aij;
          break;
      }
    }
    sf.b(row) = shifted;
  };

  for (Eigen::Index i = 0; i < m_eq; ++i) place(i, p.a_eq.row(i), p.b_eq(i));
  for (Eigen::Index i = 0; i < m_le; ++i) {
    const Eigen::Index row = m_eq + i;
    place(row, p.a_le.row(i), p.b_le(i));
    sf.a(row, n_struct + i) = 1.0;
    sf.slack_basis[static_cast<std::size_t>(row)] = n_struct + i;
  }
  for (Eigen::Index i = 0; i < m_up; ++i) {
    const Eigen::Index row = m_eq + m_le + i;
    const Eigen::Index j = upper_rows[static_cast<std::size_t>(i)];
    const VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
    sf.a(row, vm.col) = 1.0;
    sf.b(row) = upper(j) - lower(j);
    sf.a(row, n_struct + m_le + i) = 1.0;
    sf.slack_basis[static_cast<std::size_t>(row)] = n_struct + m_le + i;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (sf.b(i) < 0.0) {
      sf.a.row(i) *= -1.0;
      sf.b(i) = -sf.b(i);
      sf.slack_basis[static_cast<std::size_t>(i)] = -1;  // slack now has coefficient -1
    }
  }

  for (Eigen::Index j = 0; j < n; ++j) {
    const double cj = p.objective(j);
    const VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
    switch (vm.kind) {
      case VarMap::Shift: sf.c(vm.col) = cj; break;
      case VarMap::Mirror: sf.c(vm.col) = -cj; break;
      case VarMap::Split:
        sf.c(vm.col) = cj;
        sf.c(vm.col + 1) = -cj;
        break;
    }
  }
  return sf;
}

Vector from_standard(const StandardForm& sf, const Vector& s, Eigen::Index n) {
  Vector x(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const VarMap& vm = sf.vars[static_cast<std::size_t>(j)];
    switch (vm.kind) {
      case VarMap::Shift: x(j) = vm.offset + s(vm.col); break;
      case VarMap::Mirror: x(j) = vm.offset - s(vm.col); break;
      case VarMap::Split: x(j) = s(vm.col) - s(vm.col + 1); break;
    }
  }
  return x;
}

class Simplex {
 public:
  Simplex(const StandardForm& sf, const LpOptions& opts) : sf_(sf), opts_(opts) {
    m_ = sf.a.rows();
    n_ = sf.a.cols();
    // Artificial columns for rows without a usable slack.
    std::vector<Eigen::Index> art_rows;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (sf.slack_basis[static_cast<std::size_t>(i)] < 0) art_rows.push_back(i);
    }
    n_art_ = static_cast<Eigen::Index>(art_rows.size());
    cols_ = n_ + n_art_;
    t_ = Tableau::Zero(m_ + 1, cols_ + 1);
    t_.topLeftCorner(m_, n_) = sf.a;
    t_.block(0, cols_, m_, 1) = sf.b;
    basis_.assign(static_cast<std::size_t>(m_), -1);
    for (Eigen::Index i = 0; i < m_; ++i) {
      basis_[static_cast<std::size_t>(i)] = sf.slack_basis[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index a = 0; a < n_art_; ++a) {
      const Eigen::Index row = art_rows[static_cast<std::size_t>(a)];
      t_(row, n_ + a) = 1.0;
      basis_[static_cast<std::size_t>(row)] = n_ + a;
    }
    allowed_.assign(static_cast<std::size_t>(cols_), true);
  }

  LpSolution run() {
    LpSolution sol;
    // Phase I: minimize the sum of artificials.
    if (n_art_ > 0) {
      t_.row(m_).setZero();
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (is_artificial(basis_[static_cast<std::size_t>(i)])) t_.row(m_) -= t_.row(i);
      }
      for (Eigen::Index a = 0; a < n_art_; ++a) t_(m_, n_ + a) = 0.0;
      const LpStatus s1 = iterate();
      if (s1 == LpStatus::SolverFailure) return fail("iteration limit in phase I");
      const double infeas = -t_(m_, cols_);
      if (infeas > opts_.feasibility_tol) {
        sol.status = LpStatus::Infeasible;
        sol.iterations = iterations_;
        sol.message = "phase I optimum " + std::to_string(infeas);
        return sol;
      }
      drive_out_artificials();
      for (Eigen::Index a = 0; a < n_art_; ++a) allowed_[static_cast<std::size_t>(n_ + a)] = false;
    }

    // Phase II.
    t_.row(m_).setZero();
    t_.block(m_, 0, 1, n_) = sf_.c.transpose();
    for (Eigen::Index i = 0; i < t_.rows() - 1; ++i) {
      const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
      const double cb = bj < n_ ? sf_.c(bj) : 0.0;
      if (cb != 0.0) t_.row(m_) -= cb * t_.row(i);
    }
    const LpStatus s2 = iterate();
    if (s2 == LpStatus::SolverFailure) return fail("iteration limit in phase II");
    if (s2 == LpStatus::Unbounded) {
      sol.status = LpStatus::Unbounded;
      sol.iterations = iterations_;
      return sol;
    }
    sol.status = LpStatus::Optimal;
    sol.iterations = iterations_;
    sol.x = refined_solution();
    return sol;
  }

 private:
  bool is_artificial(Eigen::Index j) const { return j >= n_; }

  LpSolution fail(const std::string& why) {
    LpSolution sol;
    sol.status = LpStatus::SolverFailure;
    sol.iterations = iterations_;
    sol.message = why;
    return sol;
  }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    t_(r, c) = 1.0;
    basis_[static_cast<std::size_t>(r)] = c;
    ++iterations_;
  }

  // Runs pivots on the current objective row until optimal or unbounded.
  LpStatus iterate() {
    const Eigen::Index rows = t_.rows() - 1;
    const Eigen::Index obj = rows;
    bool bland = false;
    int degenerate_run = 0;
    for (;;) {
      if (iterations_ >= opts_.max_iterations) return LpStatus::SolverFailure;
      Eigen::Index enter = -1;
      double best = -opts_.optimality_tol;
      for (Eigen::Index j = 0; j < cols_; ++j) {
        if (!allowed_[static_cast<std::size_t>(j)]) continue;
        const double d = t_(obj, j);
        if (bland) {
          if (d < -opts_.optimality_tol) {
            enter = j;
            break;
          }
        } else if (d < best) {
          best = d;
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::Optimal;

      Eigen::Index leave = -1;
      double best_ratio = kInf;
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double a = t_(i, enter);
        if (a <= opts_.pivot_tol) continue;
        const double ratio = t_(i, cols_) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio <= best_ratio + 1e-12) {
          const auto bi = basis_[static_cast<std::size_t>(i)];
          const auto bl = basis_[static_cast<std::size_t>(leave)];
          const bool better = bland ? bi < bl : a > t_(leave, enter);
          if (better) {
            leave = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leave < 0) return LpStatus::Unbounded;

      if (best_ratio <= 1e-12) {
        if (++degenerate_run > 30) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      pivot(leave, enter);
    }
  }

  void drive_out_artificials() {
    std::vector<Eigen::Index> redundant;
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (!is_artificial(basis_[static_cast<std::size_t>(i)])) continue;
      Eigen::Index best = -1;
      double mag = opts_.pivot_tol;
      for (Eigen::Index j = 0; j < n_; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
      } else {
        redundant.push_back(i);
      }
    }
    if (redundant.empty()) return;
    Tableau kept(t_.rows() - static_cast<Eigen::Index>(redundant.size()), t_.cols());
    std::vector<Eigen::Index> basis;
    std::vector<Eigen::Index> rows;
    Eigen::Index out = 0;
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (std::find(redundant.begin(), redundant.end(), i) != redundant.end()) continue;
      kept.row(out++) = t_.row(i);
      if (i < m_) {
        basis.push_back(basis_[static_cast<std::size_t>(i)]);
        rows.push_back(active_rows_.empty() ? i : active_rows_[static_cast<std::size_t>(i)]);
      }
    }
    t_ = std::move(kept);
    basis_ = std::move(basis);
    active_rows_ = std::move(rows);
    m_ = t_.rows() - 1;
  }

  // Re-solves B x_B = b from the original data to shed tableau round-off.
  Vector refined_solution() const {
    Vector s = Vector::Zero(n_);
    const Eigen::Index m = t_.rows() - 1;
    Vector tab(m);
    for (Eigen::Index i = 0; i < m; ++i) tab(i) = t_(i, cols_);
    if (m == 0) return s;

    Matrix basis_mat(m, m);
    Vector rhs(m);
    bool ok = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index row = active_rows_.empty() ? i : active_rows_[static_cast<std::size_t>(i)];
      rhs(i) = sf_.b(row);
      for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index bj = basis_[static_cast<std::size_t>(k)];
        if (is_artificial(bj)) {
          ok = false;
          basis_mat(i, k) = 0.0;
        } else {
          basis_mat(i, k) = sf_.a(row, bj);
        }
      }
    }
    Vector xb = tab;
    if (ok) {
      Eigen::FullPivLU<Matrix> lu(basis_mat);
      if (lu.isInvertible()) {
        Vector refined = lu.solve(rhs);
        if (refined.allFinite() && (refined - tab).cwiseAbs().maxCoeff() < 1e-6) xb = refined;
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      const Eigen::Index bj = basis_[static_cast<std::size_t>(i)];
      if (!is_artificial(bj)) s(bj) = std::max(0.0, xb(i));
    }
    return s;
  }

  const StandardForm& sf_;
  LpOptions opts_;
  Eigen::Index m_ = 0, n_ = 0, n_art_ = 0, cols_ = 0;
  Tableau t_;
  std::vector<Eigen::Index> basis_;
  std::vector<Eigen::Index> active_rows_;
  std::vector<bool> allowed_;
  long iterations_ = 0;
};

void validate(const LpProblem& p) {
  const Eigen::Index n = p.num_vars();
  auto check = [&](const Matrix& a, const Vector& b, const char* what) {
    if (a.rows() != b.size() || (a.rows() > 0 && a.cols() != n)) {
      throw InputError(std::string("solve_lp: ") + what + " has inconsistent dimensions");
    }
    if (!a.allFinite() || !b.allFinite()) {
      throw InputError(std::string("solve_lp: ") + what + " has non-finite data");
    }
  };
  if (!p.objective.allFinite()) throw InputError("solve_lp: non-finite objective");
  check(p.a_eq, p.b_eq, "equality block");
  check(p.a_le, p.b_le, "inequality block");
  if (p.lower.size() && p.lower.size() != n) throw InputError("solve_lp: lower bound size");
  if (p.upper.size() && p.upper.size() != n) throw InputError("solve_lp: upper bound size");
  for (Eigen::Index j = 0; j < p.lower.size(); ++j) {
    if (std::isnan(p.lower(j)) || p.lower(j) == kInf) throw InputError("solve_lp: bad lower bound");
  }
  for (Eigen::Index j = 0; j < p.upper.size(); ++j) {
    if (std::isnan(p.upper(j)) || p.upper(j) == -kInf) throw InputError("solve_lp: bad upper bound");
  }
}

}  // namespace

std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::SolverFailure: return "SolverFailure";
  }
  return "SolverFailure";
}

LpProblem::LpProblem(Eigen::Index num_vars)
    : objective(Vector::Zero(num_vars)),
      a_eq(0, num_vars),
      b_eq(0),
      a_le(0, num_vars),
      b_le(0) {}

void LpProblem::add_eq(const Vector& row, double rhs) {
  if (row.size() != num_vars()) throw InputError("LpProblem::add_eq: row size");
  a_eq.conservativeResize(a_eq.rows() + 1, num_vars());
  a_eq.row(a_eq.rows() - 1) = row.transpose();
  b_eq.conservativeResize(b_eq.size() + 1);
  b_eq(b_eq.size() - 1) = rhs;
}

void LpProblem::add_le(const Vector& row, double rhs) {
  if (row.size() != num_vars()) throw InputError("LpProblem::add_le: row size");
  a_le.conservativeResize(a_le.rows() + 1, num_vars());
  a_le.row(a_le.rows() - 1) = row.transpose();
  b_le.conservativeResize(b_le.size() + 1);
  b_le(b_le.size() - 1) = rhs;
}

void LpProblem::set_free(Eigen::Index j) {
  if (lower.size() == 0) lower = Vector::Zero(num_vars());
  if (upper.size() == 0) upper = Vector::Constant(num_vars(), kInf);
  lower(j) = -kInf;
  upper(j) = kInf;
}

double lp_violation(const LpProblem& p, const Vector& x) {
  double v = 0.0;
  if (p.a_eq.rows() > 0) v = std::max(v, (p.a_eq * x - p.b_eq).cwiseAbs().maxCoeff());
  if (p.a_le.rows() > 0) v = std::max(v, (p.a_le * x - p.b_le).maxCoeff());
  const Eigen::Index n = p.num_vars();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = p.lower.size() ? p.lower(j) : 0.0;
    const double hi = p.upper.size() ? p.upper(j) : kInf;
    if (std::isfinite(lo)) v = std::max(v, lo - x(j));
    if (std::isfinite(hi)) v = std::max(v, x(j) - hi);
  }
  return v;
}

LpSolution solve_lp(const LpProblem& p, const LpOptions& opts) {
  validate(p);
  const Eigen::Index n = p.num_vars();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double lo = p.lower.size() ? p.lower(j) : 0.0;
    const double hi = p.upper.size() ? p.upper(j) : kInf;
    if (lo > hi) {
      LpSolution sol;
      sol.status = LpStatus::Infeasible;
      sol.message = "empty bound interval";
      return sol;
    }
  }

  const StandardForm sf = to_standard(p);
  Simplex simplex(sf, opts);
  LpSolution sol = simplex.run();
  if (sol.status != LpStatus::Optimal) return sol;

  sol.x = from_standard(sf, sol.x, n);
  sol.objective = p.objective.dot(sol.x);
  const double viol = lp_violation(p, sol.x);
  if (!(viol <= opts.feasibility_tol)) {
    sol.status = LpStatus::SolverFailure;
    sol.message = "optimal basis violates constraints by " + std::to_string(viol);
  }
  return sol;
}

}  // namespace incentives
