#include "fnb/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace fnb::lp {
namespace {

// Dense tableau for  minimize cost.y  s.t.  T y = rhs, y >= 0, with an explicit basis.
struct Tableau {
  Eigen::MatrixXd T;
  Eigen::VectorXd rhs;
  std::vector<Eigen::Index> basis;

  void pivot(Eigen::Index row, Eigen::Index col) {
    const double p = T(row, col);
    T.row(row) /= p;
    rhs(row) /= p;
    for (Eigen::Index i = 0; i < T.rows(); ++i) {
      if (i == row) continue;
      const double f = T(i, col);
      if (f == 0.0) continue;
      T.row(i) -= f * T.row(row);
      rhs(i) -= f * rhs(row);
    }
    basis[static_cast<std::size_t>(row)] = col;
  }
};

enum class RunResult { optimal, unbounded, iteration_limit };

RunResult run(Tableau& tab, const Eigen::VectorXd& cost, Eigen::Index usable_cols, double tol,
              int max_iterations) {
  const Eigen::Index rows = tab.T.rows();
  int degenerate_streak = 0;
  for (int iter = 0; iter < max_iterations; ++iter) {
    Eigen::VectorXd cb(rows);
    for (Eigen::Index i = 0; i < rows; ++i) cb(i) = cost(tab.basis[static_cast<std::size_t>(i)]);
    const Eigen::RowVectorXd reduced =
        cost.head(usable_cols).transpose() - cb.transpose() * tab.T.leftCols(usable_cols);

    // Dantzig pricing, falling back to Bland's rule while degenerate pivots repeat.
    const bool bland = degenerate_streak > 50;
    Eigen::Index enter = -1;
    double best = -tol;
    for (Eigen::Index j = 0; j < usable_cols; ++j) {
      if (reduced(j) < best) {
        enter = j;
        if (bland) break;
        best = reduced(j);
      }
    }
    if (enter < 0) return RunResult::optimal;

    Eigen::Index leave = -1;
    double ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double a = tab.T(i, enter);
      if (a <= tol) continue;
      const double r = tab.rhs(i) / a;
      const bool tie = leave >= 0 && std::abs(r - ratio) <= tol;
      if ((!tie && r < ratio) ||
          (tie && tab.basis[static_cast<std::size_t>(i)] < tab.basis[static_cast<std::size_t>(leave)])) {
        ratio = std::min(ratio, r);
        leave = i;
      }
    }
    if (leave < 0) return RunResult::unbounded;
    degenerate_streak = ratio <= tol ? degenerate_streak + 1 : 0;
    tab.pivot(leave, enter);
  }
  return RunResult::iteration_limit;
}

}  // namespace

Solution maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const Options& options) {
  const Eigen::Index n = A.rows();  // dual variables
  const Eigen::Index d = A.cols();  // dual equality rows
  const double tol = options.tolerance;

  Solution out;
  out.z = Eigen::VectorXd::Zero(d);
  out.dual = Eigen::VectorXd::Zero(n);

  // Rows flipped so the right-hand side is nonnegative; artificials form the initial basis.
  Eigen::VectorXd flip = Eigen::VectorXd::Ones(d);
  Tableau tab;
  tab.T = Eigen::MatrixXd::Zero(d, n + d);
  tab.rhs = c;
  for (Eigen::Index k = 0; k < d; ++k) {
    if (c(k) < 0.0) flip(k) = -1.0;
    tab.T.row(k).head(n) = flip(k) * A.col(k).transpose();
    tab.rhs(k) *= flip(k);
    tab.T(k, n + k) = 1.0;
    tab.basis.push_back(n + k);
  }

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + d);
  phase1.tail(d).setOnes();
  const RunResult r1 = run(tab, phase1, n + d, tol, options.max_iterations);
  if (r1 == RunResult::iteration_limit) return out;
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < d; ++i)
    if (tab.basis[static_cast<std::size_t>(i)] >= n) infeas += tab.rhs(i);
  if (infeas > 1e-9 * std::max(1.0, c.cwiseAbs().maxCoeff())) {
    out.status = Status::unbounded;
    return out;
  }
  // Drive artificials out of the basis where possible.
  for (Eigen::Index i = 0; i < d; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    Eigen::Index col = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (std::abs(tab.T(i, j)) > best) {
        best = std::abs(tab.T(i, j));
        col = j;
      }
    }
    if (col >= 0) tab.pivot(i, col);
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + d);
  phase2.head(n) = b;
  // Artificials left in the basis sit on redundant rows at level zero and are never re-entered.
  const RunResult r2 = run(tab, phase2, n, tol, options.max_iterations);
  if (r2 == RunResult::iteration_limit) return out;
  if (r2 == RunResult::unbounded) {
    // Dual unbounded below means the primal is infeasible; cannot happen for
    // callers here, reported as an iteration failure.
    return out;
  }

  // Simplex multipliers of the dual are the primal solution.
  Eigen::MatrixXd basis_inv = tab.T.rightCols(d);
  Eigen::VectorXd cb(d);
  for (Eigen::Index i = 0; i < d; ++i) cb(i) = phase2(tab.basis[static_cast<std::size_t>(i)]);
  const Eigen::VectorXd pi = basis_inv.transpose() * cb;
  out.z = flip.cwiseProduct(pi);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index col = tab.basis[static_cast<std::size_t>(i)];
    if (col < n) out.dual(col) = std::max(0.0, tab.rhs(i));
  }
  out.value = c.dot(out.z);
  out.status = Status::optimal;
  return out;
}

}  // namespace fnb::lp
