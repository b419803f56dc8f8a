#pragma once

#include <Eigen/Core>

namespace fnb::lp {

enum class Status { optimal, unbounded, iteration_limit };

struct Solution {
  Status status = Status::iteration_limit;
  Eigen::VectorXd z;     // primal optimum
  Eigen::VectorXd dual;  // one nonnegative multiplier per row of A
  double value = 0.0;
};

struct Options {
  double tolerance = 1e-11;
  int max_iterations = 10000;
};

/// Solves  maximize c.z  subject to  A z <= b  with z free.
///
/// The problem is solved through its dual (minimize b.y, A^T y = c, y >= 0)
/// with a two-phase dense simplex. This is cheap when A has few columns and
/// many rows, which is the only shape used here. The primal is always feasible
/// for the callers in this project; an infeasible dual therefore means the
/// primal is unbounded.
Solution maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                  const Options& options = {});

}  // namespace fnb::lp
