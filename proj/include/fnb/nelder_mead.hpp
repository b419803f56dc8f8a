#pragma once

#include <functional>

#include <Eigen/Core>

namespace fnb {

struct NelderMeadOptions {
  int max_evaluations = 2000;
  double initial_step = 0.1;  // edge length of the starting simplex
  double x_tolerance = 1e-10;
  double f_tolerance = 1e-12;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evaluations = 0;
};

/// Plain Nelder-Mead (reflection 1, expansion 2, contraction 1/2, shrink 1/2)
/// from an axis-aligned starting simplex. Stops when the simplex is smaller
/// than x_tolerance and its values agree within f_tolerance, or on budget.
NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& options = {});

}  // namespace fnb
