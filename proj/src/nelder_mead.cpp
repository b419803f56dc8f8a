#include "fnb/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace fnb {

NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& o) {
  const Eigen::Index n = x0.size();
  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  if (n == 0) return {x0, eval(x0), evals};

  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> fs(xs.size());
  for (Eigen::Index i = 0; i < n; ++i) xs[static_cast<std::size_t>(i + 1)](i) += o.initial_step;
  // A budget smaller than the starting simplex only gets the first vertices.
  const auto start = std::min(xs.size(), static_cast<std::size_t>(std::max(o.max_evaluations, 1)));
  for (std::size_t i = 0; i < start; ++i) fs[i] = eval(xs[i]);
  if (start < xs.size()) {
    const auto best = static_cast<std::size_t>(std::min_element(fs.begin(), fs.begin() + static_cast<long>(start)) - fs.begin());
    return {xs[best], fs[best], evals};
  }

  std::vector<std::size_t> order(xs.size());
  while (evals < o.max_evaluations) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return fs[i] < fs[j]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];

    double size = 0.0;
    for (const auto& x : xs) size = std::max(size, (x - xs[best]).lpNorm<Eigen::Infinity>());
    if (size <= o.x_tolerance && fs[worst] - fs[best] <= o.f_tolerance) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (i != worst) centroid += xs[i];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd xr = centroid + (centroid - xs[worst]);
    const double fr = eval(xr);
    if (evals >= o.max_evaluations) {
      if (fr < fs[worst]) xs[worst] = xr, fs[worst] = fr;
      break;
    }
    if (fr < fs[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - xs[worst]);
      const double fe = eval(xe);
      if (fe < fr) xs[worst] = xe, fs[worst] = fe;
      else xs[worst] = xr, fs[worst] = fr;
      continue;
    }
    if (fr < fs[second]) {
      xs[worst] = xr, fs[worst] = fr;
      continue;
    }
    // Contract towards the better of the worst point and its reflection.
    const bool outside = fr < fs[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (xs[worst] - centroid));
    const double fc = eval(xc);
    if (fc < std::min(fr, fs[worst])) {
      xs[worst] = xc, fs[worst] = fc;
      continue;
    }
    if (evals + n > o.max_evaluations) break;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i == best) continue;
      xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
      fs[i] = eval(xs[i]);
    }
  }
  const auto it = std::min_element(fs.begin(), fs.end());
  const auto k = static_cast<std::size_t>(it - fs.begin());
  return {xs[k], fs[k], evals};
}

}  // namespace fnb
