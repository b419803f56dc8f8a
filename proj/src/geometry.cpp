#include "fnb/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "fnb/lp.hpp"

namespace fnb {

double PointSet::diameter() const { return geom::euclidean_diameter(*this); }

Point PointSet::centroid() const {
  if (empty()) return Point::Zero(dim());
  return coords_.rowwise().mean();
}

namespace geom {

std::optional<Sphere> circumsphere(std::span<const Point> points, double rank_tol) {
  const std::size_t k = points.size();
  if (k < 2) throw InvalidArgument("circumsphere: need at least two points");
  const Eigen::Index m = points[0].size();
  if (k > static_cast<std::size_t>(m) + 1) throw InvalidArgument("circumsphere: more than m+1 points");

  const Point& origin = points[0];
  Eigen::MatrixXd U(m, static_cast<Eigen::Index>(k - 1));
  for (std::size_t i = 1; i < k; ++i) U.col(static_cast<Eigen::Index>(i - 1)) = points[i] - origin;
  const double scale = U.colwise().norm().maxCoeff();

  if (k == 2 && scale <= rank_tol * std::max(1.0, origin.cwiseAbs().maxCoeff()))
    return Sphere{origin, 0.0};
  if (scale == 0.0) return std::nullopt;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(U / scale);
  qr.setThreshold(rank_tol);
  if (qr.rank() < U.cols()) return std::nullopt;

  // Center c = origin + U lambda with |c - p_i| = |c - origin|, i.e. U^T U lambda = |u_i|^2 / 2.
  const Eigen::MatrixXd G = U.transpose() * U;
  const Eigen::VectorXd rhs = 0.5 * G.diagonal();
  const Eigen::VectorXd lambda = G.ldlt().solve(rhs);
  const Point offset = U * lambda;
  return Sphere{origin + offset, offset.norm()};
}

double chord_from_angle(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw InvalidArgument("chord_from_angle: angle outside [0, pi]");
  return 2.0 * std::sin(0.5 * theta);
}

double angle_from_chord(double chord) {
  constexpr double slack = 1e-12;
  if (!(chord >= -slack && chord <= 2.0 + slack))
    throw InvalidArgument("angle_from_chord: chord outside [0, 2]");
  return 2.0 * std::asin(std::clamp(0.5 * chord, 0.0, 1.0));
}

double angular_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b) {
  // atan2 form stays accurate for nearly equal and nearly antipodal pairs.
  const double s = (a - b).norm();
  const double t = (a + b).norm();
  return 2.0 * std::atan2(s, t);
}

double angular_diameter(const PointSet& points) {
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, angular_distance(points[i], points[j]));
  return best;
}

double euclidean_diameter(const PointSet& points) {
  double best = 0.0;
  const auto& M = points.matrix();
  for (Eigen::Index i = 0; i < M.cols(); ++i)
    for (Eigen::Index j = i + 1; j < M.cols(); ++j)
      best = std::max(best, (M.col(i) - M.col(j)).squaredNorm());
  return std::sqrt(best);
}

EdgeLengths regular_edge_lengths(int n) {
  if (n < 1) throw InvalidArgument("regular_edge_lengths: n must be >= 1");
  const double nd = n;
  return {std::sqrt(2.0 * (nd + 2.0) / (nd + 1.0)),
          2.0 * std::asin(std::sqrt((nd + 2.0) / (2.0 * (nd + 1.0))))};
}

double neighbor_distance_bound(int n) {
  if (n < 1) throw InvalidArgument("neighbor_distance_bound: n must be >= 1");
  return std::sqrt((n + 2.0) / n);
}

double dekster_diameter_bound(int n, double circ) {
  if (n < 2) throw InvalidArgument("dekster_diameter_bound: n must be >= 2");
  if (!(circ >= 0.0 && circ <= 0.5 * std::numbers::pi + 1e-12))
    throw InvalidArgument("dekster_diameter_bound: circumradius outside [0, pi/2]");
  const double arg = std::sqrt((n + 1.0) / (2.0 * n)) * std::sin(circ);
  if (arg > 1.0 + 1e-12) throw InvalidArgument("dekster_diameter_bound: arcsin argument exceeds 1");
  return 2.0 * std::asin(std::min(arg, 1.0));
}

bool in_open_hemisphere(const PointSet& points, Point* pole, double tol) {
  const Eigen::Index d = points.dim();
  const auto n = static_cast<Eigen::Index>(points.size());
  // maximize t  s.t.  t - <u, p_i> <= 0,  |u_k| <= 1,  t <= 1
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 2 * d + 1, d + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(A.rows());
  for (Eigen::Index i = 0; i < n; ++i) {
    A.row(i).head(d) = -points[static_cast<std::size_t>(i)].transpose();
    A(i, d) = 1.0;
  }
  for (Eigen::Index k = 0; k < d; ++k) {
    A(n + 2 * k, k) = 1.0;
    A(n + 2 * k + 1, k) = -1.0;
    b(n + 2 * k) = b(n + 2 * k + 1) = 1.0;
  }
  A(n + 2 * d, d) = 1.0;
  b(n + 2 * d) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c(d) = 1.0;
  const auto sol = lp::maximize(A, b, c);
  if (sol.status != lp::Status::optimal) return false;
  if (pole) *pole = sol.z.head(d).normalized();
  return sol.z(d) > tol;
}

namespace {

// Minimum-norm point of the affine hull of the columns of P (weights sum to 1).
Eigen::VectorXd affine_min_norm_weights(const Eigen::MatrixXd& P) {
  const Eigen::Index k = P.cols();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k + 1, k + 1);
  K.topLeftCorner(k, k) = P.transpose() * P;
  K.block(0, k, k, 1).setOnes();
  K.block(k, 0, 1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs(k) = 1.0;
  return K.fullPivLu().solve(rhs).head(k);
}

// Wolfe's algorithm for the minimum-norm point of conv(points).
Eigen::VectorXd wolfe_min_norm(const Eigen::MatrixXd& pts) {
  const double tol = 1e-13;
  Eigen::Index start = 0;
  pts.colwise().squaredNorm().minCoeff(&start);
  std::vector<Eigen::Index> active{start};
  Eigen::VectorXd weights = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = pts.col(start);

  for (int outer = 0; outer < 1000; ++outer) {
    Eigen::Index j = 0;
    (x.transpose() * pts).minCoeff(&j);
    if (x.squaredNorm() - x.dot(pts.col(j)) <= tol) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    weights.conservativeResize(static_cast<Eigen::Index>(active.size()));
    weights(weights.size() - 1) = 0.0;

    for (int inner = 0; inner < 1000; ++inner) {
      Eigen::MatrixXd P(pts.rows(), static_cast<Eigen::Index>(active.size()));
      for (std::size_t a = 0; a < active.size(); ++a) P.col(static_cast<Eigen::Index>(a)) = pts.col(active[a]);
      const Eigen::VectorXd alpha = affine_min_norm_weights(P);
      if (alpha.minCoeff() > tol) {
        weights = alpha;
        x = P * alpha;
        break;
      }
      double theta = 1.0;
      for (Eigen::Index a = 0; a < alpha.size(); ++a)
        if (alpha(a) <= tol) theta = std::min(theta, weights(a) / (weights(a) - alpha(a)));
      weights = theta * alpha + (1.0 - theta) * weights;
      std::vector<Eigen::Index> kept;
      std::vector<double> kept_w;
      for (Eigen::Index a = 0; a < weights.size(); ++a) {
        if (weights(a) > tol) {
          kept.push_back(active[static_cast<std::size_t>(a)]);
          kept_w.push_back(weights(a));
        }
      }
      active = kept;
      weights = Eigen::Map<Eigen::VectorXd>(kept_w.data(), static_cast<Eigen::Index>(kept_w.size()));
      weights /= weights.sum();
      x.setZero();
      for (std::size_t a = 0; a < active.size(); ++a) x += weights(static_cast<Eigen::Index>(a)) * pts.col(active[a]);
    }
  }
  return x;
}

double max_angle_from(const Point& center, const PointSet& points) {
  double r = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) r = std::max(r, angular_distance(center, points[i]));
  return r;
}

template <typename F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 0; i < k; ++i) r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

// Pole u with <u, p_i> >= 0 for all i, if any. Maximizing sum <u, p_i> over the
// box finds one unless every such pole is orthogonal to all points, in which
// case the points span a proper subspace and its normal works.
std::optional<Point> closed_hemisphere_pole(const PointSet& points, double tol) {
  const Eigen::Index d = points.dim();
  const auto n = static_cast<Eigen::Index>(points.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 2 * d, d);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(A.rows());
  A.topRows(n) = -points.matrix().transpose();
  for (Eigen::Index k = 0; k < d; ++k) {
    A(n + 2 * k, k) = 1.0;
    A(n + 2 * k + 1, k) = -1.0;
    b(n + 2 * k) = b(n + 2 * k + 1) = 1.0;
  }
  const auto sol = lp::maximize(A, b, points.matrix().rowwise().sum());
  if (sol.status == lp::Status::optimal && sol.value > tol) return Point(sol.z.normalized());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(points.matrix(), Eigen::ComputeFullU);
  const Point normal = svd.matrixU().col(d - 1);
  if ((points.matrix().transpose() * normal).cwiseAbs().maxCoeff() <= tol) return normal;
  return std::nullopt;
}

}  // namespace

AngularBall min_enclosing_ball_angular(const PointSet& points, const Tolerances& tol) {
  if (points.empty()) throw InvalidArgument("min_enclosing_ball_angular: empty input");
  for (std::size_t i = 0; i < points.size(); ++i)
    if (std::abs(points[i].norm() - 1.0) > tol.unit)
      throw InvalidArgument("min_enclosing_ball_angular: point not on the unit sphere");
  if (points.size() == 1) return {points[0], 0.0};
  if (!in_open_hemisphere(points)) {
    // In a closed hemisphere only: no center beats pi/2, and its pole attains it.
    if (auto pole = closed_hemisphere_pole(points, tol.unit)) return {*pole, max_angle_from(*pole, points)};
    throw GeometryError("not-in-hemisphere");
  }

  const Eigen::VectorXd q = wolfe_min_norm(points.matrix());
  AngularBall best{q.normalized(), 0.0};
  best.radius = max_angle_from(best.center, points);

  const std::size_t n = points.size();
  const std::size_t max_subset = std::min<std::size_t>(static_cast<std::size_t>(points.dim()), n);
  double subsets = 0.0;
  for (std::size_t k = 1; k <= max_subset; ++k) subsets += binomial(n, k);
  if (subsets <= 2e5) {
    for (std::size_t k = 1; k <= max_subset; ++k) {
      for_each_subset(n, k, [&](const std::vector<std::size_t>& idx) {
        Eigen::MatrixXd P(points.dim(), static_cast<Eigen::Index>(k));
        for (std::size_t a = 0; a < k; ++a) P.col(static_cast<Eigen::Index>(a)) = points[idx[a]];
        const Eigen::VectorXd w = affine_min_norm_weights(P);
        if (!w.allFinite() || w.minCoeff() < -1e-12) return;
        const Eigen::VectorXd y = P * w;
        if (y.norm() <= 1e-12) return;
        const Point c = y.normalized();
        const double r = max_angle_from(c, points);
        if (r < best.radius - 1e-15) best = {c, r};
      });
    }
  }
  return best;
}

}  // namespace geom
}  // namespace fnb
