#include "fnb/cover_homotopy.hpp"

#include <Eigen/Geometry>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fnb/hull3.hpp"

namespace fnb {

namespace {

// rho(x, C_i) for every sample x and element i (rows: samples).
Eigen::MatrixXd element_distances(const SampledDomain& domain, const CoverAssignment& cover) {
  const std::size_t N = domain.size();
  if (cover.labels.size() != N) throw InvalidArgument("cover does not match the domain");
  if (cover.element_count < 2) throw InvalidArgument("cover needs at least two elements");
  Eigen::MatrixXd D = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(N), cover.element_count,
                                                std::numeric_limits<double>::infinity());
  const auto& X = domain.samples.matrix();
  for (int i = 0; i < cover.element_count; ++i) {
    const auto members = cover.members(i);
    if (members.empty()) throw InvalidArgument("cover element " + std::to_string(i) + " has no samples");
    for (std::size_t x = 0; x < N; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t y : members)
        best = std::min(best, (X.col(static_cast<Eigen::Index>(x)) - X.col(static_cast<Eigen::Index>(y))).squaredNorm());
      D(static_cast<Eigen::Index>(x), i) = std::sqrt(best);
    }
  }
  return D;
}

// Coordinates of the samples in their own affine hull of dimension k, centered.
Eigen::MatrixXd affine_coordinates(const SampledDomain& domain, int k) {
  const Eigen::MatrixXd& X = domain.samples.matrix();
  if (X.rows() == k) return X.colwise() - X.rowwise().mean();
  const Eigen::MatrixXd Xc = X.colwise() - X.rowwise().mean();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xc, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(k).transpose() * Xc;
}

double angle_between(const Eigen::Vector3d& a, const Eigen::Vector3d& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

}  // namespace

double common_thickening_radius(const SampledDomain& domain, const CoverAssignment& cover) {
  return element_distances(domain, cover).rowwise().maxCoeff().minCoeff();
}

PartitionOfUnity build_partition(const SampledDomain& domain, const CoverAssignment& cover, double r_thick) {
  if (!(r_thick > 0.0)) throw InvalidArgument("build_partition: r_thick must be positive");
  const Eigen::MatrixXd D = element_distances(domain, cover);
  PartitionOfUnity pou;
  pou.r_thick = r_thick;
  const Eigen::Index n = cover.element_count;
  for (Eigen::Index x = 0; x < D.rows(); ++x) {
    Eigen::VectorXd g = (r_thick - D.row(x).array()).max(0.0).matrix().transpose();
    const double total = g.sum();
    if (!(total > 0.0)) throw GeometryError("cover-degenerate");
    g /= total;
    std::vector<int> support;
    for (Eigen::Index i = 0; i < n; ++i)
      if (g(i) > 0.0) support.push_back(static_cast<int>(i));
    if (static_cast<Eigen::Index>(support.size()) == n) throw GeometryError("cover-degenerate");
    pou.values.push_back(std::move(g));
    pou.support.push_back(std::move(support));
  }
  return pou;
}

std::vector<Eigen::VectorXd> h_map(const PartitionOfUnity& pou) {
  for (const auto& phi : pou.values)
    if (phi.minCoeff() > 0.0) throw GeometryError("interior-hit");
  return pou.values;
}

std::vector<Eigen::VectorXd> project_to_sphere(const std::vector<Eigen::VectorXd>& h) {
  std::vector<Eigen::VectorXd> out;
  if (h.empty()) return out;
  const Eigen::Index n = h.front().size();
  // Orthonormal basis of {sum = 0}: the last n-1 columns of a QR of the all-ones vector.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Eigen::MatrixXd::Ones(n, 1));
  const Eigen::MatrixXd B = (qr.householderQ() * Eigen::MatrixXd::Identity(n, n)).rightCols(n - 1);
  const Eigen::VectorXd bary = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (const auto& v : h) {
    Eigen::VectorXd y = B.transpose() * (v - bary);
    const double len = y.norm();
    if (!(len > 0.0)) throw GeometryError("interior-hit");
    out.push_back(y / len);
  }
  return out;
}

HomotopyEstimate winding_number(const std::vector<Eigen::VectorXd>& loop) {
  HomotopyEstimate est;
  if (loop.size() < 2) return est;
  double total = 0.0;
  for (std::size_t k = 0; k < loop.size(); ++k) {
    const auto& a = loop[k];
    const auto& b = loop[(k + 1) % loop.size()];
    if (a.size() != 2 || b.size() != 2) throw InvalidArgument("winding_number: loop must live in R^2");
    const double step = std::atan2(a(0) * b(1) - a(1) * b(0), a.dot(b));
    if (std::abs(step) >= std::numbers::pi / 2) throw GeometryError("undersampled");
    total += step;
  }
  est.raw_sum = total / (2 * std::numbers::pi);
  est.degree = static_cast<int>(std::lround(est.raw_sum));
  est.confidence = std::max(0.0, 1.0 - 2.0 * std::abs(est.raw_sum - est.degree));
  return est;
}

HomotopyEstimate mesh_degree(const std::vector<Eigen::VectorXd>& values, const std::vector<std::array<int, 3>>& triangles) {
  HomotopyEstimate est;
  double total = 0.0;
  for (const auto& t : triangles) {
    Eigen::Vector3d p[3];
    for (int k = 0; k < 3; ++k) {
      const auto& v = values.at(static_cast<std::size_t>(t[static_cast<std::size_t>(k)]));
      if (v.size() != 3) throw InvalidArgument("mesh_degree: values must live in R^3");
      p[k] = v.normalized();
    }
    const double diam = std::max({angle_between(p[0], p[1]), angle_between(p[1], p[2]), angle_between(p[0], p[2])});
    if (diam >= std::numbers::pi / 2) throw GeometryError("undersampled");
    // Signed solid angle (Van Oosterom-Strackee).
    const double num = p[0].dot(p[1].cross(p[2]));
    const double den = 1.0 + p[0].dot(p[1]) + p[1].dot(p[2]) + p[2].dot(p[0]);
    total += 2.0 * std::atan2(num, den);
  }
  est.raw_sum = total / (4 * std::numbers::pi);
  est.degree = static_cast<int>(std::lround(est.raw_sum));
  est.confidence = std::max(0.0, 1.0 - 2.0 * std::abs(est.raw_sum - est.degree));
  return est;
}

std::vector<std::size_t> domain_loop(const SampledDomain& domain) {
  if (domain.intrinsic_dim() != 1) throw InvalidArgument("domain_loop: domain is not one-dimensional");
  const Eigen::MatrixXd Y = affine_coordinates(domain, 2);
  std::vector<double> angle(domain.size());
  for (std::size_t i = 0; i < angle.size(); ++i)
    angle[i] = std::atan2(Y(1, static_cast<Eigen::Index>(i)), Y(0, static_cast<Eigen::Index>(i)));
  std::vector<std::size_t> order(domain.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return angle[i] < angle[j]; });
  return order;
}

std::vector<std::array<int, 3>> domain_mesh(const SampledDomain& domain) {
  if (domain.intrinsic_dim() != 2) throw InvalidArgument("domain_mesh: domain is not two-dimensional");
  const Eigen::MatrixXd Y = affine_coordinates(domain, 3);
  std::vector<Eigen::Vector3d> pts(domain.size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = Y.col(static_cast<Eigen::Index>(i)).normalized();
  return convex_hull_3d(pts);
}

std::string to_string(CoverClass c) {
  switch (c) {
    case CoverClass::non_null_homotopic: return "non_null_homotopic";
    case CoverClass::null_homotopic: return "null_homotopic";
    case CoverClass::inconclusive: return "inconclusive";
  }
  return "unknown";
}

CoverCertificate certify_cover(const SampledDomain& domain, const CoverAssignment& cover, double r_thick) {
  CoverCertificate cert;
  const int xdim = domain.intrinsic_dim();
  if (xdim != cover.element_count - 2) {
    cert.reason = "dimension mismatch: dim X = " + std::to_string(xdim) + ", cover size = " +
                  std::to_string(cover.element_count);
    return cert;
  }
  if (xdim != 1 && xdim != 2) {
    cert.reason = "degree only decides dim X in {1, 2}";
    return cert;
  }
  const double base = common_thickening_radius(domain, cover);
  if (!(base > 0.0)) {
    cert.reason = "cover-degenerate: the elements have a common sample";
    return cert;
  }
  cert.r_thick = {r_thick > 0.0 ? r_thick : 0.6 * base, 0.5 * base, 0.75 * base};

  const auto loop = xdim == 1 ? domain_loop(domain) : std::vector<std::size_t>{};
  const auto mesh = xdim == 2 ? domain_mesh(domain) : std::vector<std::array<int, 3>>{};
  for (double r : cert.r_thick) {
    try {
      const auto s = project_to_sphere(h_map(build_partition(domain, cover, r)));
      if (xdim == 1) {
        std::vector<Eigen::VectorXd> ordered;
        for (std::size_t i : loop) ordered.push_back(s[i]);
        cert.estimates.push_back(winding_number(ordered));
      } else {
        cert.estimates.push_back(mesh_degree(s, mesh));
      }
    } catch (const GeometryError& e) {
      cert.reason = std::string(e.what()) + " at r_thick = " + std::to_string(r);
      if (!cert.estimates.empty()) cert.estimate = cert.estimates.front();
      return cert;
    }
  }
  cert.estimate = cert.estimates.front();
  for (const auto& e : cert.estimates) {
    if (e.degree != cert.estimate.degree) {
      cert.reason = "degree depends on the thickening";
      return cert;
    }
    if (e.confidence < 0.9) {
      cert.reason = "low confidence";
      return cert;
    }
  }
  cert.verdict = cert.estimate.degree != 0 ? CoverClass::non_null_homotopic : CoverClass::null_homotopic;
  return cert;
}

}  // namespace fnb
