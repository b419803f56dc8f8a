#include "fnb/neighbors.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fnb/empty_spheres.hpp"
#include "fnb/lp.hpp"
#include "fnb/parallel.hpp"

namespace fnb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Spheres bigger than this many image diameters stand in for half-spaces.
constexpr double kHalfspaceRadius = 1e6;

double safe_scale(double diameter) { return diameter > 0.0 && std::isfinite(diameter) ? diameter : 1.0; }

double max_rho(const std::vector<std::size_t>& idx, const SampledDomain* domain) {
  if (!domain) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = i + 1; j < idx.size(); ++j) best = std::max(best, domain->rho(idx[i], idx[j]));
  return best;
}

// Minimum of |c - y| - r over the images not listed in `skip`.
double slack_of(const ImageSet& images, const Point& c, double r, const std::vector<std::size_t>& skip) {
  double s = kInf;
  for (std::size_t j = 0; j < images.size(); ++j) {
    if (std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
    s = std::min(s, (images[j] - c).norm() - r);
  }
  return s;
}

// Orthonormal basis of the orthogonal complement of v (columns).
Eigen::MatrixXd complement_basis(const Eigen::VectorXd& v) {
  const Eigen::Index m = v.size();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(v);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(m, m);
  return Q.rightCols(m - 1);
}

NeighborCertificate pair_certificate(std::size_t a, std::size_t b, const ImageSet& images, const Point& c, double r,
                                     double diameter, const SampledDomain* domain) {
  NeighborCertificate cert;
  cert.indices = {std::min(a, b), std::max(a, b)};
  cert.witness = {c, r};
  cert.kind = r > kHalfspaceRadius * safe_scale(diameter) ? WitnessKind::halfspace : WitnessKind::sphere;
  cert.slack = slack_of(images, c, r, cert.indices);
  cert.pair_distance = max_rho(cert.indices, domain);
  return cert;
}

}  // namespace

AbsoluteTolerances AbsoluteTolerances::from(const NeighborConfig& cfg, double diameter) {
  const double s = safe_scale(diameter);
  return {cfg.eps_inside * s, cfg.eps_coincide * s, cfg.tau_on * s, cfg.eps_witness * s};
}

std::string to_string(WitnessKind kind) {
  switch (kind) {
    case WitnessKind::sphere: return "sphere";
    case WitnessKind::coincidence: return "coincidence";
    case WitnessKind::halfspace: return "halfspace";
  }
  return "unknown";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::uncertain: return "uncertain";
  }
  return "unknown";
}

OracleResult pair_is_neighbor_oracle(std::size_t a, std::size_t b, const ImageSet& images, const NeighborConfig& cfg) {
  const std::size_t N = images.size();
  const Eigen::Index m = images.dim();
  if (m > 3 || N > 14) throw InvalidArgument("pair_is_neighbor_oracle: beyond oracle scale (m <= 3, <= 14 points)");
  if (a >= N || b >= N || a == b) throw InvalidArgument("pair_is_neighbor_oracle: bad index pair");
  const auto tol = AbsoluteTolerances::from(cfg, images.diameter());
  const Point fa = images[a], fb = images[b];
  if ((fa - fb).norm() <= tol.eps_coincide) return {true, WitnessKind::coincidence, geom::Sphere{fa, 0.0}};

  std::vector<std::size_t> others;
  for (std::size_t j = 0; j < N; ++j)
    if (j != a && j != b) others.push_back(j);

  auto empty = [&](const Point& c) {
    const double r = (c - fa).norm();
    for (std::size_t j : others)
      if ((images[j] - c).norm() < r - tol.tau_on) return false;
    return true;
  };

  const Point mid = 0.5 * (fa + fb);
  if (empty(mid)) return {true, WitnessKind::sphere, geom::Sphere{mid, 0.5 * (fa - fb).norm()}};

  // Spheres through a, b and a subset S of the rest, |S| <= m - 1.
  std::vector<Point> pts;
  auto visit = [&](auto&& self, std::size_t start, int depth) -> std::optional<geom::Sphere> {
    if (depth > 0) {
      if (auto s = geom::circumsphere(pts); s && empty(s->center)) return s;
    }
    if (depth == m - 1) return std::nullopt;
    for (std::size_t k = start; k < others.size(); ++k) {
      pts.push_back(images[others[k]]);
      auto s = self(self, k + 1, depth + 1);
      pts.pop_back();
      if (s) return s;
    }
    return std::nullopt;
  };
  pts = {fa, fb};
  if (auto s = visit(visit, 0, 0)) return {true, WitnessKind::sphere, s};

  // Limiting half-space: a hyperplane through a and b with every other image
  // on one closed side; images on the hyperplane must avoid the open
  // diametral ball, since that is what the limiting balls cut out of it.
  if (m >= 2) {
    const Eigen::MatrixXd Q = complement_basis(fb - fa);
    std::vector<Eigen::VectorXd> proj;
    for (std::size_t j : others) proj.push_back(Q.transpose() * (images[j] - fa));
    std::vector<Eigen::VectorXd> dirs;
    if (m == 2) {
      dirs = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
    } else {
      std::vector<Eigen::VectorXd> base;
      for (const auto& p : proj) {
        if (p.norm() <= tol.tau_on) continue;
        Eigen::Vector2d perp(-p(1), p(0));
        perp.normalize();
        base.push_back(perp);
        base.push_back(-perp);
      }
      if (base.empty()) base.push_back(Eigen::Vector2d(1.0, 0.0));
      dirs = base;
      for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i + 1; j < base.size(); ++j)
          if (const Eigen::VectorXd s = base[i] + base[j]; s.norm() > 1e-12) dirs.push_back(s.normalized());
    }
    const double half = 0.5 * (fb - fa).norm();
    for (const auto& d : dirs) {
      bool ok = true;
      for (std::size_t k = 0; k < others.size() && ok; ++k) {
        const double s = proj[k].dot(d);
        if (s > tol.tau_on) ok = false;
        else if (s >= -tol.tau_on && (images[others[k]] - mid).norm() < half - tol.tau_on) ok = false;
      }
      if (ok) return {true, WitnessKind::halfspace, std::nullopt};
    }
  }
  return {false, WitnessKind::sphere, std::nullopt};
}

FastResult pair_is_neighbor_fast(std::size_t a, std::size_t b, const ImageSet& images, const NeighborConfig& cfg,
                                 const SampledDomain* domain) {
  const std::size_t N = images.size();
  if (a >= N || b >= N || a == b) throw InvalidArgument("pair_is_neighbor_fast: bad index pair");
  const Eigen::Index m = images.dim();
  // A bounding-box diagonal is within sqrt(m) of the diameter and linear to compute.
  const double scale = safe_scale((images.matrix().rowwise().maxCoeff() - images.matrix().rowwise().minCoeff()).norm());
  const auto tol = AbsoluteTolerances::from(cfg, scale);
  const Point fa = images[a], fb = images[b];
  const double ab = (fb - fa).norm();

  FastResult out;
  if (ab <= tol.eps_coincide) {
    NeighborCertificate cert;
    cert.indices = {std::min(a, b), std::max(a, b)};
    cert.kind = WitnessKind::coincidence;
    cert.witness = {fa, 0.0};
    cert.slack = slack_of(images, fa, 0.0, cert.indices);
    cert.pair_distance = max_rho(cert.indices, domain);
    out.verdict = Verdict::yes;
    out.margin = kInf;
    out.certificate = std::move(cert);
    return out;
  }

  // Gabriel fast path: empty diametral ball.
  const Point mid = 0.5 * (fa + fb);
  {
    auto cert = pair_certificate(a, b, images, mid, 0.5 * ab, scale, domain);
    if (cert.slack >= -tol.tau_on) {
      out.verdict = Verdict::yes;
      out.margin = cert.slack;
      out.certificate = std::move(cert);
      return out;
    }
  }

  if (m == 1) {
    out.verdict = Verdict::no;  // the midpoint is the only center on the line
    out.margin = -kInf;
    return out;
  }

  // Work relative to f(a) in units of `scale`. A center c = mid + Q z clears
  // image y by t (distance from c to the bisector of a and y) iff
  //   2<c, y'> + 2|y'| t <= |y'|^2,   y' = y - a.
  const Eigen::MatrixXd Q = complement_basis((fb - fa) / scale);
  const Eigen::VectorXd mid_rel = 0.5 * (fb - fa) / scale;
  const Eigen::Index k = m - 1;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(N - 2) + 1, k + 1);
  Eigen::VectorXd rhs(A.rows());
  Eigen::Index row = 0;
  for (std::size_t j = 0; j < N; ++j) {
    if (j == a || j == b) continue;
    const Eigen::VectorXd y = (images[j] - fa) / scale;
    A.row(row).head(k) = 2.0 * (Q.transpose() * y).transpose();
    A(row, k) = 2.0 * y.norm();
    rhs(row) = y.squaredNorm() - 2.0 * mid_rel.dot(y);
    ++row;
  }
  A.row(row).setZero();
  A(row, k) = 1.0;  // cap the clearance so the program stays bounded
  rhs(row) = 1.0;
  Eigen::VectorXd objective = Eigen::VectorXd::Zero(k + 1);
  objective(k) = 1.0;

  const auto sol = lp::maximize(A, rhs, objective);
  if (sol.status != lp::Status::optimal) {
    out.verdict = Verdict::uncertain;
    return out;
  }
  out.margin = sol.value * scale;
  const Point c = fa + scale * (mid_rel + Q * sol.z.head(k));
  auto cert = pair_certificate(a, b, images, c, (c - fa).norm(), scale, domain);
  if (out.margin > tol.tau_on || cert.slack >= -tol.tau_on) {
    out.verdict = Verdict::yes;
    out.certificate = std::move(cert);
  } else if (out.margin < -tol.tau_on) {
    out.verdict = Verdict::no;
  } else {
    out.verdict = Verdict::uncertain;
  }
  return out;
}

std::vector<NeighborCertificate> neighbor_graph(const ImageSet& images, const SampledDomain& domain,
                                                const NeighborConfig& cfg) {
  if (images.size() != domain.size()) throw InvalidArgument("neighbor_graph: images not aligned with the domain");
  const std::size_t N = images.size();
  std::vector<NeighborCertificate> certs;
  if (N < 2) return certs;
  const double diameter = images.diameter();
  const auto tol = AbsoluteTolerances::from(cfg, diameter);

  if (diameter <= tol.eps_coincide) {
    NeighborCertificate cert;
    cert.indices.resize(N);
    std::iota(cert.indices.begin(), cert.indices.end(), 0);
    cert.kind = WitnessKind::coincidence;
    cert.witness = {images[0], 0.0};
    cert.slack = kInf;
    cert.pair_distance = max_rho(cert.indices, &domain);
    certs.push_back(std::move(cert));
    return certs;
  }

  EmptySphereOptions opts;
  opts.tau_on = tol.tau_on;
  opts.eps_inside = tol.eps_inside;
  opts.eps_coincide = tol.eps_coincide;
  opts.threads = cfg.threads;
  auto complex = empty_spheres(images, opts);

  if (complex.complete) {
    certs.resize(complex.spheres.size());
    parallel_for(certs.size(), cfg.threads, [&](std::size_t i) {
      auto& s = complex.spheres[i];
      NeighborCertificate& cert = certs[i];
      cert.indices = s.members;
      cert.kind = s.radius <= tol.eps_coincide                     ? WitnessKind::coincidence
                  : s.radius > kHalfspaceRadius * safe_scale(diameter) ? WitnessKind::halfspace
                                                                    : WitnessKind::sphere;
      cert.witness = {s.center, s.radius};
      cert.slack = s.slack;
      cert.pair_distance = max_rho(cert.indices, &domain);
    });
  } else {
    // Too many dimensions to enumerate spheres: one linear program per pair.
    std::vector<std::vector<NeighborCertificate>> rows(N);
    parallel_for(N, cfg.threads, [&](std::size_t a) {
      for (std::size_t b = a + 1; b < N; ++b) {
        auto r = pair_is_neighbor_fast(a, b, images, cfg, &domain);
        if (r.verdict == Verdict::yes) rows[a].push_back(std::move(*r.certificate));
      }
    });
    for (auto& r : rows)
      for (auto& c : r) certs.push_back(std::move(c));
  }
  std::sort(certs.begin(), certs.end(),
            [](const NeighborCertificate& x, const NeighborCertificate& y) { return x.indices < y.indices; });
  return certs;
}

double compute_df(const std::vector<NeighborCertificate>& certs, const SampledDomain& domain) {
  double best = 0.0;
  for (const auto& c : certs) best = std::max(best, max_rho(c.indices, &domain));
  return best;
}

bool certificate_is_sound(const NeighborCertificate& cert, const ImageSet& images, const NeighborConfig& cfg) {
  if (cert.indices.size() < 2) return false;
  const double scale = safe_scale(images.diameter());
  const auto tol = AbsoluteTolerances::from(cfg, scale);
  const auto& w = cert.witness;
  // Distances to a huge center lose digits; allow for that.
  const double on = tol.tau_on + 1e-15 * w.radius;
  for (std::size_t i : cert.indices) {
    if (i >= images.size()) return false;
    if (std::abs((images[i] - w.center).norm() - w.radius) > (cert.kind == WitnessKind::coincidence ? tol.eps_coincide : on))
      return false;
  }
  for (std::size_t j = 0; j < images.size(); ++j)
    if ((images[j] - w.center).norm() < w.radius - tol.eps_inside - 1e-15 * w.radius) return false;
  return true;
}

double discretization_allowance(const SampledDomain& domain, const ImageSet& images) {
  return 2.0 * modulus_of_continuity(domain, images) * mesh_size(domain);
}

}  // namespace fnb
