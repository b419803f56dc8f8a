#include "fnb/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/special_functions/erf.hpp>

#include "fnb/rng.hpp"

namespace fnb {

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::sphere: return "sphere";
    case DomainKind::simplex_boundary: return "simplex_boundary";
    case DomainKind::cube_boundary: return "cube_boundary";
  }
  return "unknown";
}

std::string to_string(SamplingScheme scheme) {
  switch (scheme) {
    case SamplingScheme::uniform_random: return "uniform_random";
    case SamplingScheme::quasi_uniform: return "quasi_uniform";
    case SamplingScheme::lattice: return "lattice";
  }
  return "unknown";
}

DomainKind parse_domain_kind(const std::string& name) {
  if (name == "sphere") return DomainKind::sphere;
  if (name == "simplex" || name == "simplex_boundary") return DomainKind::simplex_boundary;
  if (name == "cube" || name == "cube_boundary") return DomainKind::cube_boundary;
  throw InvalidArgument("unknown domain kind: " + name);
}

SamplingScheme parse_scheme(const std::string& name) {
  if (name == "uniform_random" || name == "random") return SamplingScheme::uniform_random;
  if (name == "quasi_uniform" || name == "quasi") return SamplingScheme::quasi_uniform;
  if (name == "lattice") return SamplingScheme::lattice;
  throw InvalidArgument("unknown sampling scheme: " + name);
}

int SampledDomain::intrinsic_dim() const {
  switch (kind) {
    case DomainKind::sphere: return param;
    case DomainKind::simplex_boundary: return param - 2;
    case DomainKind::cube_boundary: return param - 1;
  }
  return 0;
}

double SampledDomain::diameter() const {
  switch (kind) {
    case DomainKind::sphere: return 2.0;
    case DomainKind::simplex_boundary: return std::sqrt(2.0);
    case DomainKind::cube_boundary: return std::sqrt(static_cast<double>(param));
  }
  return 0.0;
}

bool CoverAssignment::has(std::size_t sample, int element) const {
  const auto& l = labels[sample];
  return std::find(l.begin(), l.end(), element) != l.end();
}

std::vector<std::size_t> CoverAssignment::members(int element) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (has(i, element)) out.push_back(i);
  return out;
}

namespace {

double radical_inverse(std::uint64_t k, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (k > 0) {
    r += f * static_cast<double>(k % base);
    k /= base;
    f *= inv;
  }
  return r;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

void append_antipodes(PointSet& pts, std::optional<std::vector<std::size_t>>& antipode, std::size_t half) {
  Eigen::MatrixXd M(pts.dim(), static_cast<Eigen::Index>(2 * half));
  M.leftCols(static_cast<Eigen::Index>(half)) = pts.matrix();
  M.rightCols(static_cast<Eigen::Index>(half)) = -pts.matrix();
  pts = PointSet(std::move(M));
  std::vector<std::size_t> map(2 * half);
  for (std::size_t i = 0; i < half; ++i) {
    map[i] = i + half;
    map[i + half] = i;
  }
  antipode = std::move(map);
}

}  // namespace

SampledDomain sample_sphere(int n, std::size_t N, std::uint64_t seed, SamplingScheme scheme) {
  if (n < 1) throw InvalidArgument("sample_sphere: n must be >= 1");
  if (N < static_cast<std::size_t>(n) + 2) throw InvalidArgument("sample_sphere: need N >= n+2");
  if (scheme == SamplingScheme::lattice) throw InvalidArgument("sample_sphere: lattice scheme is for polytopes");
  if (n + 1 > static_cast<int>(std::size(kPrimes)))
    throw InvalidArgument("sample_sphere: dimension too large");

  SampledDomain d;
  d.kind = DomainKind::sphere;
  d.param = n;
  d.seed = seed;
  d.scheme = scheme;
  const Eigen::Index dim = n + 1;

  if (scheme == SamplingScheme::uniform_random) {
    Rng rng(seed);
    PointSet half(dim, N);
    for (std::size_t i = 0; i < N; ++i) {
      Eigen::VectorXd g(dim);
      do {
        for (Eigen::Index k = 0; k < dim; ++k) g(k) = rng.normal();
      } while (g.norm() < 1e-12);
      half[i] = g.normalized();
    }
    d.samples = std::move(half);
    append_antipodes(d.samples, d.antipode, N);
    return d;
  }

  const std::size_t half_count = (N + 1) / 2;
  const std::size_t total = 2 * half_count;
  PointSet half(dim, half_count);
  if (n == 1) {
    // Equal angles; the second half are the antipodes, which keeps angular order.
    for (std::size_t k = 0; k < half_count; ++k) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(total);
      half[k] = Eigen::Vector2d(std::cos(a), std::sin(a));
    }
  } else if (n == 2) {
    // Fibonacci spiral on the upper hemisphere, mirrored through the origin.
    // Mirrored spirals do not mesh at the equator, so the upper half keeps
    // clear of a band of a quarter of the ideal spacing there.
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    const double band = 0.25 * std::sqrt(4.0 * std::numbers::pi / static_cast<double>(total));
    for (std::size_t k = 0; k < half_count; ++k) {
      const double z = band + (1.0 - band) * (1.0 - (2.0 * static_cast<double>(k) + 1.0) / static_cast<double>(total));
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = golden * static_cast<double>(k);
      half[k] = Eigen::Vector3d(r * std::cos(a), r * std::sin(a), z);
    }
  } else {
    for (std::size_t k = 0; k < half_count; ++k) {
      Eigen::VectorXd g(dim);
      for (Eigen::Index c = 0; c < dim; ++c) {
        const double u = radical_inverse(k + 1, kPrimes[c]);
        g(c) = std::sqrt(2.0) * boost::math::erf_inv(2.0 * u - 1.0);
      }
      if (g.norm() < 1e-12) g(0) = 1.0;
      half[k] = g.normalized();
    }
  }
  d.samples = std::move(half);
  append_antipodes(d.samples, d.antipode, half_count);
  return d;
}

PointSet regular_simplex_vertices(int n) {
  if (n < 1) throw InvalidArgument("regular_simplex_vertices: n must be >= 1");
  // k+1 unit vectors in R^k; built up from the pair {+1, -1} in R^1.
  Eigen::MatrixXd V(1, 2);
  V << 1.0, -1.0;
  for (int k = 2; k <= n + 1; ++k) {
    const double low = -1.0 / k;
    const double s = std::sqrt(1.0 - low * low);
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(k, k + 1);
    W(k - 1, 0) = 1.0;
    W.block(0, 1, k - 1, k) = s * V;
    W.block(k - 1, 1, 1, k).setConstant(low);
    V = std::move(W);
  }
  return PointSet(V);
}

CoverAssignment regular_triangulation_cover(const SampledDomain& domain, double tie_tol) {
  if (domain.kind != DomainKind::sphere)
    throw InvalidArgument("regular_triangulation_cover: domain must be a sphere");
  const PointSet verts = regular_simplex_vertices(domain.param);
  CoverAssignment cover;
  cover.element_count = domain.param + 2;
  cover.labels.resize(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    const Eigen::VectorXd dots = verts.matrix().transpose() * domain.samples[i];
    const double lo = dots.minCoeff();
    for (Eigen::Index v = 0; v < dots.size(); ++v)
      if (dots(v) <= lo + tie_tol) cover.labels[i].push_back(static_cast<int>(v));
  }
  return cover;
}

std::vector<int> simplex_facet_labels(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) {
  std::vector<int> out;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (std::abs(x(i)) <= tol) out.push_back(static_cast<int>(i));
  return out;
}

CoveredDomain simplex_boundary_cover(int n, std::size_t N) {
  if (n < 2) throw InvalidArgument("simplex_boundary_cover: n must be >= 2");
  auto binom = [](long a, long b) {
    if (b < 0 || a < b) return 0.0;
    double r = 1.0;
    for (long i = 0; i < b; ++i) r = r * static_cast<double>(a - i) / static_cast<double>(i + 1);
    return r;
  };
  long L = 1;
  while (binom(L + n - 1, n - 1) - binom(L - 1, n - 1) < static_cast<double>(N)) ++L;

  std::vector<Eigen::VectorXd> pts;
  std::vector<long> comp(static_cast<std::size_t>(n), 0);
  // Enumerate compositions of L into n nonnegative parts in lexicographic order.
  auto recurse = [&](auto&& self, int pos, long remaining) -> void {
    if (pos == n - 1) {
      comp[static_cast<std::size_t>(pos)] = remaining;
      if (std::find(comp.begin(), comp.end(), 0L) == comp.end()) return;
      Eigen::VectorXd x(n);
      for (int i = 0; i < n; ++i) x(i) = static_cast<double>(comp[static_cast<std::size_t>(i)]) / static_cast<double>(L);
      pts.push_back(std::move(x));
      return;
    }
    for (long v = remaining; v >= 0; --v) {
      comp[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  recurse(recurse, 0, L);

  CoveredDomain out;
  out.domain.kind = DomainKind::simplex_boundary;
  out.domain.param = n;
  out.domain.scheme = SamplingScheme::lattice;
  out.domain.samples = PointSet(n, pts.size());
  out.cover.element_count = n;
  out.cover.labels.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.domain.samples[i] = pts[i];
    out.cover.labels[i] = simplex_facet_labels(pts[i]);
  }
  return out;
}

std::vector<int> cube_face_labels(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) {
  std::vector<int> out;
  bool on_p = false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) <= tol) out.push_back(static_cast<int>(i));
    if (std::abs(x(i) - 1.0) <= tol) on_p = true;
  }
  if (on_p) out.push_back(static_cast<int>(x.size()));
  return out;
}

bool on_opposite_face(const Eigen::Ref<const Eigen::VectorXd>& x, int j, double tol) {
  return std::abs(x(j) - 1.0) <= tol;
}

CoveredDomain cube_boundary_cover(int m, std::size_t N) {
  if (m < 2) throw InvalidArgument("cube_boundary_cover: m must be >= 2");
  long L = 1;
  while (std::pow(L + 1.0, m) - std::pow(L - 1.0, m) < static_cast<double>(N)) ++L;

  std::vector<Eigen::VectorXd> pts;
  std::vector<long> idx(static_cast<std::size_t>(m), 0);
  while (true) {
    const bool boundary = std::any_of(idx.begin(), idx.end(), [L](long v) { return v == 0 || v == L; });
    if (boundary) {
      Eigen::VectorXd x(m);
      for (int i = 0; i < m; ++i) x(i) = static_cast<double>(idx[static_cast<std::size_t>(i)]) / static_cast<double>(L);
      pts.push_back(std::move(x));
    }
    int k = 0;
    while (k < m && idx[static_cast<std::size_t>(k)] == L) idx[static_cast<std::size_t>(k++)] = 0;
    if (k == m) break;
    ++idx[static_cast<std::size_t>(k)];
  }

  CoveredDomain out;
  out.domain.kind = DomainKind::cube_boundary;
  out.domain.param = m;
  out.domain.scheme = SamplingScheme::lattice;
  out.domain.samples = PointSet(m, pts.size());
  out.cover.element_count = m + 1;
  out.cover.labels.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    out.domain.samples[i] = pts[i];
    out.cover.labels[i] = cube_face_labels(pts[i]);
  }
  return out;
}

CoverAssignment arc_cover(const SampledDomain& circle, const std::vector<std::pair<double, double>>& arcs,
                          double tol) {
  if (circle.kind != DomainKind::sphere || circle.param != 1)
    throw InvalidArgument("arc_cover: domain must be the circle");
  const double two_pi = 2.0 * std::numbers::pi;
  auto wrap = [two_pi](double a) {
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
  };
  CoverAssignment cover;
  cover.element_count = static_cast<int>(arcs.size());
  cover.labels.resize(circle.size());
  for (std::size_t i = 0; i < circle.size(); ++i) {
    const double theta = wrap(std::atan2(circle.samples[i](1), circle.samples[i](0)));
    for (std::size_t e = 0; e < arcs.size(); ++e) {
      const double start = wrap(arcs[e].first);
      const double length = arcs[e].second - arcs[e].first;
      const double offset = wrap(theta - start);
      if (offset <= length + tol || offset >= two_pi - tol) cover.labels[i].push_back(static_cast<int>(e));
    }
  }
  return cover;
}

CoverAssignment degenerate_arc_cover(const SampledDomain& circle) {
  const double pi = std::numbers::pi;
  return arc_cover(circle, {{0.1, 2 * pi - 0.1}, {-0.3, 0.3}, {pi - 0.1, pi + 0.1}});
}

double mesh_size(const SampledDomain& domain) {
  const auto& M = domain.samples.matrix();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < M.cols(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      if (j != i) nearest = std::min(nearest, (M.col(i) - M.col(j)).squaredNorm());
    worst = std::max(worst, nearest);
  }
  return std::isfinite(worst) ? std::sqrt(worst) : 0.0;
}

}  // namespace fnb
