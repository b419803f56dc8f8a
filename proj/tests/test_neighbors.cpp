#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>
#include <vector>

#include "fnb/domains.hpp"
#include "fnb/empty_spheres.hpp"
#include "fnb/maps.hpp"
#include "fnb/neighbors.hpp"
#include "fnb/rng.hpp"

using namespace fnb;
using PairSet = std::set<std::pair<std::size_t, std::size_t>>;

namespace {

ImageSet points(std::initializer_list<std::initializer_list<double>> rows) {
  const auto dim = static_cast<Eigen::Index>(rows.begin()->size());
  ImageSet s(dim, rows.size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    Eigen::Index k = 0;
    for (double v : r) s[i](k++) = v;
    ++i;
  }
  return s;
}

// A domain whose samples are the given points; only rho is used downstream.
SampledDomain as_domain(const PointSet& p) {
  SampledDomain d;
  d.samples = p;
  return d;
}

PairSet graph_pairs(const std::vector<NeighborCertificate>& certs) {
  PairSet out;
  for (const auto& c : certs)
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      for (std::size_t j = i + 1; j < c.indices.size(); ++j) out.insert({c.indices[i], c.indices[j]});
  return out;
}

PairSet oracle_pairs(const ImageSet& y) {
  PairSet out;
  for (std::size_t a = 0; a < y.size(); ++a)
    for (std::size_t b = a + 1; b < y.size(); ++b)
      if (pair_is_neighbor_oracle(a, b, y).neighbor) out.insert({a, b});
  return out;
}

ImageSet random_images(Rng& rng, int m, std::size_t n) {
  ImageSet y(m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) y[i](k) = rng.uniform(-1, 1);
  return y;
}

// Monotone chain; returns hull vertex indices counterclockwise.
std::vector<std::size_t> hull2(const ImageSet& y) {
  std::vector<std::size_t> idx(y.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) {
    return y[a](0) < y[b](0) || (y[a](0) == y[b](0) && y[a](1) < y[b](1));
  });
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (y[a](0) - y[o](0)) * (y[b](1) - y[o](1)) - (y[a](1) - y[o](1)) * (y[b](0) - y[o](0));
  };
  std::vector<std::size_t> h(2 * idx.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
    h[k++] = idx[i];
  }
  for (std::size_t i = idx.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], idx[i]) <= 0) --k;
    h[k++] = idx[i];
  }
  h.resize(k - 1);
  return h;
}

}  // namespace

TEST_CASE("oracle examples") {
  auto r = pair_is_neighbor_oracle(0, 1, points({{0, 0}, {1, 0}, {0.5, 10}}));
  CHECK(r.neighbor);
  REQUIRE(r.sphere);
  CHECK((r.sphere->center - Eigen::Vector2d(0.5, 0)).norm() < 1e-12);
  CHECK(r.sphere->radius == doctest::Approx(0.5));

  CHECK_FALSE(pair_is_neighbor_oracle(0, 1, points({{0, 0}, {1, 0}, {0.5, 0}})).neighbor);

  // off-axis center (0.5, -s): empty iff (0.1 + s)^2 >= 0.25 + s^2, i.e. s >= 1.2
  double first = -1;
  for (int i = 0; i <= 4000 && first < 0; ++i) {
    const double s = i * 0.001;
    if ((0.1 + s) * (0.1 + s) >= 0.25 + s * s - 1e-12) first = s;
  }
  CHECK(first == doctest::Approx(1.2).epsilon(1e-9));
  const auto y = points({{0, 0}, {1, 0}, {0.5, 0.1}});
  r = pair_is_neighbor_oracle(0, 1, y);
  CHECK(r.neighbor);
  REQUIRE(r.sphere);
  CHECK(std::abs((y[0] - r.sphere->center).norm() - r.sphere->radius) < 1e-9);
  CHECK(std::abs((y[1] - r.sphere->center).norm() - r.sphere->radius) < 1e-9);
  CHECK((y[2] - r.sphere->center).norm() >= r.sphere->radius - 1e-9);
  CHECK(r.sphere->center(1) <= -1.2 + 1e-9);

  CHECK(pair_is_neighbor_oracle(0, 1, points({{0, 0}, {0, 0}, {1, 1}})).kind == WitnessKind::coincidence);
  CHECK_THROWS_AS(pair_is_neighbor_oracle(0, 1, ImageSet(4, 5)), InvalidArgument);
  CHECK_THROWS_AS(pair_is_neighbor_oracle(0, 1, ImageSet(2, 15)), InvalidArgument);
}

TEST_CASE("fast predicate: concyclic and constant images") {
  const auto d = sample_sphere(1, 64, 0, SamplingScheme::quasi_uniform);
  const auto id = evaluate({Family::identity_embed, 2, {}}, d);
  const auto con = evaluate({Family::constant, 2, {0.3, 0.4}}, d);
  for (std::size_t a = 0; a < d.size(); ++a)
    for (std::size_t b = a + 1; b < d.size(); ++b) {
      const auto f = pair_is_neighbor_fast(a, b, id);
      CHECK(f.verdict == Verdict::yes);
      REQUIRE(f.certificate);
      CHECK(certificate_is_sound(*f.certificate, id));
      const auto c = pair_is_neighbor_fast(a, b, con);
      CHECK(c.verdict == Verdict::yes);
      CHECK(c.certificate->kind == WitnessKind::coincidence);
    }
}

TEST_CASE("fast predicate never contradicts the oracle") {
  Rng rng(1234);
  int definite = 0, total = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const int m = 2 + inst % 2;
    const std::size_t n = 3 + rng.next() % 10;
    ImageSet y = random_images(rng, m, n);
    if (inst % 5 == 0) y[1] = y[0];  // coincidences
    if (inst % 7 == 0) y[2] = 0.5 * (y[0] + y[1]);  // exact degeneracy
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const bool truth = pair_is_neighbor_oracle(a, b, y).neighbor;
        const auto f = pair_is_neighbor_fast(a, b, y);
        ++total;
        if (f.verdict == Verdict::uncertain) continue;
        ++definite;
        CHECK((f.verdict == Verdict::yes) == truth);
        if (f.verdict == Verdict::yes) CHECK(certificate_is_sound(*f.certificate, y));
      }
  }
  CHECK(static_cast<double>(definite) / total >= 0.98);
}

TEST_CASE("neighbor graph: four concyclic points give all six pairs") {
  const auto d = sample_sphere(1, 4, 0, SamplingScheme::quasi_uniform);
  const auto y = evaluate({Family::identity_embed, 2, {}}, d);
  CHECK(graph_pairs(neighbor_graph(y, d)).size() == 6);
}

TEST_CASE("neighbor graph: hull-adjacent pairs are present") {
  Rng rng(77);
  for (int t = 0; t < 20; ++t) {
    const ImageSet y = random_images(rng, 2, 40);
    const auto pairs = graph_pairs(neighbor_graph(y, as_domain(y)));
    const auto h = hull2(y);
    for (std::size_t k = 0; k < h.size(); ++k) {
      auto a = h[k], b = h[(k + 1) % h.size()];
      CHECK(pairs.count({std::min(a, b), std::max(a, b)}) == 1);
    }
  }
}

TEST_CASE("neighbor graph equals the oracle graph on small random sets") {
  Rng rng(99);
  for (int t = 0; t < 60; ++t) {
    const int m = 2 + t % 2;
    const ImageSet y = random_images(rng, m, 5 + t % 8);
    CHECK(graph_pairs(neighbor_graph(y, as_domain(y))) == oracle_pairs(y));
  }
}

TEST_CASE("subsample oracle equivalence: circle_fourier N = 512, seed 3") {
  const auto d = sample_sphere(1, 512, 0, SamplingScheme::quasi_uniform);
  const auto map = random_map(Family::circle_fourier, 2, 3, 1.0, {2, 3});
  const auto full = evaluate(map, d);
  PointSet sub_x(2, 12);
  ImageSet sub_y(2, 12);
  for (std::size_t i = 0; i < 12; ++i) {
    sub_x[i] = d.samples[i * 42];
    sub_y[i] = full[i * 42];
  }
  SampledDomain sub = as_domain(sub_x);
  CHECK(graph_pairs(neighbor_graph(sub_y, sub)) == oracle_pairs(sub_y));
}

TEST_CASE("monotonicity: adding points only removes neighbor pairs") {
  Rng rng(5);
  for (int t = 0; t < 40; ++t) {
    const int m = 2 + t % 2;
    const ImageSet big = random_images(rng, m, 12);
    ImageSet small(m, 8);
    for (std::size_t i = 0; i < 8; ++i) small[i] = big[i];
    const auto pb = graph_pairs(neighbor_graph(big, as_domain(big)));
    const auto ps = graph_pairs(neighbor_graph(small, as_domain(small)));
    for (const auto& p : pb)
      if (p.second < 8) CHECK(ps.count(p) == 1);
  }
}

TEST_CASE("D_f: identity, constant, empty; certificates sound") {
  const auto d = sample_sphere(1, 256, 0, SamplingScheme::quasi_uniform);
  const auto id = evaluate({Family::identity_embed, 2, {}}, d);
  CHECK(compute_df(neighbor_graph(id, d), d) == doctest::Approx(2.0).epsilon(1e-12));
  const auto con = evaluate({Family::constant, 3, {1, 2, 3}}, d);
  const auto cc = neighbor_graph(con, d);
  CHECK(compute_df(cc, d) == doctest::Approx(2.0).epsilon(1e-12));
  for (const auto& c : cc) CHECK(c.kind == WitnessKind::coincidence);
  CHECK(compute_df({}, d) == 0.0);

  const auto s2 = sample_sphere(2, 500, 0, SamplingScheme::quasi_uniform);
  CHECK(compute_df(neighbor_graph(evaluate({Family::constant, 1, {0.0}}, s2), s2), s2) == doctest::Approx(2.0));

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto y = evaluate(random_map(Family::circle_fourier, 2, seed, 1.0, {2, 3}), d);
    const auto certs = neighbor_graph(y, d);
    double widest = 0.0;
    for (const auto& c : certs) {
      CHECK(certificate_is_sound(c, y));
      widest = std::max(widest, c.pair_distance);
    }
    CHECK(compute_df(certs, d) >= widest);
  }
}

TEST_CASE("D_f in the Borsuk-Ulam regime and above the bound on S^1") {
  const auto d = sample_sphere(1, 1024, 0, SamplingScheme::quasi_uniform);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto y = evaluate(random_map(Family::circle_fourier, 2, seed, 1.0, {2, 1 + static_cast<int>(seed % 4)}), d);
    CHECK(compute_df(neighbor_graph(y, d), d) >= std::sqrt(3.0) - discretization_allowance(d, y));
  }
}

TEST_CASE("neighbor graph does not depend on the thread count") {
  const auto d = sample_sphere(2, 800, 0, SamplingScheme::quasi_uniform);
  const auto y = evaluate(random_map(Family::sphere_harmonic, 3, 4, 1.0, {3, 2}), d);
  NeighborConfig one, many;
  many.threads = 4;
  const auto a = neighbor_graph(y, d, one), b = neighbor_graph(y, d, many);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].indices == b[i].indices);
    CHECK(a[i].witness.center == b[i].witness.center);
    CHECK(a[i].witness.radius == b[i].witness.radius);
  }
}

TEST_CASE("pairwise fallback above three image dimensions agrees with the complex") {
  // Embed planar images into R^5 by an isometry: neighbors do not change.
  Rng rng(3);
  const ImageSet y = random_images(rng, 2, 30);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(5, 2);
  Q(0, 0) = Q(3, 1) = 1.0;
  ImageSet lifted(Q * y.matrix());
  const auto planar = graph_pairs(neighbor_graph(y, as_domain(y)));
  const auto high = graph_pairs(neighbor_graph(lifted, as_domain(y)));
  CHECK(planar == high);
  // full-dimensional in R^5: pairwise path, verdicts must be sound
  const ImageSet y5 = random_images(rng, 5, 25);
  for (const auto& c : neighbor_graph(y5, as_domain(y5))) CHECK(certificate_is_sound(c, y5));
}

TEST_CASE("empty sphere complex: points on a circle and their coincidences") {
  const auto d = sample_sphere(1, 16, 0, SamplingScheme::quasi_uniform);
  const auto cx = empty_spheres(d.samples, {});
  CHECK(cx.complete);
  CHECK(cx.affine_dim == 2);
  bool unit = false;
  for (const auto& s : cx.spheres)
    if (s.members.size() == 16) unit = std::abs(s.radius - 1.0) < 1e-9 && s.center.norm() < 1e-9;
  CHECK(unit);
  ImageSet twice(2, 6);
  for (std::size_t i = 0; i < 3; ++i) twice[i] = twice[i + 3] = Eigen::Vector2d(double(i), double(i * i));
  std::size_t zero = 0;
  for (const auto& s : empty_spheres(twice, {}).spheres) zero += s.radius <= 1e-12 && s.members.size() == 2;
  CHECK(zero == 3);
}

TEST_CASE("witness: identity on S^2 with the triangulation cover") {
  const auto d = sample_sphere(2, 1000, 0, SamplingScheme::quasi_uniform);
  const auto cover = regular_triangulation_cover(d);
  const auto y = evaluate({Family::identity_embed, 3, {}}, d);
  const auto w = witness_point(d, cover, y);
  CHECK(w.found);
  CHECK(w.w.norm() <= 1e-6);
  CHECK(std::abs(w.R - 1.0) <= 1e-6);
  CHECK(w.residual <= 1e-6);
  REQUIRE(w.chosen.size() == 4);
  for (const auto& [e, i] : w.chosen) CHECK(cover.has(i, e));
}

TEST_CASE("witness: constant map") {
  const auto d = sample_sphere(1, 300, 0, SamplingScheme::quasi_uniform);
  const auto cover = regular_triangulation_cover(d);
  const auto y = evaluate({Family::constant, 2, {1.5, -2.0}}, d);
  const auto w = witness_point(d, cover, y);
  CHECK(w.found);
  CHECK((w.w - Eigen::Vector2d(1.5, -2.0)).norm() <= 1e-12);
  CHECK(w.R == doctest::Approx(0.0));
  CHECK(w.residual <= 1e-12);
  // ties go to the lowest index of each element
  for (const auto& [e, i] : w.chosen) CHECK(i == cover.members(e).front());
}

TEST_CASE("witness: circle_fourier seed 7 on the 3-arc cover") {
  const auto d = sample_sphere(1, 2048, 0, SamplingScheme::quasi_uniform);
  const auto cover = regular_triangulation_cover(d);
  const auto y = evaluate(random_map(Family::circle_fourier, 2, 7, 1.0, {2, 3}), d);
  const auto w = witness_point(d, cover, y);
  CHECK(w.found);
  CHECK(w.residual <= 1e-3 * y.diameter());
  // every element within R + residual of w (the report's invariant)
  const double tau = 1e-8 * y.diameter();
  for (int e = 0; e < 3; ++e) {
    double best = 1e300;
    for (auto i : cover.members(e)) best = std::min(best, (y[i] - w.w).norm());
    CHECK(best <= w.R + w.residual + tau);
  }
  REQUIRE(w.chosen.size() == 3);
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) {
      const auto i = w.chosen[a].second, j = w.chosen[b].second;
      CHECK(pair_is_neighbor_fast(std::min(i, j), std::max(i, j), y).verdict == Verdict::yes);
    }
}

TEST_CASE("witness residual does not grow under refinement") {
  const auto map = random_map(Family::circle_fourier, 2, 11, 1.0, {2, 2});
  double prev = -1.0;
  for (std::size_t N : {256, 512, 1024}) {
    const auto d = sample_sphere(1, N, 0, SamplingScheme::quasi_uniform);
    const auto w = witness_point(d, regular_triangulation_cover(d), evaluate(map, d));
    if (prev >= 0.0) CHECK(w.residual <= 2.0 * prev + 1e-9);
    prev = w.residual;
  }
}

TEST_CASE("disjoint faces: identity of the square boundary") {
  const auto cd = cube_boundary_cover(2, 512);
  const auto y = evaluate({Family::identity_embed, 2, {}}, cd.domain);
  const auto r = disjoint_faces_check(cd.domain, cd.cover, y);
  CHECK(r.verdict == Verdict::yes);
  CHECK(std::abs(cd.domain.samples[r.p](r.face)) <= 1e-12);
  CHECK(on_opposite_face(cd.domain.samples[r.q], r.face));
  // w inside the hole; both points on the witness circle
  CHECK(r.witness.w.minCoeff() > 0.0);
  CHECK(r.witness.w.maxCoeff() < 1.0);
  CHECK(std::abs((y[r.p] - r.witness.w).norm() - r.witness.R) <= 1e-3);
  CHECK(std::abs((y[r.q] - r.witness.w).norm() - r.witness.R) <= 1e-3);
}

TEST_CASE("disjoint faces: constant map and a projection to R^1") {
  const auto cd = cube_boundary_cover(2, 512);
  auto r = disjoint_faces_check(cd.domain, cd.cover, evaluate({Family::constant, 2, {4, 4}}, cd.domain));
  CHECK(r.witness.R == doctest::Approx(0.0));
  CHECK(std::abs(cd.domain.samples[r.p](r.face)) <= 1e-12);
  CHECK(on_opposite_face(cd.domain.samples[r.q], r.face));

  // f(x, y) = x + y / 4
  const MapSpec proj{Family::affine, 1, {1.0, 0.25, 0.0}};
  const auto y = evaluate(proj, cd.domain);
  // brute force: some pair on opposite faces has exactly equal images
  bool exists = false;
  for (std::size_t i = 0; i < cd.domain.size() && !exists; ++i)
    for (std::size_t j = 0; j < cd.domain.size() && !exists; ++j)
      for (int f = 0; f < 2; ++f)
        if (std::abs(cd.domain.samples[i](f)) <= 1e-12 && on_opposite_face(cd.domain.samples[j], f) &&
            std::abs(y[i](0) - y[j](0)) <= 1e-12)
          exists = true;
  CHECK(exists);
  r = disjoint_faces_check(cd.domain, cd.cover, y);
  CHECK(r.verdict == Verdict::yes);
  CHECK(std::abs(cd.domain.samples[r.p](r.face)) <= 1e-12);
  CHECK(on_opposite_face(cd.domain.samples[r.q], r.face));
  CHECK(std::abs(y[r.p](0) - y[r.q](0)) <= 1e-9);
}
