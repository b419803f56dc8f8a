#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Geometry>
#include <Eigen/LU>
#include <cmath>
#include <map>
#include <set>

#include "fnb/hull3.hpp"
#include "fnb/lp.hpp"
#include "fnb/nelder_mead.hpp"
#include "fnb/parallel.hpp"
#include "fnb/rng.hpp"

using namespace fnb;

TEST_CASE("lp: box with a diagonal cut") {
  // max x + y  s.t.  0 <= x, y <= 1,  x + 2y <= 2   ->  (1, 0.5), value 1.5
  Eigen::MatrixXd A(5, 2);
  A << 1, 0, 0, 1, -1, 0, 0, -1, 1, 2;
  Eigen::VectorXd b(5);
  b << 1, 1, 0, 0, 2;
  const auto s = lp::maximize(A, b, Eigen::Vector2d(1, 1));
  REQUIRE(s.status == lp::Status::optimal);
  CHECK(s.value == doctest::Approx(1.5));
  CHECK(s.z(0) == doctest::Approx(1.0));
  CHECK(s.z(1) == doctest::Approx(0.5));
  // duality: A^T y = c, y >= 0, b.y = value
  CHECK((A.transpose() * s.dual - Eigen::Vector2d(1, 1)).norm() < 1e-9);
  CHECK(s.dual.minCoeff() >= -1e-12);
  CHECK(b.dot(s.dual) == doctest::Approx(1.5));
}

TEST_CASE("lp: unbounded") {
  Eigen::MatrixXd A(1, 2);
  A << 1, 0;
  const auto s = lp::maximize(A, Eigen::VectorXd::Ones(1), Eigen::Vector2d(0, 1));
  CHECK(s.status == lp::Status::unbounded);
}

TEST_CASE("lp: random feasible programs against vertex enumeration") {
  Rng rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    // random constraints containing the origin, plus a box so it is bounded
    const int rows = 6;
    Eigen::MatrixXd A(rows + 4, 2);
    Eigen::VectorXd b(rows + 4);
    for (int i = 0; i < rows; ++i) {
      A.row(i) << rng.normal(), rng.normal();
      b(i) = rng.uniform(0.1, 1.0);
    }
    A.bottomRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    b.tail(4).setConstant(3.0);
    const Eigen::Vector2d c(rng.normal(), rng.normal());
    const auto s = lp::maximize(A, b, c);
    REQUIRE(s.status == lp::Status::optimal);
    // oracle: best feasible intersection of two constraint lines
    double best = -1e300;
    for (int i = 0; i < A.rows(); ++i)
      for (int j = i + 1; j < A.rows(); ++j) {
        Eigen::Matrix2d M;
        M << A.row(i), A.row(j);
        if (std::abs(M.determinant()) < 1e-12) continue;
        const Eigen::Vector2d v = M.inverse() * Eigen::Vector2d(b(i), b(j));
        if (((A * v - b).array() <= 1e-9).all()) best = std::max(best, c.dot(v));
      }
    CHECK(s.value == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("nelder-mead: quadratic and rosenbrock") {
  auto quad = [](const Eigen::VectorXd& x) { return (x - Eigen::Vector3d(1, -2, 3)).squaredNorm(); };
  auto r = nelder_mead(quad, Eigen::Vector3d::Zero(), {.max_evaluations = 5000, .initial_step = 1.0});
  CHECK((r.x - Eigen::Vector3d(1, -2, 3)).norm() < 1e-4);

  auto rosen = [](const Eigen::VectorXd& x) { return 100 * std::pow(x(1) - x(0) * x(0), 2) + std::pow(1 - x(0), 2); };
  r = nelder_mead(rosen, Eigen::Vector2d(-1.2, 1.0), {.max_evaluations = 5000, .initial_step = 0.5});
  CHECK((r.x - Eigen::Vector2d(1, 1)).norm() < 1e-3);
}

TEST_CASE("nelder-mead: budget is a hard cap") {
  int calls = 0;
  auto f = [&](const Eigen::VectorXd& x) {
    ++calls;
    return std::sin(3 * x(0)) + x.squaredNorm();
  };
  for (int budget : {1, 5, 17, 100}) {
    calls = 0;
    const auto r = nelder_mead(f, Eigen::VectorXd::Ones(4), {.max_evaluations = budget, .f_tolerance = 0});
    CHECK(calls <= budget);
    CHECK(r.evaluations == calls);
  }
}

TEST_CASE("hull3: cube and orientation") {
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  pts.emplace_back(0.5, 0.5, 0.5);  // interior, must be skipped
  const auto tris = convex_hull_3d(pts);
  CHECK(tris.size() == 12);
  const Eigen::Vector3d center(0.5, 0.5, 0.5);
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : tris) {
    const Eigen::Vector3d n = (pts[static_cast<std::size_t>(t[1])] - pts[static_cast<std::size_t>(t[0])])
                                  .cross(pts[static_cast<std::size_t>(t[2])] - pts[static_cast<std::size_t>(t[0])]);
    CHECK(n.dot(pts[static_cast<std::size_t>(t[0])] - center) > 0);
    for (int k = 0; k < 3; ++k) ++edges[{t[static_cast<std::size_t>(k)], t[static_cast<std::size_t>((k + 1) % 3)]}];
  }
  // closed oriented surface: every directed edge once, its reverse once
  for (const auto& [e, count] : edges) {
    CHECK(count == 1);
    CHECK(edges.count({e.second, e.first}) == 1);
  }
}

TEST_CASE("hull3: random sphere points, Euler characteristic 2") {
  Rng rng(9);
  std::vector<Eigen::Vector3d> pts;
  for (int i = 0; i < 500; ++i) pts.push_back(Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized());
  const auto tris = convex_hull_3d(pts);
  std::set<int> verts;
  for (const auto& t : tris) verts.insert(t.begin(), t.end());
  const auto F = static_cast<long>(tris.size());
  CHECK(static_cast<long>(verts.size()) - 3 * F / 2 + F == 2);
  CHECK(verts.size() == 500);
}

TEST_CASE("parallel_for: slot outputs independent of thread count, exceptions propagate") {
  std::vector<double> a(1000), b(1000);
  parallel_for(a.size(), 1, [&](std::size_t i) { a[i] = std::sqrt(static_cast<double>(i)); });
  parallel_for(b.size(), 8, [&](std::size_t i) { b[i] = std::sqrt(static_cast<double>(i)); });
  CHECK(a == b);
  CHECK_THROWS_AS(parallel_for(100, 4, [](std::size_t i) {
                    if (i == 37) throw std::runtime_error("boom");
                  }),
                  std::runtime_error);
}

TEST_CASE("rng streams are reproducible and distinct") {
  CHECK(Rng::stream(1, 2).next() == Rng::stream(1, 2).next());
  CHECK(Rng::stream(1, 2).next() != Rng::stream(1, 3).next());
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform01();
    CHECK((u >= 0.0 && u < 1.0));
  }
}
