// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <Eigen/Geometry>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "fnb/cover_homotopy.hpp"
#include "fnb/domains.hpp"
#include "fnb/geometry.hpp"
#include "fnb/maps.hpp"
#include "fnb/mu_opt.hpp"
#include "fnb/neighbors.hpp"
#include "fnb/rng.hpp"

#ifndef FNB_CLI_PATH
#error "FNB_CLI_PATH must point at the fnb executable"
#endif

using namespace fnb;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const std::string& name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream line;
  line.precision(3);
  line << std::fixed << secs << " s";
  if (limit_s > 0) {
    line << " (limit " << limit_s << " s)";
    if (secs > limit_s) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << ": " << o.detail << " [" << line.str()
            << "]" << std::endl;
}

std::string fmt(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

ImageSet random_images(Rng& rng, int m, std::size_t n) {
  ImageSet y(m, n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < m; ++k) y[i](k) = rng.uniform(-1, 1);
  return y;
}

// Theorem-bound sweep; every extremal pair is re-checked by the LP predicate.
Outcome bound_sweep(int n, int m_out, int trials, std::size_t samples, std::uint64_t seed, double tolerance) {
  const auto report = verify_thm2(n, m_out, trials, samples, seed, {});
  const double floor = report.bound - tolerance;
  const auto d = sample_sphere(n, samples, 0, SamplingScheme::quasi_uniform);
  double lowest = 1e9;
  int ok = 0;
  for (const auto& t : report.trials) {
    const auto y = evaluate(t.map, d);
    const auto [a, b] = t.extremal_pair;
    const bool certified = pair_is_neighbor_fast(a, b, y, {}, &d).verdict != Verdict::no;
    lowest = std::min(lowest, t.df);
    ok += certified && t.df >= floor;
  }
  return {ok == trials, std::to_string(ok) + "/" + std::to_string(trials) + " trials with certified D_f >= " +
                            fmt(floor) + "; min D_f = " + fmt(lowest)};
}

Outcome borsuk_ulam() {
  const auto d = sample_sphere(1, 2048, 0, SamplingScheme::quasi_uniform);
  int found = 0;
  double worst = 1e9;
  for (int t = 0; t < 10; ++t) {
    const MapSpec map = sweep_map(1, 1, t, 2024);
    const auto y = evaluate(map, d);
    const double allowance = discretization_allowance(d, y);
    double best = 0.0;
    for (const auto& c : neighbor_graph(y, d))
      for (std::size_t i = 0; i < c.indices.size(); ++i)
        for (std::size_t j = i + 1; j < c.indices.size(); ++j) {
          const auto a = c.indices[i], b = c.indices[j];
          if (std::abs(y[a](0) - y[b](0)) <= allowance) best = std::max(best, d.rho(a, b));
        }
    worst = std::min(worst, best);
    found += best >= 1.95;
  }
  return {found == 10, std::to_string(found) + "/10 maps (affine + trig) with a coincident neighbor pair at rho >= 1.95;"
                       " smallest such rho = " + fmt(worst)};
}

Outcome oracle_equivalence() {
  Rng rng(500);
  long definite = 0, total = 0, contradictions = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const int m = 2 + inst % 2;
    const std::size_t n = 3 + rng.next() % 10;
    ImageSet y = random_images(rng, m, n);
    if (inst % 10 == 0) y[1] = y[0];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) {
        const bool truth = pair_is_neighbor_oracle(a, b, y).neighbor;
        const auto f = pair_is_neighbor_fast(a, b, y);
        ++total;
        if (f.verdict == Verdict::uncertain) continue;
        ++definite;
        contradictions += (f.verdict == Verdict::yes) != truth;
      }
  }
  const double coverage = static_cast<double>(definite) / static_cast<double>(total);
  return {contradictions == 0 && coverage >= 0.98, std::to_string(total) + " pairs, " + std::to_string(contradictions) +
                                                       " contradictions, definite coverage " + fmt(100 * coverage, 4) + "%"};
}

Outcome witness() {
  const auto s2 = sample_sphere(2, 4096, 0, SamplingScheme::quasi_uniform);
  const auto w = witness_point(s2, regular_triangulation_cover(s2), evaluate({Family::identity_embed, 3, {}}, s2));
  bool ok = w.found && w.w.norm() <= 1e-6 && std::abs(w.R - 1) <= 1e-6 && w.residual <= 1e-6;
  std::string detail = "S^2 identity |w| = " + fmt(w.w.norm(), 3) + ", R - 1 = " + fmt(w.R - 1, 3) + ", residual " +
                       fmt(w.residual, 3);

  const auto s1 = sample_sphere(1, 2048, 0, SamplingScheme::quasi_uniform);
  const auto cover = regular_triangulation_cover(s1);
  double worst = 0.0;
  int triples = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto y = evaluate(random_map(Family::circle_fourier, 2, seed, 1.0, {2, 3}), s1);
    const auto r = witness_point(s1, cover, y);
    worst = std::max(worst, r.residual);
    bool pairwise = r.chosen.size() == 3;
    for (std::size_t a = 0; a < r.chosen.size(); ++a)
      for (std::size_t b = a + 1; b < r.chosen.size(); ++b) {
        const auto i = r.chosen[a].second, j = r.chosen[b].second;
        pairwise = pairwise && pair_is_neighbor_fast(std::min(i, j), std::max(i, j), y).verdict == Verdict::yes;
      }
    triples += pairwise;
    ok = ok && r.residual <= 1e-3 && pairwise;
  }
  detail += "; S^1 3-arc: max residual " + fmt(worst, 3) + ", " + std::to_string(triples) + "/5 triples pairwise yes";
  return {ok, detail};
}

Outcome covers() {
  const auto s1 = sample_sphere(1, 2048, 0, SamplingScheme::quasi_uniform);
  const auto s2 = sample_sphere(2, 4096, 0, SamplingScheme::quasi_uniform);
  const auto arcs = certify_cover(s1, regular_triangulation_cover(s1));
  const auto faces = certify_cover(s2, regular_triangulation_cover(s2));
  const auto degenerate = certify_cover(s1, degenerate_arc_cover(s1));
  const double off = std::abs(faces.estimate.raw_sum - std::round(faces.estimate.raw_sum));
  const bool ok = std::abs(arcs.estimate.degree) == 1 && std::abs(faces.estimate.degree) == 1 && off <= 0.05 &&
                  degenerate.estimate.degree == 0 && degenerate.verdict == CoverClass::null_homotopic;
  return {ok, "3-arc winding " + std::to_string(arcs.estimate.degree) + ", S^2 4-face degree " +
                  std::to_string(faces.estimate.degree) + " (raw " + fmt(faces.estimate.raw_sum, 8) +
                  "), degenerate degree " + std::to_string(degenerate.estimate.degree)};
}

Outcome cube() {
  const auto cd = cube_boundary_cover(2, 2048);
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto y = evaluate(random_map(Family::ambient_poly, 2, seed, 1.0, {2, 3}), cd.domain);
    const auto r = disjoint_faces_check(cd.domain, cd.cover, y);
    const bool faces = std::abs(cd.domain.samples[r.p](r.face)) <= 1e-12 &&
                       on_opposite_face(cd.domain.samples[r.q], r.face);
    ok += faces && r.verdict == Verdict::yes;
  }
  return {ok == 10, std::to_string(ok) + "/10 maps with a certified neighbor pair on sigma_j x sigma'_j"};
}

Outcome formulas() {
  int bad = 0;
  auto check = [&](bool c) { bad += !c; };
  const double tol = 1e-6;
  check(std::abs(geom::regular_edge_lengths(1).euclidean - std::sqrt(3.0)) <= tol);
  check(std::abs(geom::regular_edge_lengths(1).angular - 2 * pi / 3) <= tol);
  check(std::abs(geom::regular_edge_lengths(2).euclidean - std::sqrt(8.0 / 3.0)) <= tol);
  check(std::abs(geom::neighbor_distance_bound(1) - std::sqrt(3.0)) <= tol);
  check(std::abs(geom::neighbor_distance_bound(2) - std::sqrt(2.0)) <= tol);
  check(std::abs(geom::neighbor_distance_bound(10) - std::sqrt(1.2)) <= tol);
  check(std::abs(geom::dekster_diameter_bound(2, pi / 2) - 2 * pi / 3) <= tol);
  check(geom::dekster_diameter_bound(2, 0.0) == 0.0);
  for (int n = 1; n <= 50; ++n) {
    const auto e = geom::regular_edge_lengths(n);
    check(std::abs(geom::chord_from_angle(e.angular) - e.euclidean) <= tol);
    check(std::abs(regular_simplex_vertices(n).diameter() - e.euclidean) <= tol);
    // equal on the circle, strictly below from S^2 on
    check(geom::neighbor_distance_bound(n) <= e.euclidean + tol);
    check(geom::neighbor_distance_bound(n + 1) < geom::neighbor_distance_bound(n));
  }
  for (int i = 0; i <= 1000; ++i) {
    const double t = pi * i / 1000.0;
    check(std::abs(geom::angle_from_chord(geom::chord_from_angle(t)) - t) <= tol);
    check(std::abs(geom::chord_from_angle(t) - 2 * std::sin(t / 2)) <= tol);
  }
  // 1000 random sets on S^1, S^2, S^3 inside a cap
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 1 + trial % 3;
    const auto size = static_cast<std::size_t>(2 + trial % 11);
    Point pole(n + 1);
    for (int k = 0; k <= n; ++k) pole(k) = rng.normal();
    pole.normalize();
    const double cap = 0.1 + 1.45 * rng.uniform01();
    PointSet q(n + 1, size);
    for (std::size_t i = 0; i < size;) {
      Point p(n + 1);
      for (int k = 0; k <= n; ++k) p(k) = rng.normal();
      p.normalize();
      if (std::acos(std::clamp(p.dot(pole), -1.0, 1.0)) < cap) q[i++] = p;
    }
    const auto ball = geom::min_enclosing_ball_angular(q);
    const double diam = geom::angular_diameter(q);
    for (std::size_t i = 0; i < size; ++i) check(geom::angular_distance(ball.center, q[i]) <= ball.radius + tol);
    if (n == 1) check(std::abs(2 * ball.radius - diam) <= tol);
    else check(geom::dekster_diameter_bound(n, ball.radius) <= diam + tol);
  }
  return {bad == 0, std::to_string(bad) + " failed checks (closed forms, identities, 1000 random sets)"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("fnb_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"neighbors", "--domain sphere --n 2 --samples 1024"},
      {"verify-thm2", "--domain sphere --n 1 --trials 3 --samples 1024"},
      {"verify-cube", "--trials 2 --samples 512"},
      {"mu", "--domain sphere --n 1 --samples 64 --budget 80 --restarts 4"},
      {"witness", "--domain sphere --n 1 --samples 1024"},
      {"degree", "--domain sphere --n 2 --samples 1024"},
      {"delta-sweep", "--domain sphere --n 1 --samples 512"},
  };
  int same = 0;
  std::string mismatched;
  for (const auto& [cmd, args] : runs) {
    std::string reports[2];
    int codes[2];
    for (int k = 0; k < 2; ++k) {
      const auto out = dir / (cmd + "_" + std::to_string(k) + ".json");
      const std::string line = std::string("\"") + FNB_CLI_PATH + "\" " + cmd + " " + args + " --seed 7 --threads " +
                               (k ? "8" : "1") + " --out \"" + out.string() + "\" 2>/dev/null";
      codes[k] = std::system(line.c_str());
      reports[k] = slurp(out);
    }
    if (!reports[0].empty() && reports[0] == reports[1] && codes[0] == codes[1]) ++same;
    else mismatched += " " + cmd;
  }
  std::filesystem::remove_all(dir);
  return {same == static_cast<int>(runs.size()),
          std::to_string(same) + "/" + std::to_string(runs.size()) +
              " commands byte-identical with --threads 1 and 8" + (mismatched.empty() ? "" : "; differ:" + mismatched)};
}

}  // namespace

int main() {
  criterion(1, "D_f >= sqrt(3) - 0.05 on S^1 (20 circle_fourier maps, N = 2048)", 60,
            [] { return bound_sweep(1, 2, 20, 2048, 1, 0.05); });
  criterion(2, "D_f >= sqrt(2) - 0.08 on S^2 (10 sphere_harmonic maps into R^3, N = 4096)", 300,
            [] { return bound_sweep(2, 3, 10, 4096, 1, 0.08); });
  criterion(3, "mu(S^1, R^2) bracket: best_df <= sqrt(3) + 0.05", 600, [] {
    const auto d = sample_sphere(1, 256, 0, SamplingScheme::quasi_uniform);
    MuConfig cfg;
    cfg.degree = 3;
    cfg.budget = 2000;
    cfg.restarts = 8;
    cfg.seed = 1;
    const auto est = estimate_mu(d, Family::circle_fourier, 2, cfg);
    const double hi = std::sqrt(3.0) + 0.05;
    return Outcome{est.best_df <= hi && est.best_df >= est.lower_bound - est.allowance,
                   "best_df " + fmt(est.best_df) + " (search sample " + fmt(est.best_df_search) + ", refined 2N), " +
                       "bracket [" + fmt(est.lower_bound) + " - " + fmt(est.allowance, 3) + ", " + fmt(hi) + "], " +
                       std::to_string(est.evaluations) + " evaluations"};
  });
  criterion(4, "Borsuk-Ulam regime S^1 -> R^1", 0, borsuk_ulam);
  criterion(5, "fast predicate vs oracle on 500 small instances", 60, oracle_equivalence);
  criterion(6, "witness point", 0, witness);
  criterion(7, "cover certification", 0, covers);
  criterion(8, "cube boundary: neighbor pair on disjoint faces (10 maps, N = 2048)", 0, cube);
  criterion(9, "formula suite at 1e-6", 0, formulas);
  criterion(10, "byte-identical reports across thread counts", 0, determinism);
  std::cout << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failures ? 1 : 0;
}
