#include <algorithm>
#include <cmath>
#include <limits>

#include "fnb/empty_spheres.hpp"
#include "fnb/nelder_mead.hpp"
#include "fnb/neighbors.hpp"
#include "fnb/parallel.hpp"
#include "fnb/rng.hpp"

namespace fnb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SlackFunctional {
  const ImageSet& images;
  std::vector<std::vector<std::size_t>> elements;

  // Distance to the whole image and, per element, to its image.
  double operator()(const Eigen::VectorXd& x) const {
    const auto& Y = images.matrix();
    const Eigen::VectorXd d2 = (Y.colwise() - x).colwise().squaredNorm().transpose();
    double worst = 0.0;
    for (const auto& el : elements) {
      double best = kInf;
      for (std::size_t i : el) best = std::min(best, d2(static_cast<Eigen::Index>(i)));
      worst = std::max(worst, best);
    }
    return std::sqrt(worst) - std::sqrt(d2.minCoeff());
  }
};

void finish(WitnessReport& r, const SlackFunctional& slack, const AbsoluteTolerances& tol) {
  const auto& Y = slack.images.matrix();
  const Eigen::VectorXd d = (Y.colwise() - r.w).colwise().norm().transpose();
  r.R = d.minCoeff();
  r.residual = std::max(0.0, slack(r.w));
  r.chosen.clear();
  for (std::size_t j = 0; j < slack.elements.size(); ++j) {
    std::size_t pick = slack.elements[j].front();
    for (std::size_t i : slack.elements[j])
      if (d(static_cast<Eigen::Index>(i)) < d(static_cast<Eigen::Index>(pick)) - tol.tau_on) pick = i;
    r.chosen.emplace_back(static_cast<int>(j), pick);
  }
  r.found = r.residual <= tol.eps_witness;
}

}  // namespace

WitnessReport witness_point(const SampledDomain& domain, const CoverAssignment& cover, const ImageSet& images,
                            const NeighborConfig& cfg) {
  if (images.size() != domain.size() || cover.labels.size() != domain.size())
    throw InvalidArgument("witness_point: images, cover and domain must be aligned");
  if (cover.element_count < 1) throw InvalidArgument("witness_point: empty cover");
  SlackFunctional slack{images, {}};
  for (int j = 0; j < cover.element_count; ++j) {
    slack.elements.push_back(cover.members(j));
    if (slack.elements.back().empty()) throw InvalidArgument("witness_point: cover element without samples");
  }
  const double diameter = images.diameter();
  const auto tol = AbsoluteTolerances::from(cfg, diameter);
  WitnessReport report;

  // Exact at sample resolution: the center of an empty sphere whose members
  // meet every element is equidistant from all of them. Smallest radius wins.
  EmptySphereOptions opts;
  opts.tau_on = tol.tau_on;
  opts.eps_inside = tol.eps_inside;
  opts.eps_coincide = tol.eps_coincide;
  opts.threads = cfg.threads;
  if (diameter <= tol.eps_coincide) {
    report.w = images[0];
    report.method = "empty-sphere";
    finish(report, slack, tol);
    return report;
  }
  const auto complex = empty_spheres(images, opts);
  const EmptySphere* best = nullptr;
  for (const auto& s : complex.spheres) {
    std::vector<char> hit(static_cast<std::size_t>(cover.element_count), 0);
    for (std::size_t i : s.members)
      for (int l : cover.labels[i]) hit[static_cast<std::size_t>(l)] = 1;
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) continue;
    if (!best || s.radius < best->radius) best = &s;
  }
  if (best) {
    report.w = best->center;
    report.method = "empty-sphere";
    finish(report, slack, tol);
    return report;
  }

  // Derivative-free search.
  const Eigen::Index m = images.dim();
  std::vector<Eigen::VectorXd> starts{images.centroid()};
  {
    std::vector<Point> reps;
    for (const auto& el : slack.elements) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
      for (std::size_t i : el) c += images[i];
      c /= static_cast<double>(el.size());
      std::size_t pick = el.front();
      for (std::size_t i : el)
        if ((images[i] - c).norm() < (images[pick] - c).norm()) pick = i;
      reps.push_back(images[pick]);
      if (static_cast<Eigen::Index>(reps.size()) == m + 1) break;
    }
    if (reps.size() >= 2)
      if (auto s = geom::circumsphere(reps)) starts.push_back(s->center);
  }
  const Eigen::VectorXd lo = images.matrix().rowwise().minCoeff(), hi = images.matrix().rowwise().maxCoeff();
  Rng rng = Rng::stream(cfg.seed, 0x77);
  while (static_cast<int>(starts.size()) < std::max(cfg.witness_starts, 1)) {
    Eigen::VectorXd x(m);
    for (Eigen::Index i = 0; i < m; ++i) x(i) = rng.uniform(lo(i), hi(i));
    starts.push_back(x);
  }
  std::vector<NelderMeadResult> runs(starts.size());
  NelderMeadOptions nm;
  nm.max_evaluations = cfg.witness_budget;
  nm.initial_step = 0.1 * std::max(diameter, 1e-12);
  nm.x_tolerance = 1e-12 * std::max(diameter, 1e-12);
  nm.f_tolerance = 1e-14 * std::max(diameter, 1e-12);
  parallel_for(starts.size(), cfg.threads, [&](std::size_t i) {
    auto r = nelder_mead(slack, starts[i], nm);
    // One restart from the end point shakes off premature collapse.
    auto again = nelder_mead(slack, r.x, nm);
    runs[i] = again.value <= r.value ? again : r;
  });
  std::size_t k = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].value < runs[k].value) k = i;
  report.w = runs[k].x;
  report.method = "search";
  finish(report, slack, tol);
  return report;
}

DisjointFacesResult disjoint_faces_check(const SampledDomain& domain, const CoverAssignment& cover,
                                         const ImageSet& images, const NeighborConfig& cfg) {
  if (domain.kind != DomainKind::cube_boundary) throw InvalidArgument("disjoint_faces_check: needs a cube boundary");
  const int m = domain.param;
  if (cover.element_count != m + 1) throw InvalidArgument("disjoint_faces_check: needs the (m+1)-element cube cover");
  DisjointFacesResult out;
  out.witness = witness_point(domain, cover, images, cfg);
  if (!out.witness.found) throw GeometryError("no-witness-found");
  const std::size_t q = out.witness.chosen[static_cast<std::size_t>(m)].second;
  for (int j = 0; j < m; ++j) {
    if (!on_opposite_face(domain.samples[q], j)) continue;
    out.face = j;
    out.p = out.witness.chosen[static_cast<std::size_t>(j)].second;
    out.q = q;
    out.verdict = out.p == out.q ? Verdict::yes : pair_is_neighbor_fast(out.p, out.q, images, cfg, &domain).verdict;
    return out;
  }
  throw GeometryError("disjoint_faces_check: chosen point of P lies on no face x_j = 1");
}

}  // namespace fnb
