#include "fnb/mu_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "fnb/geometry.hpp"
#include "fnb/nelder_mead.hpp"
#include "fnb/parallel.hpp"
#include "fnb/rng.hpp"

namespace fnb {

namespace {

SampledDomain resample(const SampledDomain& d, int factor) {
  const std::size_t target = d.size() * static_cast<std::size_t>(std::max(factor, 1));
  switch (d.kind) {
    case DomainKind::sphere:
      return sample_sphere(d.param, d.scheme == SamplingScheme::uniform_random ? target / 2 : target, d.seed, d.scheme);
    case DomainKind::simplex_boundary: return simplex_boundary_cover(d.param, target).domain;
    case DomainKind::cube_boundary: return cube_boundary_cover(d.param, target).domain;
  }
  return d;
}

std::string reproducer(const MapSpec& map, const SampledDomain& d, double df, double bound, double allowance) {
  std::ostringstream os;
  os.precision(17);
  os << "lower bound violated: D_f = " << df << " < " << bound << " - " << allowance << " on " << to_string(d.kind)
     << "(" << d.param << "), N = " << d.size() << ", seed " << d.seed << "; map " << to_string(map.family)
     << " m_out " << map.m_out << " params [";
  for (std::size_t i = 0; i < map.params.size(); ++i) os << (i ? ", " : "") << map.params[i];
  os << "]";
  return os.str();
}

}  // namespace

double map_df(const MapSpec& map, const SampledDomain& domain, const NeighborConfig& cfg) {
  return compute_df(neighbor_graph(evaluate(map, domain), domain, cfg), domain);
}

double mu_lower_bound(int n, int m_out) {
  return m_out <= n ? 2.0 : geom::neighbor_distance_bound(n);
}

MuEstimate estimate_mu(const SampledDomain& domain, Family family, int m_out, const MuConfig& cfg) {
  if (!family_supports(family, domain)) throw InvalidArgument("estimate_mu: family not defined on this domain");
  if (cfg.restarts < 1 || cfg.budget < cfg.restarts) throw InvalidArgument("estimate_mu: need budget >= restarts >= 1");
  MuEstimate est;
  est.settings = cfg;
  const bool on_sphere = domain.kind == DomainKind::sphere;
  est.lower_bound = on_sphere ? mu_lower_bound(domain.param, m_out) : 0.0;
  const bool check_bound = on_sphere && m_out > domain.param;
  const double mesh = check_bound ? mesh_size(domain) : 0.0;
  const FamilyShape shape{static_cast<int>(domain.ambient_dim()), cfg.degree};
  const int per_restart = cfg.budget / cfg.restarts;

  NeighborConfig ncfg = cfg.neighbors;
  ncfg.threads = 1;  // parallelism lives at the restart level
  struct Run {
    std::vector<double> trace;
    MapSpec best;
    double best_df = std::numeric_limits<double>::infinity();
  };
  std::vector<Run> runs(static_cast<std::size_t>(cfg.restarts));
  parallel_for(runs.size(), cfg.threads, [&](std::size_t r) {
    Run& run = runs[r];
    const MapSpec start = random_map(family, m_out, Rng::stream(cfg.seed, r).next(), cfg.init_scale, shape);
    auto objective = [&](const Eigen::VectorXd& p) {
      MapSpec map{family, m_out, std::vector<double>(p.data(), p.data() + p.size())};
      const auto images = evaluate(map, domain);
      if (!images.all_finite()) {
        run.trace.push_back(std::numeric_limits<double>::infinity());
        return std::numeric_limits<double>::infinity();
      }
      const double df = compute_df(neighbor_graph(images, domain, ncfg), domain);
      if (check_bound) {
        const double allowance = 2.0 * modulus_of_continuity(domain, images) * mesh;
        if (df < est.lower_bound - allowance) throw PropertyViolation(reproducer(map, domain, df, est.lower_bound, allowance));
      }
      run.trace.push_back(df);
      if (df < run.best_df) run.best_df = df, run.best = map;
      return df;
    };
    NelderMeadOptions nm;
    nm.max_evaluations = per_restart;
    nm.initial_step = cfg.initial_step;
    nm.x_tolerance = 1e-9;
    nm.f_tolerance = 0.0;
    const Eigen::Map<const Eigen::VectorXd> x0(start.params.data(), static_cast<Eigen::Index>(start.params.size()));
    if (x0.size() == 0) objective(Eigen::VectorXd());
    else nelder_mead(objective, x0, nm);
  });

  std::size_t best = 0;
  for (std::size_t r = 0; r < runs.size(); ++r) {
    for (double v : runs[r].trace) est.trace.emplace_back(est.evaluations++, v);
    est.restart_best.push_back(runs[r].best_df);
    if (runs[r].best_df < runs[best].best_df) best = r;
  }
  est.best_map = runs[best].best;
  est.best_df_search = runs[best].best_df;

  const SampledDomain fine = resample(domain, cfg.refine_factor);
  NeighborConfig fcfg = cfg.neighbors;
  fcfg.threads = cfg.threads;
  const auto images = evaluate(est.best_map, fine);
  est.best_df = compute_df(neighbor_graph(images, fine, fcfg), fine);
  est.allowance = discretization_allowance(fine, images);
  return est;
}

MapSpec sweep_map(int n, int m_out, int trial, std::uint64_t seed) {
  if (n == 1) {
    if (m_out == 1 && trial % 2 == 0) return random_map(Family::affine, m_out, seed, 1.0, {2, 0});
    return random_map(Family::circle_fourier, m_out, seed, 1.0, {2, 1 + trial % 4});
  }
  if (n == 2) return random_map(Family::sphere_harmonic, m_out, seed, 1.0, {3, 2 + trial % 2});
  return random_map(Family::ambient_poly, m_out, seed, 1.0, {n + 1, 2});
}

std::pair<std::size_t, std::size_t> extremal_pair(const std::vector<NeighborCertificate>& certs,
                                                  const SampledDomain& domain) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  double best_rho = -1.0;
  for (const auto& c : certs)
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      for (std::size_t j = i + 1; j < c.indices.size(); ++j) {
        const double r = domain.rho(c.indices[i], c.indices[j]);
        const std::pair<std::size_t, std::size_t> p{c.indices[i], c.indices[j]};
        if (r > best_rho || (r == best_rho && p < best)) best_rho = r, best = p;
      }
  return best;
}

ThmReport verify_thm2(int n, int m_out, int trials, std::size_t samples, std::uint64_t seed, const NeighborConfig& cfg) {
  if (n < 1 || m_out < 1 || trials < 0) throw InvalidArgument("verify_thm2: need n >= 1, m_out >= 1, trials >= 0");
  ThmReport report;
  report.n = n;
  report.m_out = m_out;
  report.bound = mu_lower_bound(n, m_out);
  const SampledDomain domain = sample_sphere(n, samples, seed, SamplingScheme::quasi_uniform);
  const double mesh = mesh_size(domain);
  report.min_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    TrialResult tr;
    tr.trial = t;
    tr.seed = Rng::stream(seed, static_cast<std::uint64_t>(t)).next();
    tr.map = sweep_map(n, m_out, t, tr.seed);
    const auto images = evaluate(tr.map, domain);
    const auto certs = neighbor_graph(images, domain, cfg);
    tr.df = compute_df(certs, domain);
    tr.bound = report.bound;
    tr.margin = tr.df - tr.bound;
    tr.allowance = 2.0 * modulus_of_continuity(domain, images) * mesh;
    tr.pass = tr.margin >= -tr.allowance;
    tr.extremal_pair = extremal_pair(certs, domain);
    report.all_pass = report.all_pass && tr.pass;
    report.min_margin = std::min(report.min_margin, tr.margin);
    report.trials.push_back(std::move(tr));
  }
  if (trials == 0) report.min_margin = 0.0;
  return report;
}

Histogram delta_sweep(const SampledDomain& domain, const MapSpec& map, int bins, const NeighborConfig& cfg) {
  if (bins < 1) throw InvalidArgument("delta_sweep: bins must be >= 1");
  const auto certs = neighbor_graph(evaluate(map, domain), domain, cfg);
  Histogram h;
  const double top = domain.diameter();
  for (int b = 0; b <= bins; ++b) h.edges.push_back(top * b / bins);
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  std::unordered_set<std::uint64_t> seen;
  h.min = std::numeric_limits<double>::infinity();
  for (const auto& c : certs)
    for (std::size_t i = 0; i < c.indices.size(); ++i)
      for (std::size_t j = i + 1; j < c.indices.size(); ++j) {
        if (!seen.insert(static_cast<std::uint64_t>(c.indices[i]) << 32 | c.indices[j]).second) continue;
        const double r = domain.rho(c.indices[i], c.indices[j]);
        auto b = static_cast<std::size_t>(std::floor(r / top * bins));
        ++h.counts[std::min(b, h.counts.size() - 1)];
        ++h.pairs;
        h.min = std::min(h.min, r);
        h.max = std::max(h.max, r);
      }
  if (h.pairs == 0) h.min = 0.0;
  double last = -1.0;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    if (!h.counts[b]) continue;
    if (last >= 0.0) h.largest_gap = std::max(h.largest_gap, h.edges[b] - last);
    last = h.edges[b + 1];
  }
  return h;
}

}  // namespace fnb
