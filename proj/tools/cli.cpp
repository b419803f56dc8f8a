// fnb: batch experiments on f-neighbors of sampled maps.
#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fnb/cover_homotopy.hpp"
#include "fnb/domains.hpp"
#include "fnb/maps.hpp"
#include "fnb/mu_opt.hpp"
#include "fnb/neighbors.hpp"
#include "fnb/rng.hpp"
#include "fnb/serialize.hpp"
#include "svg.hpp"

namespace {

using namespace fnb;

enum Exit { ok = 0, violation = 1, usage = 2, internal = 3 };

struct Options {
  std::string config;
  std::string domain = "sphere";
  int n = -1;  // S^n, simplex boundary in R^n, cube boundary in R^n; default per command
  int m_out = -1;
  std::size_t samples = 0;  // 0: per-command default
  std::string scheme = "quasi_uniform";
  std::uint64_t seed = 0;
  std::string map;
  std::string family;
  int degree = 3;
  int trials = 10;
  int threads = 1;
  std::string out, csv, svg, dump_certs;
  double eps_inside = NeighborConfig{}.eps_inside;
  double eps_coincide = NeighborConfig{}.eps_coincide;
  double tau_on = NeighborConfig{}.tau_on;
  double eps_witness = NeighborConfig{}.eps_witness;
  int budget = MuConfig{}.budget;
  int restarts = MuConfig{}.restarts;
  std::string cover;
  int bins = 20;
  double r_thick = 0.0;
};

// Everything that determines the result; threads and output paths are left
// out so that reports compare equal across them.
Json config_json(const std::string& command, const Options& o) {
  Json j;
  j["command"] = command;
  j["domain"] = o.domain;
  j["n"] = o.n;
  j["m_out"] = o.m_out;
  j["samples"] = o.samples;
  j["scheme"] = o.scheme;
  j["seed"] = o.seed;
  j["map"] = o.map;
  j["family"] = o.family;
  j["degree"] = o.degree;
  j["trials"] = o.trials;
  j["budget"] = o.budget;
  j["restarts"] = o.restarts;
  j["cover"] = o.cover;
  j["bins"] = o.bins;
  j["r_thick"] = o.r_thick;
  return j;
}

NeighborConfig neighbor_config(const Options& o) {
  NeighborConfig c;
  c.eps_inside = o.eps_inside;
  c.eps_coincide = o.eps_coincide;
  c.tau_on = o.tau_on;
  c.eps_witness = o.eps_witness;
  c.threads = o.threads;
  c.seed = o.seed;
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << text;
  if (!out) throw InvalidArgument("failed writing " + path);
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(what + ": " + e.what());
  }
}

// Config keys mirror the long flags ("m_out" and "m-out" both work); a key
// only applies when the flag was not given on the command line.
void merge_config(CLI::App& app, const std::string& path) {
  const Json cfg = parse_json(read_file(path), "config " + path);
  if (!cfg.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string flag = key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "command" || flag == "config") continue;
    CLI::Option* opt = app.get_option_no_throw("--" + flag);
    if (!opt) throw InvalidArgument("config: unknown key '" + key + "'");
    if (opt->count() > 0) continue;
    std::string text;
    if (value.is_string()) text = value.get<std::string>();
    else if (value.is_number() || value.is_boolean()) text = value.dump();
    else if (value.is_object() && flag == "map") text = value.dump();
    else throw InvalidArgument("config: key '" + key + "' must be a scalar");
    opt->add_result(text);
    opt->run_callback();
  }
}

struct Resolved {
  SampledDomain domain;
  CoverAssignment cover;
  bool has_cover = false;
};

// Domain plus the cover named by --cover (or the natural one for the domain).
Resolved resolve_domain(const Options& o, bool want_cover) {
  Resolved r;
  const DomainKind kind = parse_domain_kind(o.domain);
  const std::size_t N = o.samples;
  if (kind == DomainKind::sphere) {
    if (o.n < 1) throw InvalidArgument("--n must be >= 1 for a sphere");
    r.domain = sample_sphere(o.n, N, o.seed, parse_scheme(o.scheme));
  } else {
    if (o.n < 2) throw InvalidArgument("--n must be >= 2 for polytope boundaries");
    auto cd = kind == DomainKind::cube_boundary ? cube_boundary_cover(o.n, N) : simplex_boundary_cover(o.n, N);
    r.domain = std::move(cd.domain);
    r.cover = std::move(cd.cover);
    r.has_cover = true;
  }
  if (!want_cover) return r;
  const std::string name = o.cover.empty() ? "default" : o.cover;
  if (kind == DomainKind::sphere) {
    if (name == "default" || name == "triangulation") r.cover = regular_triangulation_cover(r.domain);
    else if (name == "degenerate") {
      if (o.n != 1) throw InvalidArgument("the degenerate cover is defined on S^1 only");
      r.cover = degenerate_arc_cover(r.domain);
    } else throw InvalidArgument("unknown cover '" + name + "' for a sphere (triangulation, degenerate)");
    r.has_cover = true;
  } else {
    const std::string natural = kind == DomainKind::cube_boundary ? "cube" : "facets";
    if (name != "default" && name != natural)
      throw InvalidArgument("unknown cover '" + name + "' for " + o.domain + " (" + natural + ")");
  }
  return r;
}

std::string default_family(const Options& o) {
  if (o.domain == "sphere" && o.n == 1) return "circle_fourier";
  if (o.domain == "sphere" && o.n == 2) return "sphere_harmonic";
  return "ambient_poly";
}

MapSpec resolve_map(const Options& o, const SampledDomain& d, std::uint64_t seed) {
  if (!o.map.empty()) {
    const std::string text = o.map.front() == '{' ? o.map : read_file(o.map);
    return map_from_json(parse_json(text, "map"));
  }
  const Family fam = parse_family(o.family);
  if (!family_supports(fam, d)) throw InvalidArgument("family " + to_string(fam) + " is not defined on this domain");
  return random_map(fam, o.m_out, seed, 1.0, {static_cast<int>(d.ambient_dim()), o.degree});
}

std::string csv_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Outcome {
  Json result;
  int code = ok;
  std::string summary;
};

Outcome cmd_neighbors(const Options& o) {
  const Resolved r = resolve_domain(o, false);
  const MapSpec map = resolve_map(o, r.domain, o.seed);
  const NeighborConfig cfg = neighbor_config(o);
  const ImageSet images = evaluate(map, r.domain);
  if (!images.all_finite()) throw InvalidArgument("map produced non-finite images");
  const auto certs = neighbor_graph(images, r.domain, cfg);
  const double df = compute_df(certs, r.domain);
  const auto pair = extremal_pair(certs, r.domain);
  bool sound = true;
  for (const auto& c : certs) sound = sound && certificate_is_sound(c, images, cfg);

  const NeighborCertificate* extremal = nullptr;
  for (const auto& c : certs) {
    const bool has_a = std::find(c.indices.begin(), c.indices.end(), pair.first) != c.indices.end();
    const bool has_b = std::find(c.indices.begin(), c.indices.end(), pair.second) != c.indices.end();
    if (has_a && has_b) {
      extremal = &c;
      break;
    }
  }

  Outcome out;
  Json& j = out.result;
  j["map"] = map_json(map);
  j["sample_count"] = r.domain.size();
  j["d_f"] = df;
  j["extremal_pair"] = {{"indices", {pair.first, pair.second}},
                        {"rho", r.domain.rho(pair.first, pair.second)},
                        {"points", {point_json(r.domain.samples[pair.first]), point_json(r.domain.samples[pair.second])}}};
  if (extremal) j["extremal_certificate"] = certificate_json(*extremal);
  j["certificate_count"] = certs.size();
  j["all_sound"] = sound;
  const double allowance = discretization_allowance(r.domain, images);
  j["allowance"] = allowance;
  bool bound_ok = true;
  if (r.domain.kind == DomainKind::sphere) {
    const double bound = mu_lower_bound(r.domain.param, map.m_out);
    bound_ok = df >= bound - allowance;
    j["lower_bound"] = bound;
    j["bound_holds"] = bound_ok;
  }
  if (!o.dump_certs.empty()) write_file(o.dump_certs, certificates_json(certs).dump(1) + "\n");
  if (!o.svg.empty()) {
    if (map.m_out != 2) throw InvalidArgument("--svg needs m_out = 2");
    write_file(o.svg, cli::neighbors_svg(r.domain, images, extremal, pair));
  }
  out.code = sound && bound_ok ? ok : violation;
  std::ostringstream s;
  s.precision(10);
  s << "D_f = " << df << ", extremal pair (" << pair.first << ", " << pair.second << "), " << certs.size()
    << " certificates" << (sound ? "" : ", UNSOUND certificate") << (bound_ok ? "" : ", LOWER BOUND VIOLATED");
  out.summary = s.str();
  return out;
}

Outcome cmd_verify_thm2(const Options& o) {
  const ThmReport rep = verify_thm2(o.n, o.m_out, o.trials, o.samples, o.seed, neighbor_config(o));
  Outcome out;
  out.result = thm_json(rep);
  if (!o.csv.empty()) {
    std::ostringstream c;
    c << "trial,seed,family,df,bound,margin,allowance,pass,p,q\n";
    for (const auto& t : rep.trials)
      c << t.trial << ',' << t.seed << ',' << to_string(t.map.family) << ',' << csv_number(t.df) << ','
        << csv_number(t.bound) << ',' << csv_number(t.margin) << ',' << csv_number(t.allowance) << ','
        << (t.pass ? 1 : 0) << ',' << t.extremal_pair.first << ',' << t.extremal_pair.second << '\n';
    write_file(o.csv, c.str());
  }
  out.code = rep.all_pass ? ok : violation;
  std::ostringstream s;
  s.precision(10);
  s << rep.trials.size() << " trials on S^" << o.n << " -> R^" << o.m_out << ": bound " << rep.bound
    << ", min margin " << rep.min_margin << (rep.all_pass ? ", all pass" : ", FAILURES");
  out.summary = s.str();
  return out;
}

Outcome cmd_verify_cube(const Options& o) {
  const Resolved r = resolve_domain(o, true);
  const NeighborConfig cfg = neighbor_config(o);
  const int trials = o.map.empty() ? o.trials : 1;
  Outcome out;
  Json runs = Json::array();
  int passed = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t seed = Rng::stream(o.seed, static_cast<std::uint64_t>(t)).next();
    const MapSpec map = resolve_map(o, r.domain, seed);
    const ImageSet images = evaluate(map, r.domain);
    Json run;
    run["trial"] = t;
    run["seed"] = seed;
    run["map"] = map_json(map);
    bool pass = false;
    try {
      const DisjointFacesResult d = disjoint_faces_check(r.domain, r.cover, images, cfg);
      const double tol = 1e-12;
      const bool faces = std::abs(r.domain.samples[d.p](d.face)) <= tol && on_opposite_face(r.domain.samples[d.q], d.face);
      pass = d.verdict == Verdict::yes && faces;
      run["face"] = d.face;
      run["p"] = d.p;
      run["q"] = d.q;
      run["p_point"] = point_json(r.domain.samples[d.p]);
      run["q_point"] = point_json(r.domain.samples[d.q]);
      run["verdict"] = to_string(d.verdict);
      run["witness"] = witness_json(d.witness);
    } catch (const GeometryError& e) {
      run["error"] = e.what();
    }
    run["pass"] = pass;
    passed += pass ? 1 : 0;
    runs.push_back(std::move(run));
  }
  out.result["m"] = o.n;
  out.result["sample_count"] = r.domain.size();
  out.result["runs"] = std::move(runs);
  out.result["passed"] = passed;
  out.result["all_pass"] = passed == trials;
  out.code = passed == trials ? ok : violation;
  out.summary = std::to_string(passed) + "/" + std::to_string(trials) + " runs certified a pair on disjoint faces";
  return out;
}

Outcome cmd_mu(const Options& o) {
  const Resolved r = resolve_domain(o, false);
  MuConfig mc;
  mc.degree = o.degree;
  mc.restarts = o.restarts;
  mc.budget = o.budget;
  mc.seed = o.seed;
  mc.neighbors = neighbor_config(o);
  mc.threads = o.threads;
  const MuEstimate est = estimate_mu(r.domain, parse_family(o.family), o.m_out, mc);
  Outcome out;
  out.result = mu_json(est);
  out.result["sample_count"] = r.domain.size();
  if (!o.csv.empty()) {
    std::ostringstream c;
    c << "evaluation,df\n";
    for (const auto& [i, v] : est.trace) c << i << ',' << csv_number(v) << '\n';
    write_file(o.csv, c.str());
  }
  std::ostringstream s;
  s.precision(10);
  s << "mu bracket [" << est.lower_bound << ", " << est.best_df << "] after " << est.evaluations << " evaluations";
  out.summary = s.str();
  return out;
}

Outcome cmd_witness(const Options& o) {
  const Resolved r = resolve_domain(o, true);
  const MapSpec map = resolve_map(o, r.domain, o.seed);
  const ImageSet images = evaluate(map, r.domain);
  const WitnessReport w = witness_point(r.domain, r.cover, images, neighbor_config(o));
  Outcome out;
  out.result["map"] = map_json(map);
  out.result["sample_count"] = r.domain.size();
  out.result["element_count"] = r.cover.element_count;
  out.result["witness"] = witness_json(w);
  out.code = w.found ? ok : violation;
  std::ostringstream s;
  s.precision(10);
  s << (w.found ? "witness found" : "NO WITNESS") << ": R = " << w.R << ", residual = " << w.residual << " ("
    << w.method << ")";
  out.summary = s.str();
  return out;
}

Outcome cmd_degree(const Options& o) {
  const Resolved r = resolve_domain(o, true);
  const CoverCertificate cert = certify_cover(r.domain, r.cover, o.r_thick);
  Outcome out;
  out.result["sample_count"] = r.domain.size();
  out.result["element_count"] = r.cover.element_count;
  out.result["certificate"] = cover_certificate_json(cert);
  out.code = cert.verdict == CoverClass::inconclusive ? violation : ok;
  std::ostringstream s;
  s.precision(6);
  s << "degree " << cert.estimate.degree << " (confidence " << cert.estimate.confidence << "): "
    << to_string(cert.verdict);
  if (!cert.reason.empty()) s << " [" << cert.reason << "]";
  out.summary = s.str();
  return out;
}

Outcome cmd_delta_sweep(const Options& o) {
  const Resolved r = resolve_domain(o, false);
  const MapSpec map = resolve_map(o, r.domain, o.seed);
  const Histogram h = delta_sweep(r.domain, map, o.bins, neighbor_config(o));
  Outcome out;
  out.result["map"] = map_json(map);
  out.result["sample_count"] = r.domain.size();
  out.result["histogram"] = histogram_json(h);
  if (!o.csv.empty()) {
    std::ostringstream c;
    c << "lo,hi,count\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b)
      c << csv_number(h.edges[b]) << ',' << csv_number(h.edges[b + 1]) << ',' << h.counts[b] << '\n';
    write_file(o.csv, c.str());
  }
  std::ostringstream s;
  s.precision(10);
  s << h.pairs << " neighbor pairs, rho in [" << h.min << ", " << h.max << "], largest gap " << h.largest_gap;
  out.summary = s.str();
  return out;
}

int run(int argc, char** argv) {
  Options o;
  CLI::App app{"f-neighbors of maps from spheres, simplex and cube boundaries into R^m"};
  app.require_subcommand(1);
  app.add_option("--config", o.config, "JSON file with flag values; flags on the command line win");
  app.add_option("--domain", o.domain, "sphere | simplex | cube");
  app.add_option("--n", o.n, "S^n; or the ambient dimension of the simplex/cube boundary");
  app.add_option("--m-out", o.m_out, "target dimension m");
  app.add_option("--samples", o.samples, "requested sample count N");
  app.add_option("--scheme", o.scheme, "quasi_uniform | uniform_random (spheres)");
  app.add_option("--seed", o.seed, "master seed");
  app.add_option("--map", o.map, "map as inline JSON {family, m_out, params} or a path to such a file");
  app.add_option("--family", o.family, "random map family when --map is absent");
  app.add_option("--degree", o.degree, "K or D of the family");
  app.add_option("--trials", o.trials, "number of random maps");
  app.add_option("--threads", o.threads, "worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  app.add_option("--out", o.out, "JSON report path (default: stdout)");
  app.add_option("--csv", o.csv, "CSV side file");
  app.add_option("--svg", o.svg, "SVG side file (neighbors, m_out = 2)");
  app.add_option("--dump-certs", o.dump_certs, "write every neighbor certificate to this JSON file");
  app.add_option("--eps-inside", o.eps_inside, "allowed intrusion into open balls, relative to the image diameter");
  app.add_option("--eps-coincide", o.eps_coincide, "coincidence tolerance, relative");
  app.add_option("--tau-on", o.tau_on, "on-sphere tolerance, relative");
  app.add_option("--eps-witness", o.eps_witness, "largest accepted witness residual, relative");
  app.add_option("--budget", o.budget, "mu: total objective evaluations");
  app.add_option("--restarts", o.restarts, "mu: Nelder-Mead restarts");
  app.add_option("--cover", o.cover, "triangulation | degenerate (S^1) | facets | cube");
  app.add_option("--bins", o.bins, "delta-sweep histogram bins");
  app.add_option("--r-thick", o.r_thick, "degree: thickening radius (default 0.6x the common thickening radius)");

  struct Command {
    const char* name;
    const char* help;
    Outcome (*fn)(const Options&);
  };
  const Command commands[] = {
      {"neighbors", "neighbor graph, D_f and the extremal pair of one map", cmd_neighbors},
      {"verify-thm2", "D_f >= sqrt((n+2)/n) for random maps S^n -> R^m", cmd_verify_thm2},
      {"verify-cube", "a neighbor pair on disjoint faces for maps of the cube boundary", cmd_verify_cube},
      {"mu", "upper estimate of mu(S^n, R^m) by Nelder-Mead over a family", cmd_mu},
      {"witness", "common witness point w for a cover", cmd_witness},
      {"degree", "degree of the cover map h", cmd_degree},
      {"delta-sweep", "histogram of rho over certified neighbor pairs", cmd_delta_sweep},
  };
  for (const auto& c : commands) app.add_subcommand(c.name, c.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  if (!o.config.empty()) merge_config(app, o.config);

  const Command* cmd = nullptr;
  for (const auto& c : commands)
    if (app.got_subcommand(c.name)) cmd = &c;
  const std::string name = cmd->name;

  // Per-command defaults; the report records the resolved values.
  if (name == "verify-cube") {
    if (o.domain != "sphere" && o.domain != "cube" && o.domain != "cube_boundary")
      throw InvalidArgument("verify-cube runs on the cube boundary");
    o.domain = "cube";
  }
  if (name == "verify-thm2" && o.domain != "sphere") throw InvalidArgument("verify-thm2 runs on spheres");
  if (o.n < 0) o.n = o.domain == "sphere" ? 1 : 2;
  if (o.m_out < 0) o.m_out = o.domain == "sphere" ? o.n + 1 : o.n;
  if (o.m_out < 1) throw InvalidArgument("--m-out must be >= 1");
  if (o.samples == 0) o.samples = name == "mu" ? 256 : (o.domain == "sphere" && o.n == 2 ? 4096 : 2048);
  if (o.family.empty()) o.family = name == "verify-thm2" ? "sweep" : default_family(o);

  const Outcome res = cmd->fn(o);
  Json report;
  report["command"] = name;
  report["config"] = config_json(name, o);
  report["tolerances"] = tolerances_json(neighbor_config(o));
  report["result"] = res.result;
  report["status"] = res.code == ok ? "pass" : "violation";
  const std::string text = report.dump(1) + "\n";
  if (o.out.empty()) std::cout << text;
  else write_file(o.out, text);
  std::cerr << res.summary << "\n";
  return res.code;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const fnb::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const fnb::PropertyViolation& e) {
    std::cerr << "property violation: " << e.what() << "\n";
    return violation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return internal;
  }
}
