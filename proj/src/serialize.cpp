#include "fnb/serialize.hpp"

#include <cmath>

namespace fnb {

namespace {

// JSON has no infinity; unbounded slacks are written as null.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json point_json(const Eigen::Ref<const Eigen::VectorXd>& p) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(number(p(i)));
  return a;
}

Json domain_json(const SampledDomain& domain, const CoverAssignment* cover) {
  Json j;
  j["kind"] = to_string(domain.kind);
  j["n_or_m"] = domain.param;
  j["seed"] = domain.seed;
  j["scheme"] = to_string(domain.scheme);
  Json samples = Json::array();
  for (std::size_t i = 0; i < domain.size(); ++i) samples.push_back(point_json(domain.samples[i]));
  j["samples"] = std::move(samples);
  if (cover) {
    j["element_count"] = cover->element_count;
    j["labels"] = cover->labels;
  }
  return j;
}

Json map_json(const MapSpec& map) {
  Json j;
  j["family"] = to_string(map.family);
  j["m_out"] = map.m_out;
  Json params = Json::array();
  for (double p : map.params) params.push_back(number(p));
  j["params"] = std::move(params);
  return j;
}

MapSpec map_from_json(const Json& j) {
  try {
    MapSpec m;
    m.family = parse_family(j.at("family").get<std::string>());
    m.m_out = j.at("m_out").get<int>();
    if (j.contains("params")) m.params = j.at("params").get<std::vector<double>>();
    if (m.m_out < 1) throw InvalidArgument("map: m_out must be >= 1");
    return m;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("map: ") + e.what());
  }
}

Json tolerances_json(const NeighborConfig& cfg) {
  Json j;
  j["eps_inside"] = cfg.eps_inside;
  j["eps_coincide"] = cfg.eps_coincide;
  j["tau_on"] = cfg.tau_on;
  j["eps_witness"] = cfg.eps_witness;
  j["relative_to"] = "image diameter";
  return j;
}

Json certificate_json(const NeighborCertificate& cert) {
  Json j;
  j["indices"] = cert.indices;
  j["kind"] = to_string(cert.kind);
  j["center"] = point_json(cert.witness.center);
  j["radius"] = number(cert.witness.radius);
  j["slack"] = number(cert.slack);
  j["pair_distance"] = cert.pair_distance;
  return j;
}

Json certificates_json(const std::vector<NeighborCertificate>& certs) {
  Json a = Json::array();
  for (const auto& c : certs) a.push_back(certificate_json(c));
  return a;
}

Json witness_json(const WitnessReport& r) {
  Json j;
  j["w"] = point_json(r.w);
  j["R"] = r.R;
  j["residual"] = r.residual;
  Json chosen = Json::array();
  for (const auto& [element, index] : r.chosen) chosen.push_back({{"element", element}, {"index", index}});
  j["chosen"] = std::move(chosen);
  j["found"] = r.found;
  j["method"] = r.method;
  return j;
}

Json estimate_json(const HomotopyEstimate& est) {
  return {{"degree", est.degree}, {"confidence", est.confidence}, {"raw_sum", est.raw_sum}};
}

Json cover_certificate_json(const CoverCertificate& cert) {
  Json j;
  j["verdict"] = to_string(cert.verdict);
  j["degree"] = cert.estimate.degree;
  j["confidence"] = cert.estimate.confidence;
  j["raw_sum"] = cert.estimate.raw_sum;
  Json runs = Json::array();
  for (std::size_t i = 0; i < cert.estimates.size(); ++i) {
    Json r = estimate_json(cert.estimates[i]);
    r["r_thick"] = cert.r_thick[i];
    runs.push_back(std::move(r));
  }
  j["thickenings"] = std::move(runs);
  j["reason"] = cert.reason;
  return j;
}

Json mu_json(const MuEstimate& est) {
  Json j;
  Json s;
  s["degree"] = est.settings.degree;
  s["restarts"] = est.settings.restarts;
  s["budget"] = est.settings.budget;
  s["init_scale"] = est.settings.init_scale;
  s["initial_step"] = est.settings.initial_step;
  s["seed"] = est.settings.seed;
  s["refine_factor"] = est.settings.refine_factor;
  s["coefficients"] = {{"reflection", 1.0}, {"expansion", 2.0}, {"contraction", 0.5}, {"shrink", 0.5}};
  j["settings"] = std::move(s);
  j["lower_bound"] = est.lower_bound;
  j["best_df"] = est.best_df;
  j["best_df_search"] = est.best_df_search;
  j["allowance"] = est.allowance;
  j["gap"] = est.best_df - est.lower_bound;
  j["best_map"] = map_json(est.best_map);
  j["restart_best"] = est.restart_best;
  j["evaluations"] = est.evaluations;
  Json trace = Json::array();
  for (const auto& [i, v] : est.trace) trace.push_back({i, number(v)});
  j["trace"] = std::move(trace);
  return j;
}

Json thm_json(const ThmReport& report) {
  Json j;
  j["n"] = report.n;
  j["m_out"] = report.m_out;
  j["bound"] = report.bound;
  j["all_pass"] = report.all_pass;
  j["min_margin"] = report.min_margin;
  Json trials = Json::array();
  for (const auto& t : report.trials) {
    Json r;
    r["trial"] = t.trial;
    r["seed"] = t.seed;
    r["df"] = t.df;
    r["margin"] = t.margin;
    r["allowance"] = t.allowance;
    r["pass"] = t.pass;
    r["extremal_pair"] = {t.extremal_pair.first, t.extremal_pair.second};
    r["map"] = map_json(t.map);
    trials.push_back(std::move(r));
  }
  j["trials"] = std::move(trials);
  return j;
}

Json histogram_json(const Histogram& h) {
  Json j;
  j["edges"] = h.edges;
  j["counts"] = h.counts;
  j["pairs"] = h.pairs;
  j["min"] = h.min;
  j["max"] = h.max;
  j["largest_gap"] = h.largest_gap;
  return j;
}

}  // namespace fnb
