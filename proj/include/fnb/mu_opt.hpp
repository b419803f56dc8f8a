#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fnb/domains.hpp"
#include "fnb/maps.hpp"
#include "fnb/neighbors.hpp"

namespace fnb {

struct MuConfig {
  int degree = 3;             // K or D of the family
  int restarts = 8;
  int budget = 2000;          // objective evaluations, split evenly over the restarts
  double init_scale = 1.0;    // restart parameters ~ U[-init_scale, init_scale]
  double initial_step = 0.3;  // starting simplex edge in parameter space
  std::uint64_t seed = 0;
  int refine_factor = 2;      // incumbent re-evaluated at this multiple of the sample count
  NeighborConfig neighbors;
  int threads = 1;
};

struct MuEstimate {
  double best_df = 0.0;           // incumbent re-evaluated on the refined sample
  double best_df_search = 0.0;    // incumbent on the search sample
  MapSpec best_map;
  double lower_bound = 0.0;       // sqrt((n+2)/n) for m > n, 2 for m <= n
  double allowance = 0.0;         // discretization allowance of the incumbent on the refined sample
  std::vector<std::pair<int, double>> trace;  // (evaluation index, D_f)
  int evaluations = 0;
  std::vector<double> restart_best;
  MuConfig settings;
};

/// D_f of one map on a sampled domain.
double map_df(const MapSpec& map, const SampledDomain& domain, const NeighborConfig& cfg = {});

/// Lower bound on mu(S^n, R^m): 2 in the Borsuk-Ulam regime m <= n, else sqrt((n+2)/n).
double mu_lower_bound(int n, int m_out);

/// Minimizes D_f over a family by Nelder-Mead with restarts; restart r starts
/// from random_map(family, m_out, stream seed r). Restarts run in parallel, the
/// result does not depend on the thread count.
MuEstimate estimate_mu(const SampledDomain& domain, Family family, int m_out, const MuConfig& cfg);

struct TrialResult {
  int trial = 0;
  std::uint64_t seed = 0;
  MapSpec map;
  double df = 0.0;
  double bound = 0.0;
  double margin = 0.0;     // df - bound
  double allowance = 0.0;  // discretization allowance
  bool pass = false;       // margin >= -allowance
  std::pair<std::size_t, std::size_t> extremal_pair{0, 0};
};

struct ThmReport {
  int n = 1;
  int m_out = 2;
  double bound = 0.0;
  std::vector<TrialResult> trials;
  bool all_pass = true;
  double min_margin = 0.0;
};

/// Random family used by the sweeps: circle_fourier of degree 1 + trial % 4 on
/// S^1, sphere_harmonic of degree 2 + trial % 2 on S^2, ambient_poly of degree 2 above.
MapSpec sweep_map(int n, int m_out, int trial, std::uint64_t seed);

/// Checks D_f >= sqrt((n+2)/n) - allowance for `trials` random maps S^n -> R^m.
ThmReport verify_thm2(int n, int m_out, int trials, std::size_t samples, std::uint64_t seed, const NeighborConfig& cfg);

/// Certified pair realizing D_f (lowest index pair among ties).
std::pair<std::size_t, std::size_t> extremal_pair(const std::vector<NeighborCertificate>& certs,
                                                  const SampledDomain& domain);

struct Histogram {
  std::vector<double> edges;        // bins + 1
  std::vector<std::uint64_t> counts;
  std::uint64_t pairs = 0;
  double min = 0.0, max = 0.0;
  double largest_gap = 0.0;         // between consecutive occupied bins
};

/// Histogram of rho over all certified neighbor pairs in [0, diameter of X].
Histogram delta_sweep(const SampledDomain& domain, const MapSpec& map, int bins, const NeighborConfig& cfg);

}  // namespace fnb
