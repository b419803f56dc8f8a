#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fnb/domains.hpp"
#include "fnb/geometry.hpp"
#include "fnb/maps.hpp"

namespace fnb {

/// Tolerances relative to the image diameter, plus execution knobs.
struct NeighborConfig {
  double eps_inside = 1e-6;    // allowed intrusion into an open ball
  double eps_coincide = 1e-9;  // images closer than this are the same point
  double tau_on = 1e-8;        // "on the sphere"
  double eps_witness = 1e-3;   // witness residual above which no witness is reported
  int threads = 1;
  std::uint64_t seed = 0;      // random probes of the witness search
  int witness_starts = 24;
  int witness_budget = 4000;   // objective evaluations per start
};

/// NeighborConfig tolerances scaled by a concrete image diameter.
struct AbsoluteTolerances {
  double eps_inside, eps_coincide, tau_on, eps_witness;
  static AbsoluteTolerances from(const NeighborConfig& cfg, double diameter);
};

enum class WitnessKind { sphere, coincidence, halfspace };
std::string to_string(WitnessKind kind);

struct NeighborCertificate {
  std::vector<std::size_t> indices;  // sorted, >= 2
  WitnessKind kind = WitnessKind::sphere;
  geom::Sphere witness;  // radius 0 for coincidences; very large for halfspace limits
  double slack = 0.0;          // min over non-members of |c - y| - r (inf if none)
  double pair_distance = 0.0;  // largest rho between members
};

enum class Verdict { yes, no, uncertain };
std::string to_string(Verdict v);

struct OracleResult {
  bool neighbor = false;
  WitnessKind kind = WitnessKind::sphere;
  std::optional<geom::Sphere> sphere;
};

/// Exhaustive decision for small instances: coincidence, then every sphere
/// through f(a), f(b) and at most m-1 further images whose center lies in
/// their affine hull, the diametral sphere, and the limiting half-space.
/// Requires image dimension <= 3 and at most 14 points.
OracleResult pair_is_neighbor_oracle(std::size_t a, std::size_t b, const ImageSet& images,
                                     const NeighborConfig& cfg = {});

struct FastResult {
  Verdict verdict = Verdict::uncertain;
  std::optional<NeighborCertificate> certificate;
  double margin = 0.0;  // best clearance of a center on the bisector (negative: none exists)
};

/// Scalable pair test. Centers of spheres through f(a), f(b) form the
/// bisector hyperplane; "no image inside" is linear in the center, so the
/// best clearance is a small linear program. A clearance above tau_on is a
/// definite yes, below -tau_on a definite no (certified by LP duality).
/// `domain` only fills in pair_distance.
FastResult pair_is_neighbor_fast(std::size_t a, std::size_t b, const ImageSet& images, const NeighborConfig& cfg = {},
                                 const SampledDomain* domain = nullptr);

/// All neighbor sets as certificates, one per maximal empty sphere (images
/// spanning at most 3 dimensions) or one per pair (otherwise). Sorted by indices.
std::vector<NeighborCertificate> neighbor_graph(const ImageSet& images, const SampledDomain& domain,
                                                const NeighborConfig& cfg = {});

/// Largest rho over all pairs inside any certificate; 0 for no certificates.
double compute_df(const std::vector<NeighborCertificate>& certs, const SampledDomain& domain);

/// Re-checks a certificate against the full image set.
bool certificate_is_sound(const NeighborCertificate& cert, const ImageSet& images, const NeighborConfig& cfg = {});

/// Mesh-resolution allowance for sampled lower bounds: 2 * (Lipschitz
/// estimate of f) * (sample mesh size).
double discretization_allowance(const SampledDomain& domain, const ImageSet& images);

struct WitnessReport {
  Point w;
  double R = 0.0;
  double residual = 0.0;
  std::vector<std::pair<int, std::size_t>> chosen;  // (element, sample index)
  bool found = false;  // residual <= eps_witness
  std::string method;  // "empty-sphere" or "search"
};

/// Point w whose distance to every cover element's image equals its distance
/// to the whole image. First looks for a maximal empty sphere whose members
/// meet every element (exact at sample resolution); otherwise minimizes
///   slack(x) = max_j d(x, f(C_j)) - d(x, f(X))
/// by multi-start Nelder-Mead. For each element the chosen sample is its
/// nearest to w (lowest index on ties).
WitnessReport witness_point(const SampledDomain& domain, const CoverAssignment& cover, const ImageSet& images,
                            const NeighborConfig& cfg = {});

struct DisjointFacesResult {
  std::size_t p = 0;  // on sigma_j = {x_j = 0}
  std::size_t q = 0;  // on sigma'_j = {x_j = 1}
  int face = 0;       // j
  WitnessReport witness;
  Verdict verdict = Verdict::uncertain;  // pair_is_neighbor_fast on (p, q)
};

/// Runs witness_point on the cube cover and extracts a pair on opposite faces.
/// Throws GeometryError("no-witness-found") if the search fails.
DisjointFacesResult disjoint_faces_check(const SampledDomain& domain, const CoverAssignment& cover,
                                         const ImageSet& images, const NeighborConfig& cfg = {});

}  // namespace fnb
