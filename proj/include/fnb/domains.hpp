#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fnb/types.hpp"

namespace fnb {

enum class DomainKind { sphere, simplex_boundary, cube_boundary };
enum class SamplingScheme { uniform_random, quasi_uniform, lattice };

std::string to_string(DomainKind kind);
std::string to_string(SamplingScheme scheme);
DomainKind parse_domain_kind(const std::string& name);
SamplingScheme parse_scheme(const std::string& name);

/// A finite sample of X together with its intrinsic metric.
///
/// `param` is n for sphere(n) (S^n in R^{n+1}), n for simplex_boundary(n)
/// (the boundary of the standard simplex in R^n), and m for cube_boundary(m).
/// The intrinsic distance rho is the Euclidean distance in the ambient space
/// in every case (the chord metric for spheres).
struct SampledDomain {
  DomainKind kind = DomainKind::sphere;
  int param = 1;
  std::uint64_t seed = 0;
  SamplingScheme scheme = SamplingScheme::quasi_uniform;
  PointSet samples;
  std::optional<std::vector<std::size_t>> antipode;

  std::size_t size() const { return samples.size(); }
  Eigen::Index ambient_dim() const { return samples.dim(); }
  double rho(std::size_t i, std::size_t j) const { return (samples[i] - samples[j]).norm(); }
  /// Topological dimension of X.
  int intrinsic_dim() const;
  /// Diameter of the continuous X (not of the sample).
  double diameter() const;
};

/// Closed cover given by labels on samples. A sample on the boundary between
/// elements carries every element containing it.
struct CoverAssignment {
  int element_count = 0;
  std::vector<std::vector<int>> labels;

  bool has(std::size_t sample, int element) const;
  std::vector<std::size_t> members(int element) const;
};

struct CoveredDomain {
  SampledDomain domain;
  CoverAssignment cover;
};

/// Samples S^n. The result is antipodally closed: uniform_random draws N
/// points and appends their antipodes (2N samples); quasi_uniform produces
/// 2*ceil(N/2) samples (equal angles for n = 1, a Fibonacci spiral for n = 2,
/// Halton-driven Gaussian directions otherwise).
SampledDomain sample_sphere(int n, std::size_t N, std::uint64_t seed, SamplingScheme scheme);

/// Vertices of a regular (n+1)-simplex inscribed in S^n, vertex 0 at the north pole.
PointSet regular_simplex_vertices(int n);

/// Cover of S^n by the n+2 central projections of the facets of the
/// inscribed regular simplex. Element i is the facet opposite vertex i, i.e.
/// the samples whose farthest simplex vertex is v_i (ties keep all labels).
CoverAssignment regular_triangulation_cover(const SampledDomain& domain, double tie_tol = 1e-9);

/// Boundary of the standard simplex in R^n (n >= 2) on a barycentric lattice;
/// element i is the facet {x_i = 0}.
CoveredDomain simplex_boundary_cover(int n, std::size_t N);
std::vector<int> simplex_facet_labels(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-12);

/// Boundary of [0,1]^m (m >= 2) on a regular grid. Elements 0..m-1 are the
/// faces sigma_i = {x_i = 0}; element m is P, the union of the faces {x_i = 1}.
CoveredDomain cube_boundary_cover(int m, std::size_t N);
std::vector<int> cube_face_labels(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-12);
/// True when x lies on sigma'_j = {x_j = 1}, the face disjoint from sigma_j.
bool on_opposite_face(const Eigen::Ref<const Eigen::VectorXd>& x, int j, double tol = 1e-12);

/// Cover of a sampled circle by closed arcs [start, end] (radians, counterclockwise).
CoverAssignment arc_cover(const SampledDomain& circle, const std::vector<std::pair<double, double>>& arcs,
                          double tol = 1e-12);

/// A null-homotopic 3-arc cover of the circle: one arc covering all but a
/// small gap around angle 0, a short arc closing the gap, and a short arc
/// inside the first one opposite the gap. No point lies in all three.
CoverAssignment degenerate_arc_cover(const SampledDomain& circle);

/// Largest nearest-neighbor spacing of the sample (in rho).
double mesh_size(const SampledDomain& domain);

}  // namespace fnb
