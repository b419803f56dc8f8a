#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fnb/domains.hpp"

namespace fnb {

/// Parametric map families X -> R^m.
///
/// Parameter layouts (always output-coordinate-major, row-major matrices):
///   constant        [c_1..c_m]
///   affine          [A (m x d) row-major, offset (m)]        d = ambient dim of X
///   identity_embed  []                                        requires m >= d
///   circle_fourier  per output: [a0, a1, b1, ..., aK, bK]     S^1 only, value a0 + sum a_k cos k t + b_k sin k t
///   sphere_harmonic per output: coefficients of all monomials in (x,y,z) of total degree <= D   (S^2 only)
///   ambient_poly    same as sphere_harmonic for any domain, monomials in the ambient coordinates
///   radial_warp     [A (m x 2) row-major, c0, c1, s1, ..., cK, sK]   S^1 only,
///                   value exp(c0 + sum c_k cos k t + s_k sin k t) * A p
/// Monomials are ordered by total degree, then lexicographically by exponent
/// vector with higher powers of earlier coordinates first.
enum class Family { constant, affine, identity_embed, circle_fourier, sphere_harmonic, radial_warp, ambient_poly };

std::string to_string(Family family);
Family parse_family(const std::string& name);

struct MapSpec {
  Family family = Family::constant;
  int m_out = 1;
  std::vector<double> params;

  bool operator==(const MapSpec&) const = default;
};

/// Images f(x_i), aligned with the domain samples.
using ImageSet = PointSet;

/// Shape information a family needs beyond (family, m_out).
struct FamilyShape {
  int in_dim = 2;  // ambient dimension of X
  int degree = 3;  // K for trig families, D for polynomial families
};

std::size_t family_arity(Family family, int m_out, const FamilyShape& shape);
/// Degree implied by a parameter vector (K or D); 0 for families without one.
int family_degree(const MapSpec& map, int in_dim);
bool family_supports(Family family, const SampledDomain& domain);

/// Pointwise evaluation. Throws InvalidArgument on a family/domain mismatch or
/// when the parameter count does not match the family's arity.
ImageSet evaluate(const MapSpec& map, const SampledDomain& domain);

/// Parameters drawn i.i.d. uniform in [-scale, scale] from Rng(seed).
MapSpec random_map(Family family, int m_out, std::uint64_t seed, double scale, const FamilyShape& shape);

/// Parameters of circle_fourier of degree K that reproduce the standard
/// embedding S^1 -> R^2 (zero-padded into further output coordinates).
MapSpec circle_fourier_identity(int K, int m_out = 2);

/// Finite-difference estimate of the map's Lipschitz modulus on the sample:
/// max over samples of |f(x) - f(y)| / rho(x, y) with y the nearest other sample.
double modulus_of_continuity(const SampledDomain& domain, const ImageSet& images);

}  // namespace fnb
