#pragma once

#include <array>
#include <string>
#include <vector>

#include "fnb/domains.hpp"

namespace fnb {

/// phi(x) for every sample; support lists the elements with phi_i(x) > 0.
struct PartitionOfUnity {
  std::vector<Eigen::VectorXd> values;
  std::vector<std::vector<int>> support;
  double r_thick = 0.0;

  int element_count() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
};

/// phi_i = g_i / sum_j g_j with g_i(x) = max(0, r_thick - rho(x, C_i)), rho
/// to the nearest sample of element i. Subordinate to the open
/// r_thick-thickenings of the elements. Throws GeometryError("cover-degenerate")
/// if some phi(x) is positive in every coordinate (thickenings meet).
PartitionOfUnity build_partition(const SampledDomain& domain, const CoverAssignment& cover, double r_thick);

/// Smallest r at which the r-thickenings of all elements share a sample:
/// min over samples of max_i rho(x, C_i). Admissible thickenings are below it.
double common_thickening_radius(const SampledDomain& domain, const CoverAssignment& cover);

/// h(x) = sum_i phi_i(x) e_i on the boundary of the standard simplex.
/// Throws GeometryError("interior-hit") if some h(x) has no zero coordinate.
std::vector<Eigen::VectorXd> h_map(const PartitionOfUnity& pou);

/// Central projection of points of the boundary of the (n-1)-simplex onto the
/// unit sphere S^{n-2} around the barycenter, in a fixed orthonormal basis of
/// the hyperplane sum = 1.
std::vector<Eigen::VectorXd> project_to_sphere(const std::vector<Eigen::VectorXd>& h);

struct HomotopyEstimate {
  int degree = 0;
  double confidence = 0.0;  // 1 - 2 |raw_sum - degree|, floored at 0
  double raw_sum = 0.0;
};

/// Winding number of a closed loop on S^1 (points in R^2, consecutive steps
/// below pi/2) or degree of a map from an oriented closed triangle mesh to
/// S^2 (signed solid angles; every image triangle of angular diameter below
/// pi/2). Throws GeometryError("undersampled") otherwise.
HomotopyEstimate winding_number(const std::vector<Eigen::VectorXd>& loop);
HomotopyEstimate mesh_degree(const std::vector<Eigen::VectorXd>& values, const std::vector<std::array<int, 3>>& triangles);

/// Orientation of X used for degrees: the sample indices of S^1-like domains
/// in counterclockwise order, or an outward-oriented triangulation of
/// S^2-like domains (convex hull after central projection).
std::vector<std::size_t> domain_loop(const SampledDomain& domain);
std::vector<std::array<int, 3>> domain_mesh(const SampledDomain& domain);

enum class CoverClass { non_null_homotopic, null_homotopic, inconclusive };
std::string to_string(CoverClass c);

struct CoverCertificate {
  CoverClass verdict = CoverClass::inconclusive;
  HomotopyEstimate estimate;                // at the default thickening
  std::vector<double> r_thick;              // default, then the two retries
  std::vector<HomotopyEstimate> estimates;  // aligned with r_thick
  std::string reason;
};

/// Degree of h over X when dim X = n - 2 and dim X in {1, 2}. Uses r_thick
/// (or 0.6x the common thickening radius when r_thick <= 0) and repeats at
/// 0.5x and 0.75x of that radius; the verdict needs all three to agree.
CoverCertificate certify_cover(const SampledDomain& domain, const CoverAssignment& cover, double r_thick = 0.0);

}  // namespace fnb
