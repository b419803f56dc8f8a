#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

namespace fnb {

/// Convex hull of points in R^3 as triangles with outward (counterclockwise
/// seen from outside) orientation. Points strictly inside are skipped.
/// Incremental; each insertion scans every live face, which is fine for the
/// few thousand points used here. Throws GeometryError if all points are coplanar.
std::vector<std::array<int, 3>> convex_hull_3d(const std::vector<Eigen::Vector3d>& points);

}  // namespace fnb
