#pragma once

#include <limits>
#include <vector>

#include "fnb/types.hpp"

namespace fnb {

/// A sphere whose open ball contains no point of the set (up to eps_inside)
/// and which passes through every member (up to tau_on).
struct EmptySphere {
  Point center;
  double radius = 0.0;
  std::vector<std::size_t> members;  // sorted, at least one
  /// min over non-members of |center - y| - radius; +inf when every point is a member.
  double slack = std::numeric_limits<double>::infinity();
};

/// Absolute tolerances; see NeighborConfig for the scale-relative defaults.
struct EmptySphereOptions {
  double tau_on = 1e-8;
  double eps_inside = 1e-6;
  double eps_coincide = 1e-9;
  double rank_tol = 1e-9;
  double box_factor = 1e5;  // Voronoi cells are clipped to a box of this many diameters
  int threads = 1;
};

struct EmptySphereComplex {
  std::vector<EmptySphere> spheres;
  int affine_dim = 0;     // dimension of the affine hull of the point set
  bool complete = false;  // false when affine_dim > 3 (not enumerated)
};

/// Enumerates the maximal empty spheres of a finite point set: the Voronoi
/// vertices of each clipped Voronoi cell, plus one radius-0 sphere per group
/// of coincident points. Two points are neighbors in the open-ball sense iff
/// some listed sphere has both as members. Works in the affine hull of the
/// points, which must have dimension <= 3; otherwise `complete` is false and
/// the list is empty.
EmptySphereComplex empty_spheres(const PointSet& points, const EmptySphereOptions& options);

}  // namespace fnb
