#pragma once

#include <optional>
#include <span>

#include "fnb/types.hpp"

namespace fnb::geom {

/// Tolerance set shared by the geometric primitives. All values are relative
/// to the natural scale of the inputs (unit sphere, or the input diameter).
struct Tolerances {
  double rank = 1e-9;    // affine dependence in circumsphere
  double sphere = 1e-9;  // residual of a fitted sphere
  double unit = 1e-9;    // |p| = 1 check for sphere points
  double ball = 1e-9;    // slack of an enclosing ball
};

struct Sphere {
  Point center;
  double radius = 0.0;
};

/// Smallest sphere through k points (2 <= k <= m+1) whose center lies in
/// their affine hull. Returns nullopt when the points are affinely dependent
/// at relative tolerance `rank_tol`. Two coincident points give radius 0.
std::optional<Sphere> circumsphere(std::span<const Point> points, double rank_tol = 1e-9);

/// Chord length on the unit sphere for a central angle theta in [0, pi].
double chord_from_angle(double theta);
/// Inverse of chord_from_angle on [0, 2].
double angle_from_chord(double chord);

/// Great-circle distance between two unit vectors.
double angular_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b);
double angular_diameter(const PointSet& points);
double euclidean_diameter(const PointSet& points);

struct EdgeLengths {
  double euclidean = 0.0;
  double angular = 0.0;
};

/// Edge lengths of the regular triangulation of S^n obtained by projecting an
/// inscribed regular (n+1)-simplex: sqrt(2(n+2)/(n+1)) and its central angle.
EdgeLengths regular_edge_lengths(int n);

/// Lower bound sqrt((n+2)/n) on the largest distance between two neighbors
/// of any continuous map from S^n into a contractible space.
double neighbor_distance_bound(int n);

/// Left-hand side of the spherical Jung inequality (Dekster):
///   2 asin( sqrt((n+1)/(2n)) sin(circ) ) <= angular diameter,
/// for a set of angular circumradius `circ` on S^n, n >= 2, circ in [0, pi/2].
double dekster_diameter_bound(int n, double circ);

struct AngularBall {
  Point center;
  double radius = 0.0;
};

/// True iff some open hemisphere contains all points; optionally reports its pole.
bool in_open_hemisphere(const PointSet& points, Point* pole = nullptr, double tol = 1e-12);

/// Least angular ball containing a finite set of unit vectors that fits in an
/// open hemisphere. A set that only fits in a closed hemisphere (e.g. spread
/// over a great circle) gets radius pi/2 around that hemisphere's pole.
/// Throws GeometryError("not-in-hemisphere") when no closed hemisphere fits.
///
/// For such sets the angular circumcenter is the direction of the minimum-norm
/// point of the convex hull, and cos(radius) is its norm. That point is found
/// with Wolfe's algorithm; small sets are additionally checked by enumerating
/// affine hulls of subsets of size <= dim, keeping the smallest radius found.
AngularBall min_enclosing_ball_angular(const PointSet& points, const Tolerances& tol = {});

}  // namespace fnb::geom
