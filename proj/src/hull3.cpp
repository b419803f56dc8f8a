#include "fnb/hull3.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <unordered_map>

#include "fnb/types.hpp"

namespace fnb {

namespace {

struct Face {
  std::array<int, 3> v;
  Eigen::Vector3d normal;
  double offset;
  bool alive = true;
};

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

}  // namespace

std::vector<std::array<int, 3>> convex_hull_3d(const std::vector<Eigen::Vector3d>& P) {
  const int N = static_cast<int>(P.size());
  if (N < 4) throw GeometryError("convex_hull_3d: need at least 4 points");
  double scale = 0.0;
  for (const auto& p : P) scale = std::max(scale, (p - P[0]).norm());
  const double eps = 1e-12 * std::max(scale, 1e-300);

  // Initial tetrahedron from extreme points.
  int i1 = 0;
  for (int i = 0; i < N; ++i)
    if ((P[i] - P[0]).norm() > (P[i1] - P[0]).norm()) i1 = i;
  int i2 = -1;
  double best = eps;
  for (int i = 0; i < N; ++i) {
    const double d = (P[i] - P[0]).cross(P[i1] - P[0]).norm() / std::max((P[i1] - P[0]).norm(), 1e-300);
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0) throw GeometryError("convex_hull_3d: points are collinear");
  const Eigen::Vector3d n0 = (P[i1] - P[0]).cross(P[i2] - P[0]).normalized();
  int i3 = -1;
  best = eps;
  for (int i = 0; i < N; ++i) {
    const double d = std::abs(n0.dot(P[i] - P[0]));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0) throw GeometryError("convex_hull_3d: points are coplanar");

  const Eigen::Vector3d inside = 0.25 * (P[0] + P[i1] + P[i2] + P[i3]);
  std::vector<Face> faces;
  std::unordered_map<std::uint64_t, int> edges;  // directed edge -> face
  auto add_face = [&](int a, int b, int c) {
    Face f{{a, b, c}, (P[b] - P[a]).cross(P[c] - P[a]), 0.0};
    if (f.normal.dot(inside - P[a]) > 0) {
      std::swap(f.v[1], f.v[2]);
      f.normal = -f.normal;
    }
    f.normal.normalize();
    f.offset = f.normal.dot(P[f.v[0]]);
    const int id = static_cast<int>(faces.size());
    for (int k = 0; k < 3; ++k) edges[edge_key(f.v[k], f.v[(k + 1) % 3])] = id;
    faces.push_back(f);
  };
  add_face(0, i1, i2);
  add_face(0, i1, i3);
  add_face(0, i2, i3);
  add_face(i1, i2, i3);

  std::vector<char> visible;
  for (int p = 0; p < N; ++p) {
    if (p == 0 || p == i1 || p == i2 || p == i3) continue;
    visible.assign(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (faces[f].alive && faces[f].normal.dot(P[p]) - faces[f].offset > eps) visible[f] = 1, any = true;
    if (!any) continue;
    std::vector<std::pair<int, int>> horizon;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      for (int k = 0; k < 3; ++k) {
        const int a = faces[f].v[k], b = faces[f].v[(k + 1) % 3];
        const auto twin = edges.find(edge_key(b, a));
        if (twin == edges.end() || !visible[static_cast<std::size_t>(twin->second)]) horizon.emplace_back(a, b);
      }
    }
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (!visible[f]) continue;
      faces[f].alive = false;
      for (int k = 0; k < 3; ++k) edges.erase(edge_key(faces[f].v[k], faces[f].v[(k + 1) % 3]));
    }
    for (const auto& [a, b] : horizon) {
      // Keep the horizon orientation, which is already outward.
      Face f{{a, b, p}, (P[b] - P[a]).cross(P[p] - P[a]).normalized(), 0.0};
      f.offset = f.normal.dot(P[a]);
      const int id = static_cast<int>(faces.size());
      for (int k = 0; k < 3; ++k) edges[edge_key(f.v[k], f.v[(k + 1) % 3])] = id;
      faces.push_back(f);
    }
  }
  std::vector<std::array<int, 3>> out;
  for (const auto& f : faces)
    if (f.alive) out.push_back(f.v);
  return out;
}

}  // namespace fnb
