#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace fnb {

/// A point of some Euclidean space R^m. Dimension is carried at runtime.
using Point = Eigen::VectorXd;

/// Column-per-point storage for a finite set of points in R^m.
class PointSet {
 public:
  PointSet() = default;
  PointSet(Eigen::Index dim, std::size_t count) : coords_(dim, static_cast<Eigen::Index>(count)) {}
  explicit PointSet(Eigen::MatrixXd coords) : coords_(std::move(coords)) {}

  Eigen::Index dim() const { return coords_.rows(); }
  std::size_t size() const { return static_cast<std::size_t>(coords_.cols()); }
  bool empty() const { return coords_.cols() == 0; }

  auto operator[](std::size_t i) const { return coords_.col(static_cast<Eigen::Index>(i)); }
  auto operator[](std::size_t i) { return coords_.col(static_cast<Eigen::Index>(i)); }

  const Eigen::MatrixXd& matrix() const { return coords_; }
  Eigen::MatrixXd& matrix() { return coords_; }

  /// Largest pairwise Euclidean distance. Quadratic in size().
  double diameter() const;
  Point centroid() const;
  bool all_finite() const { return coords_.allFinite(); }

 private:
  Eigen::MatrixXd coords_;
};

/// Raised when inputs violate an operation's precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised for geometric failures such as "not-in-hemisphere".
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A checked mathematical property failed; carries a reproducer in what().
class PropertyViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fnb
