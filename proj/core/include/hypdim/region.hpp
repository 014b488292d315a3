#pragma once

#include "hypdim/types.hpp"

#include <vector>

namespace hypdim {

/// Affine image of the unit cube: { origin + edges * t : t in [0,1]^k }.
///
/// Covers intervals, products of intervals, parallelograms and 1-D leaf
/// segments embedded in the plane, which is every cylinder shape the
/// built-in codings produce.
struct Region {
  Point origin;
  Matrix edges;  // ambient_dim x k

  int ambient_dim() const { return static_cast<int>(origin.size()); }
  int dim() const { return static_cast<int>(edges.cols()); }

  Point at(const Eigen::VectorXd& t) const { return origin + edges * t; }
  Point center() const;
  std::vector<Point> corners() const;
  double diameter() const;

  /// Lengths of the generating edges.
  Eigen::VectorXd side_lengths() const { return edges.colwise().norm().transpose(); }

  /// Local coordinates t of p (least squares when p is off the region's affine hull).
  Eigen::VectorXd coordinates(const Point& p) const;

  bool contains(const Point& p, double tol = 1e-12) const;

  /// Convexity makes corner containment sufficient.
  bool contains(const Region& other, double tol = 1e-12) const;

  static Region interval(double lo, double hi);
  static Region box(const Point& lo, const Point& hi);
  static Region segment(const Point& start, const Point& direction, double length);
};

}  // namespace hypdim
