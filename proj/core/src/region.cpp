#include "hypdim/region.hpp"

#include <cmath>

namespace hypdim {

std::string_view to_string(Bundle b) { return b == Bundle::stable ? "stable" : "unstable"; }

Point Region::center() const {
  return origin + edges * Eigen::VectorXd::Constant(dim(), 0.5);
}

std::vector<Point> Region::corners() const {
  const int k = dim();
  std::vector<Point> out;
  out.reserve(std::size_t{1} << k);
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    Point p = origin;
    for (int j = 0; j < k; ++j)
      if (mask & (1u << j)) p += edges.col(j);
    out.push_back(std::move(p));
  }
  return out;
}

double Region::diameter() const {
  double best = 0.0;
  const auto pts = corners();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).norm());
  return best;
}

Eigen::VectorXd Region::coordinates(const Point& p) const {
  return edges.colPivHouseholderQr().solve(p - origin);
}

bool Region::contains(const Point& p, double tol) const {
  const Eigen::VectorXd t = coordinates(p);
  if ((at(t) - p).norm() > tol * std::max(1.0, p.norm())) return false;
  const Eigen::VectorXd len = side_lengths();
  for (int j = 0; j < dim(); ++j) {
    const double slack = len(j) > 0 ? tol / len(j) : tol;
    if (t(j) < -slack || t(j) > 1.0 + slack) return false;
  }
  return true;
}

bool Region::contains(const Region& other, double tol) const {
  for (const auto& c : other.corners())
    if (!contains(c, tol)) return false;
  return true;
}

Region Region::interval(double lo, double hi) {
  Region r;
  r.origin = Point::Constant(1, lo);
  r.edges = Matrix::Constant(1, 1, hi - lo);
  return r;
}

Region Region::box(const Point& lo, const Point& hi) {
  Region r;
  r.origin = lo;
  r.edges = (hi - lo).asDiagonal();
  return r;
}

Region Region::segment(const Point& start, const Point& direction, double length) {
  Region r;
  r.origin = start;
  r.edges = direction.normalized() * length;
  return r;
}

}  // namespace hypdim
