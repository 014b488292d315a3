#include "hypdim/boxdim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

namespace hypdim {

std::vector<Point> sample_leaf_set(const MarkovCoding& coding, Bundle bundle, int depth, std::uint64_t max_count) {
  if (depth < 1) throw InvalidArgument("sample_leaf_set: depth must be >= 1");
  std::vector<Point> out;
  if (!coding.two_sided) {
    if (bundle == Bundle::stable) throw InvalidArgument("sample_leaf_set: repellers have no stable leaves");
    for (const auto& w : enumerate_words(coding, depth, max_count)) out.push_back(coding.anchor(w));
    return out;
  }
  const Point& base = coding.reference_point;
  // Backward words (w_{-1}, w_{-2}, ...) follow the reversed transitions.
  const TransitionMatrix a = bundle == Bundle::unstable ? coding.transition : TransitionMatrix(coding.transition.transpose());
  for (const auto& w : enumerate_words(a, depth, max_count)) {
    if (coding.on_leaf && !coding.on_leaf(w.front(), bundle, base)) continue;
    out.push_back(coding.cylinder_map(w, bundle, base).origin);
  }
  return out;
}

double median_nn_spacing(const std::vector<Point>& points) {
  if (points.size() < 2) return 0.0;
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    for (Eigen::Index j = 0; j < points[a].size(); ++j)
      if (points[a](j) != points[b](j)) return points[a](j) < points[b](j);
    return false;
  });
  const std::size_t queries = std::min<std::size_t>(2000, points.size());
  const std::size_t stride = points.size() / queries;
  std::vector<double> nn;
  nn.reserve(queries);
  for (std::size_t q = 0; q < queries; ++q) {
    const std::size_t pos = q * stride;
    const Point& p = points[order[pos]];
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = pos + 1; j < order.size(); ++j) {
      const Point& o = points[order[j]];
      if (o(0) - p(0) >= best) break;
      best = std::min(best, (o - p).norm());
    }
    for (std::size_t j = pos; j-- > 0;) {
      const Point& o = points[order[j]];
      if (p(0) - o(0) >= best) break;
      best = std::min(best, (o - p).norm());
    }
    nn.push_back(best);
  }
  std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2), nn.end());
  return nn[nn.size() / 2];
}

std::vector<double> geometric_ladder(double ratio, int k_lo, int k_hi) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("geometric_ladder: ratio must lie in (0,1)");
  std::vector<double> out;
  for (int k = k_lo; k <= k_hi; ++k) out.push_back(std::pow(ratio, k));
  return out;
}

namespace {

std::uint64_t count_boxes(const std::vector<Point>& points, double eps) {
  const auto d = points.front().size();
  if (d > 2) throw InvalidArgument("box_dimension: ambient dimension above 2 is not supported");
  std::vector<std::uint64_t> keys;
  keys.reserve(points.size());
  for (const auto& p : points) {
    std::uint64_t key = 0;
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto idx = static_cast<std::int64_t>(std::floor(p(j) / eps + 1e-6));
      if (idx < -(std::int64_t{1} << 30) || idx >= (std::int64_t{1} << 30))
        throw InvalidArgument("box_dimension: scale too fine for the grid index range");
      key = (key << 32) | static_cast<std::uint32_t>(idx + (std::int64_t{1} << 30));
    }
    keys.push_back(key);
  }
  std::sort(keys.begin(), keys.end());
  return static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

}  // namespace

BoxCountTable box_dimension(const std::vector<Point>& points, std::vector<double> scales) {
  if (points.empty()) throw InvalidArgument("box_dimension: no points");
  if (scales.size() < 2) throw InvalidArgument("box_dimension: need at least two scales");
  for (double s : scales)
    if (!(s > 0.0)) throw InvalidArgument("box_dimension: scales must be positive");
  std::sort(scales.begin(), scales.end(), std::greater<>());
  const double spacing = median_nn_spacing(points);
  if (scales.back() < 10.0 * spacing)
    throw InvalidArgument("box_dimension: smallest scale " + std::to_string(scales.back()) +
                          " is below 10x the sampling spacing " + std::to_string(spacing));
  BoxCountTable t;
  t.scales = scales;
  for (double s : scales) t.counts.push_back(count_boxes(points, s));
  if (std::all_of(t.counts.begin(), t.counts.end(), [&](auto c) { return c == t.counts.front(); }))
    throw InvalidArgument("box_dimension: all counts are equal; widen the scale ladder");

  const auto n = static_cast<double>(scales.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double x = -std::log(scales[i]);
    const double y = std::log(static_cast<double>(t.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  t.fit_dim = slope;
  for (std::size_t i = 0; i < scales.size(); ++i) {
    const double x = -std::log(scales[i]);
    const double y = std::log(static_cast<double>(t.counts[i]));
    t.fit_residual = std::max(t.fit_residual, std::abs(y - (intercept + slope * x)));
  }
  return t;
}

namespace {

std::vector<double> admissible_ladder(double ratio, double spacing) {
  std::vector<double> out;
  for (double s : geometric_ladder(ratio, 2, 6))
    if (s >= 10.0 * spacing) out.push_back(s);
  if (out.size() < 2)
    throw InvalidArgument("box-count ladder: fewer than two scales lie above 10x the sampling spacing");
  return out;
}

int leaf_depth(const MarkovCoding& c, Bundle bundle, int requested, double max_points) {
  const TransitionMatrix a = bundle == Bundle::unstable ? c.transition : TransitionMatrix(c.transition.transpose());
  int d = std::max(1, requested);
  while (d > 1 && count_words(a, d) > max_points) --d;
  return d;
}

}  // namespace

BoxCountTable boxdim_leaf(const CatalogEntry& entry, Bundle bundle, const OracleOptions& options) {
  if (!entry.coding) throw InvalidArgument(entry.system.name + ": box counting needs a coding");
  const auto& c = *entry.coding;
  const int d = leaf_depth(c, bundle, options.depth, static_cast<double>(options.max_points));
  const auto pts = sample_leaf_set(c, bundle, d);
  return box_dimension(pts, admissible_ladder(entry.info.box_ratio, median_nn_spacing(pts)));
}

BoxCountTable boxdim_oracle(const CatalogEntry& entry, const OracleOptions& options) {
  if (!entry.coding) throw InvalidArgument(entry.system.name + ": box counting needs a coding");
  const auto& c = *entry.coding;
  if (!c.two_sided) return boxdim_leaf(entry, Bundle::unstable, options);
  // f^d of the anchor of w_0 .. w_{2d-1} lies in the two-sided cylinder
  // [w_0 .. w_{d-1} . w_d .. w_{2d-1}], so these points cover the whole set.
  int d = std::max(1, options.depth);
  while (d > 1 && count_words(c.transition, 2 * d) > static_cast<double>(options.max_points)) --d;
  std::vector<Point> pts;
  for (const auto& w : enumerate_words(c, 2 * d, options.max_points)) pts.push_back(entry.system.orbit_point(c.anchor(w), d));
  return box_dimension(pts, admissible_ladder(entry.info.box_ratio, median_nn_spacing(pts)));
}

void write_boxdim_csv(std::ostream& os, const BoxCountTable& table) {
  os << "scale,count\n";
  char buf[64];
  for (std::size_t i = 0; i < table.scales.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,", table.scales[i]);
    os << buf << table.counts[i] << '\n';
  }
}

}  // namespace hypdim
