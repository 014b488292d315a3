#include "hypdim/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace hypdim {

bool MarkovCoding::admissible(std::span<const int> word) const {
  const int k = alphabet_size();
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= k) return false;
    if (i + 1 < word.size() && transition(word[i], word[i + 1]) == 0) return false;
  }
  return true;
}

bool MarkovCoding::admissible_backward(std::span<const int> word) const {
  // word = (w_{-1}, w_{-2}, ...): consecutive entries are reversed transitions.
  const int k = alphabet_size();
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (word[i] < 0 || word[i] >= k) return false;
    if (i + 1 < word.size() && transition(word[i + 1], word[i]) == 0) return false;
  }
  return true;
}

Word itinerary(const MarkovCoding& coding, const Point& z, int from, int to) {
  if (to <= from) return {};
  Word out;
  out.reserve(static_cast<std::size_t>(to - from));
  if (from >= 0) {
    Point x = z;
    for (int j = 0; j < from; ++j) x = coding.forward(x);
    for (int j = from; j < to; ++j) {
      out.push_back(coding.symbol_of(x));
      x = coding.forward(x);
    }
    return out;
  }
  if (!coding.two_sided || !coding.backward)
    throw InvalidArgument("itinerary: backward symbols need a two-sided coding");
  if (to > 0) throw InvalidArgument("itinerary: mixed forward/backward ranges are not supported");
  // Collect j = -1, -2, ..., from and return them in increasing j order.
  Word back;
  Point x = z;
  for (int j = -1; j >= from; --j) {
    x = coding.backward(x);
    back.push_back(coding.symbol_of(x));
  }
  for (int j = from; j < to; ++j) out.push_back(back[static_cast<std::size_t>(-j - 1)]);
  return out;
}

Region cylinder(const MarkovCoding& coding, const Point& z, int depth, Bundle bundle) {
  if (depth < 1) throw InvalidArgument("cylinder: depth must be >= 1");
  if (depth > coding.resolution_limit)
    throw InvalidArgument("cylinder: depth " + std::to_string(depth) + " exceeds the coding resolution limit " +
                          std::to_string(coding.resolution_limit));
  if (bundle == Bundle::stable) {
    if (!coding.two_sided) throw InvalidArgument("cylinder: stable cylinders need a two-sided coding");
    // Backward word w_{-1}, ..., w_{-depth}.
    Word back = itinerary(coding, z, -depth, 0);
    std::reverse(back.begin(), back.end());
    return coding.cylinder_map(back, bundle, z);
  }
  const Word w = itinerary(coding, z, 0, depth);
  return coding.cylinder_map(w, bundle, z);
}

namespace {

std::vector<Point> mesh(const Region& r, int mesh_points) {
  std::vector<Point> pts;
  const int d = r.dim();
  if (d == 1) {
    pts.reserve(static_cast<std::size_t>(mesh_points));
    for (int i = 0; i < mesh_points; ++i) {
      Eigen::VectorXd t(1);
      t(0) = static_cast<double>(i) / (mesh_points - 1);
      pts.push_back(r.at(t));
    }
    return pts;
  }
  const int per_axis = std::max(2, static_cast<int>(std::lround(std::pow(mesh_points, 1.0 / d))));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Eigen::VectorXd t(d);
    for (int j = 0; j < d; ++j) t(j) = static_cast<double>(idx[static_cast<std::size_t>(j)]) / (per_axis - 1);
    pts.push_back(r.at(t));
    int j = 0;
    while (j < d && ++idx[static_cast<std::size_t>(j)] == per_axis) idx[static_cast<std::size_t>(j++)] = 0;
    if (j == d) break;
  }
  return pts;
}

}  // namespace

CylinderRatio quasi_conformal_ratio(const SmoothSystem& sys, const MarkovCoding& coding, const Point& z, int n,
                                    int k, Bundle bundle, int mesh_points) {
  if (n < 1) throw InvalidArgument("quasi_conformal_ratio: n must be >= 1");
  if (k < 0) throw InvalidArgument("quasi_conformal_ratio: k must be >= 0");
  if (mesh_points < 2) throw InvalidArgument("quasi_conformal_ratio: mesh needs at least two points");
  const Region c = cylinder(coding, z, n + k, bundle);
  if (!(c.diameter() > 0.0)) throw NumericalError("quasi_conformal_ratio", "empty sampled cylinder");

  const std::vector<Point> pts = mesh(c, mesh_points);
  std::vector<Point> images;
  images.reserve(pts.size());
  for (const auto& p : pts) {
    Point y = p;
    for (int i = 0; i < n; ++i) y = sys.forward_lift(y);
    images.push_back(std::move(y));
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double base = (pts[i] - pts[j]).norm();
      if (base <= 0.0) continue;
      const double r = (images[i] - images[j]).norm() / base;
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
  }
  if (!(lo > 0.0) || !std::isfinite(lo))
    throw NumericalError("quasi_conformal_ratio", "degenerate mesh on the cylinder");
  CylinderRatio out;
  out.z = z;
  out.n = n;
  out.k = k;
  out.bundle = bundle;
  out.lambda_lower = lo;
  out.lambda_upper = hi;
  return out;
}

double count_words(const TransitionMatrix& a, int n) {
  if (n < 1) throw InvalidArgument("count_words: n must be >= 1");
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows());
  const Eigen::MatrixXd ad = a.cast<double>();
  for (int i = 1; i < n; ++i) v = ad * v;
  return v.sum();
}

std::vector<Word> enumerate_words(const TransitionMatrix& a, int n, std::uint64_t max_count) {
  if (n < 1) throw InvalidArgument("enumerate_words: n must be >= 1");
  const double count = count_words(a, n);
  if (count > static_cast<double>(max_count))
    throw InvalidArgument("enumerate_words: " + std::to_string(static_cast<long double>(count)) +
                          " words of length " + std::to_string(n) + " exceed the bound " +
                          std::to_string(max_count) + "; use a smaller depth");
  const int k = static_cast<int>(a.rows());
  std::vector<Word> out;
  out.reserve(static_cast<std::size_t>(count));
  Word w(static_cast<std::size_t>(n), 0);
  // Iterative depth-first search; children visited in increasing symbol order.
  std::vector<int> next(static_cast<std::size_t>(n), 0);
  int pos = 0;
  next[0] = 0;
  while (pos >= 0) {
    auto& cand = next[static_cast<std::size_t>(pos)];
    bool advanced = false;
    while (cand < k) {
      const int s = cand++;
      if (pos > 0 && a(w[static_cast<std::size_t>(pos - 1)], s) == 0) continue;
      w[static_cast<std::size_t>(pos)] = s;
      advanced = true;
      break;
    }
    if (!advanced) {
      --pos;
      continue;
    }
    if (pos + 1 == n) {
      out.push_back(w);
    } else {
      ++pos;
      next[static_cast<std::size_t>(pos)] = 0;
    }
  }
  return out;
}

std::vector<Word> enumerate_words(const MarkovCoding& coding, int n, std::uint64_t max_count) {
  return enumerate_words(coding.transition, n, max_count);
}

bool is_irreducible(const TransitionMatrix& a) {
  const int k = static_cast<int>(a.rows());
  if (k == 0) return false;
  auto reach_all = [k](auto&& edge) {
    std::vector<char> seen(static_cast<std::size_t>(k), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int count = 1;
    while (!q.empty()) {
      const int i = q.front();
      q.pop();
      for (int j = 0; j < k; ++j) {
        if (edge(i, j) && !seen[static_cast<std::size_t>(j)]) {
          seen[static_cast<std::size_t>(j)] = 1;
          ++count;
          q.push(j);
        }
      }
    }
    return count == k;
  };
  return reach_all([&](int i, int j) { return a(i, j) != 0; }) &&
         reach_all([&](int i, int j) { return a(j, i) != 0; });
}

MarkovCoding golden_mean_coding() {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  MarkovCoding c;
  c.rectangles = {Region::interval(0.0, 1.0 / phi), Region::interval(1.0 / phi, 1.0)};
  c.transition = TransitionMatrix{{1, 1}, {1, 0}};
  c.symbol_of = [phi](const Point& x) { return x(0) < 1.0 / phi ? 0 : 1; };
  c.forward = [phi](const Point& x) {
    Point y = x * phi;
    y(0) -= std::floor(y(0));
    return y;
  };
  auto interval_of = [phi](std::span<const int> w) {
    double lo = w.back() == 0 ? 0.0 : 1.0 / phi;
    double hi = w.back() == 0 ? 1.0 / phi : 1.0;
    for (std::size_t j = w.size() - 1; j-- > 0;) {
      const double shift = static_cast<double>(w[j]);
      lo = (lo + shift) / phi;
      hi = (hi + shift) / phi;
    }
    return std::pair{lo, hi};
  };
  c.cylinder_map = [interval_of](std::span<const int> w, Bundle, const Point&) {
    const auto [lo, hi] = interval_of(w);
    return Region::interval(lo, hi);
  };
  c.anchor = [interval_of](std::span<const int> w) { return Point::Constant(1, interval_of(w).first); };
  c.reference_point = Point::Zero(1);
  return c;
}

}  // namespace hypdim
