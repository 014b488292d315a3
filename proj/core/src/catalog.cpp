#include "hypdim/catalog.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <memory>
#include <random>
#include <sstream>

namespace hypdim {

namespace {

constexpr double kMembershipTol = 1e-9;

ParameterRecord resolve(std::string_view family, const ParameterRecord& defaults, const ParameterRecord& given) {
  ParameterRecord out = defaults;
  for (const auto& [key, value] : given) {
    if (!defaults.contains(key)) {
      std::ostringstream msg;
      msg << family << ": unknown parameter '" << key << "' (accepted:";
      for (const auto& [k, v] : defaults) msg << ' ' << k;
      if (defaults.empty()) msg << " none";
      msg << ')';
      throw InvalidArgument(msg.str());
    }
    if (!std::isfinite(value)) throw InvalidArgument(std::string(family) + ": parameter '" + key + "' is not finite");
    out[key] = value;
  }
  return out;
}

int as_integer(std::string_view family, const std::string& key, double v) {
  if (std::abs(v - std::round(v)) > 1e-12)
    throw InvalidArgument(std::string(family) + ": parameter '" + key + "' must be an integer");
  return static_cast<int>(std::lround(v));
}

Point pt(double x) { return Point::Constant(1, x); }

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

// ---------------------------------------------------------------------------
// One-dimensional affine Cantor repellers: branch i maps [left_i, left_i + 1/slope_i] onto [0,1].

struct AffineCantor {
  std::vector<double> left;
  std::vector<double> slope;

  int size() const { return static_cast<int>(left.size()); }

  int branch_of(double x) const {
    // Nearest branch interval; gaps are split at their midpoints.
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
      const double lo = left[static_cast<std::size_t>(i)];
      const double hi = lo + 1.0 / slope[static_cast<std::size_t>(i)];
      const double d = x < lo ? lo - x : (x > hi ? x - hi : 0.0);
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    return best;
  }

  double apply(double x) const {
    const auto i = static_cast<std::size_t>(branch_of(x));
    return slope[i] * (x - left[i]);
  }

  double inverse(int i, double y) const {
    const auto k = static_cast<std::size_t>(i);
    return left[k] + y / slope[k];
  }

  std::pair<double, double> cylinder(std::span<const int> w) const {
    double lo = 0.0;
    double hi = 1.0;
    for (std::size_t j = w.size(); j-- > 0;) {
      lo = inverse(w[j], lo);
      hi = inverse(w[j], hi);
    }
    return {lo, hi};
  }

  /// Descends the cylinder tree without amplifying round-off.
  bool contains(double x, double tol = kMembershipTol) const {
    double lo = 0.0;
    double hi = 1.0;
    if (x < lo - tol || x > hi + tol) return false;
    for (int depth = 0; depth < 200 && hi - lo > tol; ++depth) {
      bool found = false;
      for (int i = 0; i < size(); ++i) {
        const double clo = lo + (hi - lo) * left[static_cast<std::size_t>(i)];
        const double chi = clo + (hi - lo) / slope[static_cast<std::size_t>(i)];
        if (x >= clo - tol && x <= chi + tol) {
          lo = clo;
          hi = chi;
          found = true;
          break;
        }
      }
      if (!found) return false;
    }
    return true;
  }

  double min_slope() const { return *std::min_element(slope.begin(), slope.end()); }
  double max_slope() const { return *std::max_element(slope.begin(), slope.end()); }

  /// Endpoints of all cylinders at the shallowest depth whose longest cylinder is <= spacing.
  std::vector<double> cover(double spacing) const {
    const double ratio = 1.0 / min_slope();
    int depth = 1;
    while (std::pow(ratio, depth) > spacing && depth < 40) ++depth;
    std::vector<std::pair<double, double>> layer{{0.0, 1.0}};
    for (int d = 0; d < depth; ++d) {
      std::vector<std::pair<double, double>> next;
      next.reserve(layer.size() * static_cast<std::size_t>(size()));
      for (const auto& [lo, hi] : layer)
        for (int i = 0; i < size(); ++i) {
          const double clo = lo + (hi - lo) * left[static_cast<std::size_t>(i)];
          next.emplace_back(clo, clo + (hi - lo) / slope[static_cast<std::size_t>(i)]);
        }
      layer = std::move(next);
    }
    std::vector<double> out;
    out.reserve(2 * layer.size());
    for (const auto& [lo, hi] : layer) {
      out.push_back(lo);
      out.push_back(hi);
    }
    return out;
  }

  double random_point(std::mt19937_64& rng, int depth = 48) const {
    std::uniform_int_distribution<int> pick(0, size() - 1);
    Word w(static_cast<std::size_t>(depth));
    for (auto& s : w) s = pick(rng);
    return cylinder(w).first;
  }
};

AffineCantor make_affine_cantor(std::string_view family, std::vector<double> slopes) {
  for (double s : slopes)
    if (!(s > 1.0))
      throw InvalidArgument(std::string(family) + ": branch slope " + std::to_string(s) +
                            " <= 1 is not expanding (hyperbolicity requires slopes > 1)");
  double total = 0.0;
  for (double s : slopes) total += 1.0 / s;
  if (total > 1.0 + 1e-12)
    throw InvalidArgument(std::string(family) + ": branch intervals of total length " + std::to_string(total) +
                          " overlap inside [0,1]; need sum of 1/slope <= 1");
  AffineCantor c;
  c.slope = slopes;
  const std::size_t k = slopes.size();
  const double gap = k > 1 ? (1.0 - total) / static_cast<double>(k - 1) : 0.0;
  double pos = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    c.left.push_back(pos);
    pos += 1.0 / slopes[i] + gap;
  }
  return c;
}

CatalogEntry build_interval_repeller(std::string name, const AffineCantor& ifs, ParameterRecord params) {
  CatalogEntry e;
  auto& s = e.system;
  s.name = name;
  s.ambient_dim = 1;
  s.kind = MapKind::expanding_endomorphism;
  s.domain.kind = DomainKind::interval;
  s.domain.dim = 1;
  for (int i = 0; i < ifs.size(); ++i) {
    const double lo = ifs.left[static_cast<std::size_t>(i)];
    s.domain.branches.push_back(Region::interval(lo, lo + 1.0 / ifs.slope[static_cast<std::size_t>(i)]));
  }
  s.forward = [ifs](const Point& x) { return pt(ifs.apply(x(0))); };
  s.forward_lift = s.forward;
  s.backward = [ifs](const Point& y) {
    std::vector<Point> out;
    for (int i = 0; i < ifs.size(); ++i) out.push_back(pt(ifs.inverse(i, y(0))));
    return out;
  };
  s.jacobian = [ifs](const Point& x) {
    return Matrix::Constant(1, 1, ifs.slope[static_cast<std::size_t>(ifs.branch_of(x(0)))]);
  };
  s.in_invariant_set = [ifs](const Point& x) { return ifs.contains(x(0)); };
  bool uniform = true;
  for (double v : ifs.slope) uniform = uniform && v == ifs.slope.front();
  s.constant_jacobian = uniform;

  e.frame = BundleFrame::constant(Matrix(1, 0), Matrix::Identity(1, 1));

  MarkovCoding c;
  for (const auto& b : s.domain.branches) c.rectangles.push_back(b);
  c.transition = TransitionMatrix::Ones(ifs.size(), ifs.size());
  c.symbol_of = [ifs](const Point& x) { return ifs.branch_of(x(0)); };
  c.forward = s.forward;
  c.cylinder_map = [ifs](std::span<const int> w, Bundle bundle, const Point&) {
    if (bundle == Bundle::stable) throw InvalidArgument("repeller codings have no stable cylinders");
    const auto [lo, hi] = ifs.cylinder(w);
    return Region::interval(lo, hi);
  };
  c.anchor = [ifs](std::span<const int> w) { return pt(ifs.cylinder(w).first); };
  c.reference_point = pt(0.0);
  e.coding = std::move(c);

  std::vector<double> ratios;
  for (double v : ifs.slope) ratios.push_back(1.0 / v);
  auto& info = e.info;
  info.family = name;
  info.params = std::move(params);
  info.analytic_dimension = moran_root(ratios);
  info.analytic_unstable_dimension = info.analytic_dimension;
  info.witness = {1.0, 1.0 / ifs.min_slope()};
  info.max_expansion = ifs.max_slope();
  // Strongest contraction, so the finest ladder scale separates cylinders of every branch.
  info.box_ratio = 1.0 / ifs.max_slope();
  info.average_conformal = true;
  info.linear = true;
  info.sample = [ifs](std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(pt(ifs.random_point(rng)));
    return out;
  };
  info.seed_grid = [ifs](double spacing, double) {
    std::vector<Point> out;
    for (double x : ifs.cover(spacing)) out.push_back(pt(x));
    return out;
  };
  return e;
}

// ---------------------------------------------------------------------------
// Linear horseshoe on the unit square.

CatalogEntry build_horseshoe(const ParameterRecord& params) {
  const double c = params.at("contraction");
  const double ex = params.at("expansion");
  const int b = as_integer("linear_horseshoe", "branches", params.at("branches"));
  if (!(ex > 1.0)) throw InvalidArgument("linear_horseshoe: expansion must be > 1 for hyperbolicity");
  if (!(c > 0.0 && c < 1.0)) throw InvalidArgument("linear_horseshoe: contraction must lie in (0,1)");
  if (b < 2) throw InvalidArgument("linear_horseshoe: need at least 2 branches");
  if (b / ex > 1.0 + 1e-12) throw InvalidArgument("linear_horseshoe: branches/expansion > 1, strips overlap");
  if (b * c > 1.0 + 1e-12) throw InvalidArgument("linear_horseshoe: branches*contraction > 1, images overlap");

  const AffineCantor xs = make_affine_cantor("linear_horseshoe", std::vector<double>(static_cast<std::size_t>(b), ex));
  const AffineCantor ys =
      make_affine_cantor("linear_horseshoe", std::vector<double>(static_cast<std::size_t>(b), 1.0 / c));

  CatalogEntry e;
  auto& s = e.system;
  s.name = "linear_horseshoe";
  s.ambient_dim = 2;
  s.kind = MapKind::diffeomorphism;
  s.domain.kind = DomainKind::unit_square;
  s.domain.dim = 2;
  s.forward = [xs, ys](const Point& p) {
    const int i = xs.branch_of(p(0));
    return pt(xs.apply(p(0)), ys.inverse(i, p(1)));
  };
  s.forward_lift = s.forward;
  s.backward = [xs, ys](const Point& p) {
    const int i = ys.branch_of(p(1));
    return std::vector<Point>{pt(xs.inverse(i, p(0)), ys.apply(p(1)))};
  };
  const Matrix jac = (Matrix(2, 2) << ex, 0.0, 0.0, c).finished();
  s.jacobian = [jac](const Point&) { return jac; };
  s.in_invariant_set = [xs, ys](const Point& p) { return xs.contains(p(0)) && ys.contains(p(1)); };
  s.constant_jacobian = true;

  e.frame = BundleFrame::constant(Matrix(Eigen::Vector2d(0.0, 1.0)), Matrix(Eigen::Vector2d(1.0, 0.0)));

  MarkovCoding code;
  for (int i = 0; i < b; ++i) {
    const double lo = xs.left[static_cast<std::size_t>(i)];
    code.rectangles.push_back(Region::box(pt(lo, 0.0), pt(lo + 1.0 / ex, 1.0)));
  }
  code.transition = TransitionMatrix::Ones(b, b);
  code.two_sided = true;
  code.symbol_of = [xs](const Point& p) { return xs.branch_of(p(0)); };
  code.forward = s.forward;
  code.backward = [bwd = s.backward](const Point& p) { return bwd(p).front(); };
  code.cylinder_map = [xs, ys](std::span<const int> w, Bundle bundle, const Point& base) {
    if (bundle == Bundle::unstable) {
      const auto [lo, hi] = xs.cylinder(w);
      return Region::segment(pt(lo, base(1)), pt(1.0, 0.0), hi - lo);
    }
    // Backward word w_{-1}, w_{-2}, ...: the y-coordinate follows the contracting branches.
    const auto [lo, hi] = ys.cylinder(w);
    return Region::segment(pt(base(0), lo), pt(0.0, 1.0), hi - lo);
  };
  code.anchor = [xs](std::span<const int> w) { return pt(xs.cylinder(w).first, 0.0); };
  code.reference_point = pt(0.0, 0.0);
  e.coding = std::move(code);

  auto& info = e.info;
  info.family = "linear_horseshoe";
  info.params = params;
  info.analytic_unstable_dimension = std::log(static_cast<double>(b)) / std::log(ex);
  info.analytic_stable_dimension = std::log(static_cast<double>(b)) / std::log(1.0 / c);
  info.analytic_dimension = *info.analytic_unstable_dimension + *info.analytic_stable_dimension;
  info.witness = {1.0, std::max(c, 1.0 / ex)};
  info.max_expansion = ex;
  info.max_contraction = c;
  info.box_ratio = std::max(c, 1.0 / ex);
  info.average_conformal = true;
  info.linear = true;
  info.sample = [xs, ys](std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double x = xs.random_point(rng);
      out.push_back(pt(x, ys.random_point(rng)));
    }
    return out;
  };
  info.seed_grid = [xs, ys](double su, double ss) {
    const auto gx = xs.cover(su);
    const auto gy = ys.cover(ss);
    std::vector<Point> out;
    out.reserve(gx.size() * gy.size());
    for (double y : gy)
      for (double x : gx) out.push_back(pt(x, y));
    return out;
  };
  return e;
}

// ---------------------------------------------------------------------------
// Linear maps of the 2-torus.

std::vector<Point> torus_grid(double spacing) {
  const int n = std::max(1, static_cast<int>(std::ceil(1.0 / spacing)));
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) out.push_back(pt(static_cast<double>(i) / n, static_cast<double>(j) / n));
  return out;
}

std::function<std::vector<Point>(std::size_t, std::uint64_t)> uniform_sampler(int dim) {
  return [dim](std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      Point p(dim);
      for (int d = 0; d < dim; ++d) p(d) = u(rng);
      out.push_back(std::move(p));
    }
    return out;
  };
}

void torus_map_basics(SmoothSystem& s, const Matrix& a) {
  s.ambient_dim = 2;
  s.domain.kind = DomainKind::torus;
  s.domain.dim = 2;
  const Domain dom = s.domain;
  s.forward = [a, dom](const Point& x) { return dom.wrap(a * x); };
  s.forward_lift = [a](const Point& x) { return Point(a * x); };
  s.jacobian = [a](const Point&) { return a; };
  s.in_invariant_set = [](const Point& x) {
    return x.size() == 2 && (x.array() >= -kMembershipTol).all() && (x.array() <= 1.0 + kMembershipTol).all();
  };
  s.constant_jacobian = true;
}

/// Coding of an expanding integer map x -> A x mod 1 whose rectangles are
/// R_d = A^{-1}([0,1)^2 + d) for a complete digit set d.
MarkovCoding expanding_torus_coding(const Matrix& a, const std::vector<Point>& digits,
                                    std::function<int(const Point&)> symbol_of, const SmoothSystem& sys) {
  const Matrix ainv = a.inverse();
  const int k = static_cast<int>(digits.size());
  MarkovCoding c;
  for (const auto& d : digits) {
    Region r;
    r.origin = ainv * d;
    r.edges = ainv;
    c.rectangles.push_back(r);
  }
  c.transition = TransitionMatrix::Ones(k, k);
  c.symbol_of = std::move(symbol_of);
  c.forward = sys.forward;
  auto region_of = [ainv, digits](std::span<const int> w) {
    Region r;
    r.origin = Point::Zero(2);
    Matrix power = ainv;  // A^{-(j+1)}
    for (int s : w) {
      r.origin += power * digits[static_cast<std::size_t>(s)];
      power = ainv * power;
    }
    r.edges = power * ainv.inverse();  // A^{-n}
    return r;
  };
  c.cylinder_map = [region_of](std::span<const int> w, Bundle bundle, const Point& base) {
    if (bundle == Bundle::stable) throw InvalidArgument("repeller codings have no stable cylinders");
    Region r = region_of(w);
    // Translate by the lattice vector that places base inside the cylinder.
    for (int i = -3; i <= 3; ++i)
      for (int j = -3; j <= 3; ++j) {
        const Point shift = pt(i, j);
        if (r.contains(Point(base + shift), 1e-9)) {
          r.origin -= shift;
          return r;
        }
      }
    return r;
  };
  c.anchor = [region_of](std::span<const int> w) {
    Point p = region_of(w).origin;
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) -= std::floor(p(i));
    return p;
  };
  c.reference_point = Point::Zero(2);
  return c;
}

CatalogEntry build_diag(const ParameterRecord& params) {
  const int p = as_integer("diag_endomorphism", "a", params.at("a"));
  const int q = as_integer("diag_endomorphism", "b", params.at("b"));
  if (p < 2 || q < 2)
    throw InvalidArgument("diag_endomorphism: integer slopes must be >= 2 (slope <= 1 is not expanding)");
  CatalogEntry e;
  auto& s = e.system;
  s.name = "diag_endomorphism";
  s.kind = MapKind::expanding_endomorphism;
  const Matrix a = (Matrix(2, 2) << p, 0, 0, q).finished();
  torus_map_basics(s, a);
  std::vector<Point> digits;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < q; ++j) digits.push_back(pt(i, j));
  const Matrix ainv = a.inverse();
  s.backward = [ainv, digits, dom = s.domain](const Point& y) {
    std::vector<Point> out;
    for (const auto& d : digits) out.push_back(dom.wrap(ainv * (y + d)));
    return out;
  };
  e.frame = BundleFrame::constant(Matrix(2, 0), Matrix::Identity(2, 2));
  e.coding = expanding_torus_coding(
      a, digits,
      [p, q](const Point& z) {
        const int i = std::clamp(static_cast<int>(std::floor(p * z(0))), 0, p - 1);
        const int j = std::clamp(static_cast<int>(std::floor(q * z(1))), 0, q - 1);
        return i * q + j;
      },
      s);
  auto& info = e.info;
  info.family = s.name;
  info.params = params;
  info.analytic_dimension = 2.0;
  info.analytic_unstable_dimension = 2.0;
  info.witness = {1.0, 1.0 / std::min(p, q)};
  info.max_expansion = std::max(p, q);
  info.box_ratio = 1.0 / std::min(p, q);
  info.average_conformal = p == q;
  info.linear = true;
  info.sample = uniform_sampler(2);
  info.seed_grid = [](double su, double) { return torus_grid(su); };
  return e;
}

CatalogEntry build_jordan(const ParameterRecord& params) {
  const int p = as_integer("jordan_endomorphism", "scale", params.at("scale"));
  if (p < 2) throw InvalidArgument("jordan_endomorphism: scale must be an integer >= 2 (smaller is not expanding)");
  CatalogEntry e;
  auto& s = e.system;
  s.name = "jordan_endomorphism";
  s.kind = MapKind::expanding_endomorphism;
  const Matrix u = (Matrix(2, 2) << 1, 1, 0, 1).finished();
  const Matrix a = p * u;
  torus_map_basics(s, a);
  // A Z^2 = p Z^2, so {0..p-1}^2 is a complete digit set.
  std::vector<Point> digits;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) digits.push_back(pt(i, j));
  const Matrix ainv = a.inverse();
  s.backward = [ainv, digits, dom = s.domain](const Point& y) {
    std::vector<Point> out;
    for (const auto& d : digits) out.push_back(dom.wrap(ainv * (y + d)));
    return out;
  };
  e.frame = BundleFrame::constant(Matrix(2, 0), Matrix::Identity(2, 2));
  e.coding = expanding_torus_coding(
      a, digits,
      [p, u](const Point& z) {
        Point w = u * z;
        for (Eigen::Index i = 0; i < 2; ++i) w(i) -= std::floor(w(i));
        const int i = std::clamp(static_cast<int>(std::floor(p * w(0))), 0, p - 1);
        const int j = std::clamp(static_cast<int>(std::floor(p * w(1))), 0, p - 1);
        return i * p + j;
      },
      s);
  // The self-affine tile of (A, digits) has a fractal boundary for a shear, so
  // cylinders have no parallelogram representation. Anchors stay exact.
  e.coding->cylinder_map = [](std::span<const int>, Bundle, const Point&) -> Region {
    throw InvalidArgument(
        "jordan_endomorphism: cylinders are self-affine tiles with fractal boundary and have no region form");
  };
  auto& info = e.info;
  info.family = s.name;
  info.params = params;
  info.analytic_dimension = 2.0;
  info.analytic_unstable_dimension = 2.0;
  // ||A^{-n}|| <= (n+1) p^{-n} <= 1.34 (1.5/p)^n
  info.witness = {1.34, 1.5 / p};
  info.max_expansion = a.jacobiSvd().singularValues()(0);
  info.box_ratio = 1.0 / p;
  info.average_conformal = true;
  info.linear = true;
  info.sample = uniform_sampler(2);
  info.seed_grid = [](double su, double) { return torus_grid(su); };
  return e;
}

/// Two-square Markov partition of the cat map [[2,1],[1,1]] with sides along
/// the eigen-directions. Symbols are the connected pieces R_i ∩ f^{-1} R_j.
struct CatPartition {
  double lambda = 0.0;
  Point eu, es;
  std::array<Point, 2> origin;
  std::array<double, 2> width{};
  struct Piece {
    int source = 0;
    int target = 0;
    double t_start = 0.0;  // unstable coordinate inside the source square
    double s_offset = 0.0;  // stable coordinate of the image inside the target square
  };
  std::vector<Piece> pieces;
  Matrix a;

  struct Located {
    int rect = -1;
    double tu = 0.0;
    double ts = 0.0;
    Point shift;  // z + shift lies in the square
  };

  Located locate(const Point& z) const {
    Located best;
    double best_violation = std::numeric_limits<double>::infinity();
    for (int r = 0; r < 2; ++r)
      for (int i = -2; i <= 2; ++i)
        for (int j = -2; j <= 2; ++j) {
          const Point shift = pt(i, j);
          const Point d = z + shift - origin[static_cast<std::size_t>(r)];
          const double tu = d.dot(eu);
          const double ts = d.dot(es);
          const double w = width[static_cast<std::size_t>(r)];
          const double violation = std::max({0.0, -tu, tu - w, -ts, ts - w});
          if (violation == 0.0 && tu < w && ts < w) return {r, tu, ts, shift};
          if (violation < best_violation) {
            best_violation = violation;
            best = {r, std::clamp(tu, 0.0, w), std::clamp(ts, 0.0, w), shift};
          }
        }
    return best;
  }

  double piece_length(const Piece& p) const { return width[static_cast<std::size_t>(p.target)] / lambda; }

  int piece_of(const Located& loc) const {
    int best = -1;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      const auto& p = pieces[i];
      if (p.source != loc.rect) continue;
      if (loc.tu >= p.t_start - 1e-12 && loc.tu < p.t_start + piece_length(p)) return static_cast<int>(i);
      if (best < 0 || (p.t_start <= loc.tu)) best = static_cast<int>(i);
    }
    return best;
  }
};

CatPartition make_cat_partition() {
  CatPartition cp;
  const double phi = std::numbers::phi;
  cp.lambda = phi * phi;
  cp.a = (Matrix(2, 2) << 2, 1, 1, 1).finished();
  const double norm = std::sqrt(phi * phi + 1.0);
  cp.eu = pt(phi / norm, 1.0 / norm);
  cp.es = pt(-1.0 / norm, phi / norm);
  const double big = phi / norm;
  const double small = 1.0 / norm;
  cp.width = {big, small};
  cp.origin[0] = pt(0.0, 0.0);
  cp.origin[1] = big * cp.eu + (big - small) * cp.es;

  // Scan each square along the unstable direction; a piece is identified by
  // its target square and the unstable coordinate where its image starts.
  for (int r = 0; r < 2; ++r) {
    const double w = cp.width[static_cast<std::size_t>(r)];
    const int samples = 4000;
    for (int i = 0; i < samples; ++i) {
      const double tu = (i + 0.5) * w / samples;
      const double ts = 0.5 * w;
      const Point z = cp.origin[static_cast<std::size_t>(r)] + tu * cp.eu + ts * cp.es;
      const auto img = cp.locate(Point(cp.a * z));
      const double start = tu - img.tu / cp.lambda;
      const double soff = img.ts - ts / cp.lambda;
      bool known = false;
      for (const auto& p : cp.pieces)
        if (p.source == r && p.target == img.rect && std::abs(p.t_start - start) < 1e-9) known = true;
      if (!known) cp.pieces.push_back({r, img.rect, start, soff});
    }
  }
  std::sort(cp.pieces.begin(), cp.pieces.end(), [](const auto& x, const auto& y) {
    return std::tie(x.source, x.t_start) < std::tie(y.source, y.t_start);
  });
  // Markov consistency: pieces tile each square along the unstable direction.
  for (int r = 0; r < 2; ++r) {
    double expected = 0.0;
    for (const auto& p : cp.pieces) {
      if (p.source != r) continue;
      if (std::abs(p.t_start - expected) > 1e-9)
        throw NumericalError("cat_map", "two-square partition failed the Markov tiling check");
      expected += cp.piece_length(p);
    }
    if (std::abs(expected - cp.width[static_cast<std::size_t>(r)]) > 1e-9)
      throw NumericalError("cat_map", "pieces do not cover the square");
  }
  return cp;
}

CatalogEntry build_cat(const ParameterRecord& params) {
  CatalogEntry e;
  auto& s = e.system;
  s.name = "cat_map";
  s.kind = MapKind::diffeomorphism;
  const Matrix a = (Matrix(2, 2) << 2, 1, 1, 1).finished();
  torus_map_basics(s, a);
  const Matrix ainv = a.inverse();
  s.backward = [ainv, dom = s.domain](const Point& y) { return std::vector<Point>{dom.wrap(ainv * y)}; };

  const auto cp = std::make_shared<const CatPartition>(make_cat_partition());
  e.frame = BundleFrame::constant(Matrix(cp->es), Matrix(cp->eu));

  MarkovCoding c;
  for (int r = 0; r < 2; ++r) {
    Region reg;
    reg.origin = cp->origin[static_cast<std::size_t>(r)];
    reg.edges.resize(2, 2);
    reg.edges.col(0) = cp->width[static_cast<std::size_t>(r)] * cp->eu;
    reg.edges.col(1) = cp->width[static_cast<std::size_t>(r)] * cp->es;
    c.rectangles.push_back(reg);
  }
  const int k = static_cast<int>(cp->pieces.size());
  c.transition = TransitionMatrix::Zero(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      c.transition(i, j) =
          cp->pieces[static_cast<std::size_t>(i)].target == cp->pieces[static_cast<std::size_t>(j)].source ? 1 : 0;
  c.two_sided = true;
  c.symbol_of = [cp](const Point& z) { return cp->piece_of(cp->locate(z)); };
  c.forward = s.forward;
  c.backward = [bwd = s.backward](const Point& p) { return bwd(p).front(); };
  auto unstable_interval = [cp](std::span<const int> w) {
    const auto& last = cp->pieces[static_cast<std::size_t>(w.back())];
    double lo = last.t_start;
    double hi = last.t_start + cp->piece_length(last);
    for (std::size_t j = w.size() - 1; j-- > 0;) {
      const double t0 = cp->pieces[static_cast<std::size_t>(w[j])].t_start;
      lo = t0 + lo / cp->lambda;
      hi = t0 + hi / cp->lambda;
    }
    return std::pair{lo, hi};
  };
  auto stable_interval = [cp](std::span<const int> w) {
    // w = (w_{-1}, ..., w_{-n}); the innermost constraint is the last symbol.
    const auto& last = cp->pieces[static_cast<std::size_t>(w.back())];
    double lo = last.s_offset;
    double hi = last.s_offset + cp->width[static_cast<std::size_t>(last.source)] / cp->lambda;
    for (std::size_t j = w.size() - 1; j-- > 0;) {
      const double s0 = cp->pieces[static_cast<std::size_t>(w[j])].s_offset;
      lo = s0 + lo / cp->lambda;
      hi = s0 + hi / cp->lambda;
    }
    return std::pair{lo, hi};
  };
  c.cylinder_map = [cp, unstable_interval, stable_interval](std::span<const int> w, Bundle bundle,
                                                            const Point& base) {
    const auto loc = cp->locate(base);
    const Point& o = cp->origin[static_cast<std::size_t>(loc.rect)];
    if (bundle == Bundle::unstable) {
      if (cp->pieces[static_cast<std::size_t>(w.front())].source != loc.rect)
        throw InvalidArgument("cat_map cylinder: word does not start in the square containing the base point");
      const auto [lo, hi] = unstable_interval(w);
      return Region::segment(Point(o + lo * cp->eu + loc.ts * cp->es - loc.shift), cp->eu, hi - lo);
    }
    if (cp->pieces[static_cast<std::size_t>(w.front())].target != loc.rect)
      throw InvalidArgument("cat_map cylinder: backward word does not end in the square containing the base point");
    const auto [lo, hi] = stable_interval(w);
    return Region::segment(Point(o + loc.tu * cp->eu + lo * cp->es - loc.shift), cp->es, hi - lo);
  };
  c.on_leaf = [cp](int symbol, Bundle bundle, const Point& base) {
    const auto loc = cp->locate(base);
    const auto& p = cp->pieces[static_cast<std::size_t>(symbol)];
    return (bundle == Bundle::unstable ? p.source : p.target) == loc.rect;
  };
  c.anchor = [cp, unstable_interval, dom = s.domain](std::span<const int> w) {
    const int r = cp->pieces[static_cast<std::size_t>(w.front())].source;
    return dom.wrap(cp->origin[static_cast<std::size_t>(r)] + unstable_interval(w).first * cp->eu);
  };
  c.reference_point = s.domain.wrap(Point(0.5 * cp->width[0] * cp->es));
  e.coding = std::move(c);

  auto& info = e.info;
  info.family = s.name;
  info.params = params;
  info.analytic_dimension = 2.0;
  info.analytic_unstable_dimension = 1.0;
  info.analytic_stable_dimension = 1.0;
  info.witness = {1.0, 1.0 / cp->lambda};
  info.max_expansion = cp->lambda;
  info.max_contraction = 1.0 / cp->lambda;
  info.box_ratio = 1.0 / cp->lambda;
  info.average_conformal = true;
  info.linear = true;
  info.sample = uniform_sampler(2);
  // Eigen-aligned lattice over both squares; the squares tile the torus exactly.
  info.seed_grid = [cp, dom = s.domain](double su, double ss) {
    std::vector<Point> out;
    for (int r = 0; r < 2; ++r) {
      const double w = cp->width[static_cast<std::size_t>(r)];
      const int nu = std::max(1, static_cast<int>(std::ceil(w / su)));
      const int ns = std::max(1, static_cast<int>(std::ceil(w / ss)));
      for (int j = 0; j < ns; ++j)
        for (int i = 0; i < nu; ++i)
          out.push_back(dom.wrap(cp->origin[static_cast<std::size_t>(r)] + (i * w / nu) * cp->eu +
                                 (j * w / ns) * cp->es));
    }
    return out;
  };
  return e;
}

// ---------------------------------------------------------------------------
// Perturbed doubling map on the circle.

CatalogEntry build_perturbed_doubling(const ParameterRecord& params) {
  const double eps = params.at("amplitude");
  const double two_pi = 2.0 * std::numbers::pi;
  if (!(std::abs(eps) * two_pi < 1.0))
    throw InvalidArgument("perturbed_doubling: |amplitude| must be < 1/(2 pi) so that f' > 1 everywhere");

  auto lift = [eps, two_pi](double x) { return 2.0 * x + eps * std::sin(two_pi * x); };
  auto deriv = [eps, two_pi](double x) { return 2.0 + eps * two_pi * std::cos(two_pi * x); };
  // Inverse of the lift on [k/2, (k+1)/2]; the lift is increasing with F(k/2) = k.
  auto inverse = [lift, deriv](int k, double y) {
    const double target = y + k;
    double lo = 0.5 * k;
    double hi = 0.5 * (k + 1);
    double x = lo + 0.5 * (target - k) * 0.5;
    for (int it = 0; it < 100; ++it) {
      const double fx = lift(x) - target;
      if (fx > 0) hi = x; else lo = x;
      double next = x - fx / deriv(x);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) < 1e-16) {
        x = next;
        break;
      }
      x = next;
    }
    return x;
  };

  CatalogEntry e;
  auto& s = e.system;
  s.name = "perturbed_doubling";
  s.ambient_dim = 1;
  s.kind = MapKind::expanding_endomorphism;
  s.domain.kind = DomainKind::circle;
  s.domain.dim = 1;
  const Domain dom = s.domain;
  s.forward = [lift, dom](const Point& x) { return dom.wrap(pt(lift(x(0)))); };
  s.forward_lift = [lift](const Point& x) { return pt(lift(x(0))); };
  s.backward = [inverse](const Point& y) {
    return std::vector<Point>{pt(inverse(0, y(0))), pt(inverse(1, y(0)))};
  };
  s.jacobian = [deriv](const Point& x) { return Matrix::Constant(1, 1, deriv(x(0))); };
  s.in_invariant_set = [](const Point& x) { return x(0) >= -kMembershipTol && x(0) <= 1.0 + kMembershipTol; };
  s.constant_jacobian = false;

  e.frame = BundleFrame::constant(Matrix(1, 0), Matrix::Identity(1, 1));

  MarkovCoding c;
  c.rectangles = {Region::interval(0.0, 0.5), Region::interval(0.5, 1.0)};
  c.transition = TransitionMatrix::Ones(2, 2);
  c.symbol_of = [](const Point& x) { return x(0) < 0.5 ? 0 : 1; };
  c.forward = s.forward;
  auto interval = [inverse](std::span<const int> w) {
    double lo = 0.0;
    double hi = 1.0;
    for (std::size_t j = w.size(); j-- > 0;) {
      lo = inverse(w[j], lo);
      hi = inverse(w[j], hi);
    }
    return std::pair{lo, hi};
  };
  c.cylinder_map = [interval](std::span<const int> w, Bundle bundle, const Point&) {
    if (bundle == Bundle::stable) throw InvalidArgument("repeller codings have no stable cylinders");
    const auto [lo, hi] = interval(w);
    return Region::interval(lo, hi);
  };
  c.anchor = [interval](std::span<const int> w) { return pt(interval(w).first); };
  c.reference_point = pt(0.0);
  e.coding = std::move(c);

  auto& info = e.info;
  info.family = s.name;
  info.params = params;
  info.analytic_dimension = 1.0;
  info.analytic_unstable_dimension = 1.0;
  info.witness = {1.0, 1.0 / (2.0 - two_pi * std::abs(eps))};
  info.max_expansion = 2.0 + two_pi * std::abs(eps);
  info.box_ratio = 0.5;
  info.average_conformal = true;
  info.linear = false;
  info.sample = uniform_sampler(1);
  info.seed_grid = [](double su, double) {
    const int n = std::max(1, static_cast<int>(std::ceil(1.0 / su)));
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(pt(static_cast<double>(i) / n));
    return out;
  };
  return e;
}

struct Family {
  const char* name;
  ParameterRecord defaults;
  const char* description;
};

const std::vector<Family>& families() {
  static const std::vector<Family> list = {
      {"cantor_repeller", {{"slope", 3.0}}, "two affine branches of equal slope; middle-third Cantor set at slope 3"},
      {"cat_map", {}, "hyperbolic toral automorphism [[2,1],[1,1]]"},
      {"cookie_cutter", {{"slope_left", 3.0}, {"slope_right", 4.0}}, "two affine branches with distinct slopes"},
      {"diag_endomorphism", {{"a", 2.0}, {"b", 3.0}}, "diagonal expanding torus map diag(a,b); not average conformal"},
      {"jordan_endomorphism",
       {{"scale", 3.0}},
       "expanding torus map [[p,p],[0,p]]; average conformal but not conformal"},
      {"linear_horseshoe",
       {{"contraction", 1.0 / 3.0}, {"expansion", 3.0}, {"branches", 2.0}},
       "affine Smale horseshoe on the unit square"},
      {"perturbed_doubling", {{"amplitude", 0.1}}, "circle map 2x + a sin(2 pi x) mod 1"},
  };
  return list;
}

const Family& find_family(std::string_view name) {
  for (const auto& f : families())
    if (name == f.name) return f;
  std::string known;
  for (const auto& f : families()) known += std::string(known.empty() ? "" : ", ") + f.name;
  throw InvalidArgument("unknown system '" + std::string(name) + "' (known: " + known + ")");
}

}  // namespace

double moran_root(const std::vector<double>& ratios, double tol) {
  if (ratios.empty()) throw InvalidArgument("moran_root: no ratios");
  auto g = [&](double s) {
    double sum = 0.0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum - 1.0;
  };
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) > 0.0) hi *= 2.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CatalogEntry catalog_system(std::string_view name, const ParameterRecord& params) {
  const Family& fam = find_family(name);
  const ParameterRecord p = resolve(fam.name, fam.defaults, params);
  if (name == "cantor_repeller") {
    const double slope = p.at("slope");
    if (!(slope > 1.0)) throw InvalidArgument("cantor_repeller: slope must be > 1 for an expanding repeller");
    if (slope < 2.0) throw InvalidArgument("cantor_repeller: slope < 2 makes the two branch intervals overlap");
    return build_interval_repeller("cantor_repeller", make_affine_cantor(name, {slope, slope}), p);
  }
  if (name == "cookie_cutter")
    return build_interval_repeller("cookie_cutter",
                                   make_affine_cantor(name, {p.at("slope_left"), p.at("slope_right")}), p);
  if (name == "linear_horseshoe") return build_horseshoe(p);
  if (name == "cat_map") return build_cat(p);
  if (name == "diag_endomorphism") return build_diag(p);
  if (name == "jordan_endomorphism") return build_jordan(p);
  return build_perturbed_doubling(p);
}

std::vector<CatalogDescriptor> list_catalog() {
  std::vector<CatalogDescriptor> out;
  for (const auto& f : families()) {
    CatalogDescriptor d;
    d.name = f.name;
    d.defaults = f.defaults;
    d.description = f.description;
    d.analytic_dimension = catalog_system(f.name).info.analytic_dimension;
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return out;
}

}  // namespace hypdim
