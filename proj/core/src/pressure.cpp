#include "hypdim/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <unordered_map>

namespace hypdim {

double birkhoff_sum(const SmoothSystem& sys, const ScalarField& phi, const Point& x, int n) {
  if (n < 0) throw InvalidArgument("birkhoff_sum: n must be >= 0");
  double sum = 0.0;
  Point y = x;
  for (int j = 0; j < n; ++j) {
    sum += phi(y);
    if (j + 1 < n) y = sys.forward(y);
  }
  return sum;
}

double bowen_distance(const SmoothSystem& sys, const Point& x, const Point& y, int n) {
  double d = 0.0;
  Point a = x;
  Point b = y;
  for (int i = 0; i < n; ++i) {
    d = std::max(d, sys.domain.distance(a, b));
    if (i + 1 < n) {
      a = sys.forward(a);
      b = sys.forward(b);
    }
  }
  return d;
}

std::string_view to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::separated: return "separated";
    case PressureMethod::cylinder: return "cylinder";
    case PressureMethod::transfer_operator: return "transfer_operator";
  }
  return "unknown";
}

namespace {

double log_sum_exp(const std::vector<double>& v) {
  if (v.empty()) return -std::numeric_limits<double>::infinity();
  const double mx = *std::max_element(v.begin(), v.end());
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

/// Grid cells of side >= epsilon; a point within epsilon of another lies in
/// a neighbouring cell on every axis.
struct CellGrid {
  bool periodic = false;
  double epsilon = 1.0;
  std::int64_t cells = 1;  // per axis on periodic domains

  std::int64_t index(double x) const {
    if (periodic) {
      auto i = static_cast<std::int64_t>(std::floor(x * static_cast<double>(cells)));
      return ((i % cells) + cells) % cells;
    }
    return static_cast<std::int64_t>(std::floor(x / epsilon)) + 1;
  }

  std::int64_t neighbour(std::int64_t i, int offset) const {
    if (periodic) return ((i + offset) % cells + cells) % cells;
    return i + offset;
  }
};

std::uint64_t pack(const std::vector<std::int64_t>& idx) {
  std::uint64_t key = 1469598103934665603ull;
  for (auto i : idx) {
    key ^= static_cast<std::uint64_t>(i) + 0x9e3779b97f4a7c15ull + (key << 6) + (key >> 2);
    key *= 1099511628211ull;
  }
  return key;
}

}  // namespace

SeparatedSet max_separated_set(const SmoothSystem& sys, int n, double epsilon, const std::vector<Point>& seeds,
                               double seed_spacing) {
  if (n < 1) throw InvalidArgument("max_separated_set: n must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("max_separated_set: epsilon must be > 0");
  if (seeds.empty()) throw InvalidArgument("max_separated_set: empty seed sample");

  const int d = sys.ambient_dim;
  CellGrid grid;
  grid.periodic = sys.domain.periodic();
  grid.epsilon = epsilon;
  grid.cells = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / epsilon)));

  SeparatedSet out;
  out.n = n;
  out.epsilon = epsilon;
  if (seed_spacing > 0.5 * epsilon)
    out.warnings.push_back("seed spacing " + std::to_string(seed_spacing) + " is coarse relative to epsilon " +
                           std::to_string(epsilon));

  std::vector<double> orbits;  // accepted orbits, n * d values each
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> buckets;
  std::vector<double> orbit(static_cast<std::size_t>(n * d));
  std::vector<std::int64_t> key_idx(static_cast<std::size_t>(2 * d));

  // Offsets over 2d axes, each in {-1, 0, 1}.
  const int axes = 2 * d;
  int combos = 1;
  for (int i = 0; i < axes; ++i) combos *= 3;

  auto cell_key = [&](const double* first, const double* last, const std::vector<int>* offsets) {
    for (int i = 0; i < d; ++i) {
      const int o0 = offsets ? (*offsets)[static_cast<std::size_t>(i)] : 0;
      const int o1 = offsets ? (*offsets)[static_cast<std::size_t>(d + i)] : 0;
      key_idx[static_cast<std::size_t>(i)] = grid.neighbour(grid.index(first[i]), o0);
      key_idx[static_cast<std::size_t>(d + i)] = grid.neighbour(grid.index(last[i]), o1);
    }
    return pack(key_idx);
  };

  std::vector<int> offsets(static_cast<std::size_t>(axes));
  std::vector<std::uint64_t> neighbour_keys;
  for (const auto& seed : seeds) {
    Point y = seed;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) orbit[static_cast<std::size_t>(i * d + j)] = y(j);
      if (i + 1 < n) y = sys.forward(y);
    }
    const double* first = orbit.data();
    const double* last = orbit.data() + static_cast<std::ptrdiff_t>((n - 1) * d);

    neighbour_keys.clear();
    for (int c = 0; c < combos; ++c) {
      int r = c;
      for (int i = 0; i < axes; ++i) {
        offsets[static_cast<std::size_t>(i)] = r % 3 - 1;
        r /= 3;
      }
      neighbour_keys.push_back(cell_key(first, last, &offsets));
    }
    std::sort(neighbour_keys.begin(), neighbour_keys.end());
    neighbour_keys.erase(std::unique(neighbour_keys.begin(), neighbour_keys.end()), neighbour_keys.end());

    bool separated = true;
    for (auto key : neighbour_keys) {
      auto it = buckets.find(key);
      if (it == buckets.end()) continue;
      for (auto idx : it->second) {
        const double* other = orbits.data() + static_cast<std::ptrdiff_t>(idx) * n * d;
        double dist = 0.0;
        for (int i = 0; i < n && dist <= epsilon; ++i) {
          double sq = 0.0;
          for (int j = 0; j < d; ++j) {
            double diff = orbit[static_cast<std::size_t>(i * d + j)] - other[i * d + j];
            if (grid.periodic) diff -= std::round(diff);
            sq += diff * diff;
          }
          dist = std::max(dist, std::sqrt(sq));
        }
        if (dist <= epsilon) {
          separated = false;
          break;
        }
      }
      if (!separated) break;
    }
    if (!separated) continue;
    const auto idx = static_cast<std::uint32_t>(out.points.size());
    out.points.push_back(seed);
    orbits.insert(orbits.end(), orbit.begin(), orbit.end());
    buckets[cell_key(first, last, nullptr)].push_back(idx);
  }
  return out;
}

bool is_separated(const SmoothSystem& sys, const SeparatedSet& set) {
  for (std::size_t i = 0; i < set.points.size(); ++i)
    for (std::size_t j = i + 1; j < set.points.size(); ++j)
      if (!(bowen_distance(sys, set.points[i], set.points[j], set.n) > set.epsilon)) return false;
  return true;
}

std::vector<Point> separated_seeds(const CatalogEntry& entry, int n, double epsilon, double* spacing) {
  if (!entry.info.seed_grid) throw InvalidArgument(entry.system.name + ": no seed cover available");
  const double rho = std::max(1.0, entry.info.max_expansion);
  const double su = 0.5 * epsilon * std::pow(rho, -(n - 1));
  const double ss = 0.5 * epsilon;
  const int du = entry.frame.d_u;
  const int ds = entry.frame.d_s;
  const double estimate = std::pow(1.0 / su, du) * std::pow(1.0 / ss, ds);
  if (estimate > 8e6)
  {
    char buf[160];
    std::snprintf(buf, sizeof buf, "separated-set seed cover needs about %.3g points at n=%d; use smaller n or larger epsilon",
                  estimate, n);
    throw InvalidArgument(buf);
  }
  if (spacing) *spacing = su;
  return entry.info.seed_grid(su, ss);
}

namespace {

std::vector<int> n_ladder(int n) {
  std::vector<int> out;
  for (int m = n; m >= 1 && out.size() < 4; m /= 2) {
    out.push_back(m);
    if (m % 2 != 0) break;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

void finish(PressureEstimate& est, const std::vector<double>& raw, const std::vector<int>& ladder) {
  const std::size_t L = raw.size();
  est.n_used = ladder.back();
  if (L == 1) {
    est.value = raw[0];
    est.residual = 0.0;
    return;
  }
  auto rich = [&](std::size_t i) {
    // Extrapolates V(n) = P + c/n using n_i and n_{i-1} = n_i / 2.
    return 2.0 * raw[i] - raw[i - 1];
  };
  est.value = rich(L - 1);
  est.residual = L >= 3 ? std::abs(est.value - rich(L - 2)) : std::abs(est.value - raw[L - 1]);
}

double log_count_words(const TransitionMatrix& a, int n) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(a.rows());
  const Matrix ad = a.cast<double>();
  double log_scale = 0.0;
  for (int i = 1; i < n; ++i) {
    v = ad * v;
    const double s = v.maxCoeff();
    v /= s;
    log_scale += std::log(s);
  }
  return log_scale + std::log(v.sum());
}

}  // namespace

PressureEstimate pressure_separated(const CatalogEntry& entry, const ScalarField& phi, int n, double epsilon) {
  if (n < 1) throw InvalidArgument("pressure_separated: n must be >= 1");
  double spacing = 0.0;
  PressureEstimate est;
  est.method = PressureMethod::separated;
  est.epsilon_used = epsilon;
  const auto ladder = n_ladder(n);
  std::vector<double> raw;
  for (int m : ladder) {
    // Seeds at the same fraction of the Bowen scale on every level, so the
    // grid's packing loss is common to all levels and cancels in the extrapolation.
    const auto seeds = separated_seeds(entry, m, epsilon, &spacing);
    const auto set = max_separated_set(entry.system, m, epsilon, seeds, spacing);
    std::vector<double> terms;
    terms.reserve(set.points.size());
    for (const auto& x : set.points) terms.push_back(birkhoff_sum(entry.system, phi, x, m));
    const double v = log_sum_exp(terms) / m;
    raw.push_back(v);
    est.diagnostics.push_back({0, m, epsilon, v, PressureMethod::separated});
    est.warnings.insert(est.warnings.end(), set.warnings.begin(), set.warnings.end());
  }
  finish(est, raw, ladder);
  return est;
}

PressureEstimate pressure_sequence(const CatalogEntry& entry, const PotentialSequence& pot, double t, int n,
                                   double epsilon, const SequenceOptions& options) {
  if (n < 1) throw InvalidArgument("pressure_sequence: n must be >= 1");
  if (!(epsilon > 0.0)) throw InvalidArgument("pressure_sequence: epsilon must be > 0");
  using M = SequenceOptions::Method;
  const bool coded = entry.coding.has_value();
  M method = options.method;
  bool counting = false;
  std::string reduced;
  if (method == M::automatic) {
    if (coded && entry.system.constant_jacobian) {
      method = M::cylinder;
      counting = true;
    } else if (coded) {
      method = M::cylinder;
      const int requested = n;
      while (n > 1 && count_words(entry.coding->transition, n) > static_cast<double>(options.max_words)) n /= 2;
      if (n != requested)
        reduced = "n reduced from " + std::to_string(requested) + " to " + std::to_string(n) +
                  " to keep the cylinder count under " + std::to_string(options.max_words);
    } else {
      method = M::separated;
    }
  }
  if (method == M::cylinder && !coded) throw InvalidArgument("pressure_sequence: cylinder sums need a coding");

  PressureEstimate est;
  est.epsilon_used = epsilon;
  est.method = method == M::separated ? PressureMethod::separated : PressureMethod::cylinder;
  const auto ladder = n_ladder(n);
  std::vector<double> raw;

  if (method == M::separated) {
    double spacing = 0.0;
    for (int m : ladder) {
      const auto seeds = separated_seeds(entry, m, epsilon, &spacing);
      const auto set = max_separated_set(entry.system, m, epsilon, seeds, spacing);
      std::vector<double> terms;
      terms.reserve(set.points.size());
      for (const auto& x : set.points) terms.push_back(t * pot(x, m));
      raw.push_back(log_sum_exp(terms) / m);
      est.warnings.insert(est.warnings.end(), set.warnings.begin(), set.warnings.end());
    }
  } else if (counting) {
    // Every n-cylinder carries the same weight; the sum is count * weight.
    const auto& c = *entry.coding;
    const auto values = pot.prefix(c.reference_point, n);
    for (int m : ladder)
      raw.push_back((log_count_words(c.transition, m) + t * values[static_cast<std::size_t>(m - 1)]) / m);
  } else {
    const auto& c = *entry.coding;
    for (int m : ladder) {
      const auto words = enumerate_words(c, m, options.max_words);
      std::vector<double> terms;
      terms.reserve(words.size());
      for (const auto& w : words) terms.push_back(t * pot(c.anchor(w), m));
      raw.push_back(log_sum_exp(terms) / m);
    }
  }
  for (std::size_t i = 0; i < ladder.size(); ++i)
    est.diagnostics.push_back({0, ladder[i], epsilon, raw[i], est.method});
  if (!reduced.empty()) est.warnings.push_back(reduced);
  finish(est, raw, ladder);
  return est;
}

CrossCheck variational_crosscheck(const CatalogEntry& entry, Bundle bundle, double t, int n, double epsilon,
                                  const SequenceOptions& options) {
  const auto plus = make_potential(entry.system, entry.frame, PotentialKind::super_norm, bundle);
  const auto minus = make_potential(entry.system, entry.frame, PotentialKind::sub_conorm, bundle);
  CrossCheck c;
  c.p_plus = pressure_sequence(entry, plus, t, n, epsilon, options).value;
  c.p_minus = pressure_sequence(entry, minus, t, n, epsilon, options).value;
  c.gap = std::abs(c.p_plus - c.p_minus);
  c.average_conformal = entry.info.average_conformal;
  return c;
}

void write_pressure_csv(std::ostream& os, const std::vector<PressureRow>& rows) {
  os << "k,n,epsilon,value,method\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,", r.k, r.n, r.epsilon, r.value);
    os << buf << to_string(r.method) << '\n';
  }
}

}  // namespace hypdim
