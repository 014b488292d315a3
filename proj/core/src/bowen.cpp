#include "hypdim/bowen.hpp"

#include "hypdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hypdim {

RootResult bowen_root_detailed(const std::function<double(double)>& pressure_fn, double s_lo, double s_hi,
                               double tol) {
  if (!(s_lo < s_hi)) throw InvalidArgument("bowen_root: need s_lo < s_hi");
  double p_lo = pressure_fn(s_lo);
  double p_hi = pressure_fn(s_hi);
  if (std::abs(p_lo) <= tol) return {s_lo, p_lo, 0};
  if (std::abs(p_hi) <= tol) return {s_hi, p_hi, 0};
  if (!(p_lo > 0.0 && p_hi < 0.0)) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "root not bracketed: P(" << s_lo << ") = " << p_lo << ", P(" << s_hi << ") = " << p_hi;
    throw NumericalError("bowen_root", msg.str());
  }
  RootResult r;
  double lo = s_lo;
  double hi = s_hi;
  for (int it = 1; it <= 64; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double p = pressure_fn(mid);
    if (!(p <= p_lo && p >= p_hi)) {
      std::ostringstream msg;
      msg.precision(10);
      msg << "pressure is not monotone: P(" << mid << ") = " << p << " outside [" << p_hi << ", " << p_lo << "]";
      throw NumericalError("bowen_root", msg.str());
    }
    r = {mid, p, it};
    if (std::abs(p) <= tol || mid == lo || mid == hi) break;
    if (p > 0.0) {
      lo = mid;
      p_lo = p;
    } else {
      hi = mid;
      p_hi = p;
    }
  }
  return r;
}

double bowen_root(const std::function<double(double)>& pressure_fn, double s_lo, double s_hi, double tol) {
  return bowen_root_detailed(pressure_fn, s_lo, s_hi, tol).root;
}

RootResult bowen_root_auto(const std::function<double(double)>& pressure_fn, int bundle_dim, double tol) {
  double hi = bundle_dim + 1.0;
  for (int widen = 0; widen < 4 && pressure_fn(hi) >= 0.0; ++widen) hi *= 2.0;
  return bowen_root_detailed(pressure_fn, 0.0, hi, tol);
}

std::string_view to_string(SandwichMethod m) {
  return m == SandwichMethod::separated ? "separated" : "transfer_operator";
}

namespace {

constexpr double kRootTol = 1e-13;

/// Root plus a tolerance that converts the pressure error into a root error.
std::pair<double, double> root_with_tolerance(const std::function<double(double)>& p, int dim, double residual) {
  const auto r = bowen_root_auto(p, dim, kRootTol);
  const double h = 1e-4;
  const double slope = (p(r.root + h) - p(std::max(0.0, r.root - h))) / (r.root + h - std::max(0.0, r.root - h));
  const double err = (residual + std::abs(r.pressure)) / std::max(std::abs(slope), 1e-12);
  return {r.root, err + 1e-12};
}

/// P(f^m, s Phi) from a separated set of f^m; the set does not depend on s.
class SeparatedLevelPressure {
 public:
  SeparatedLevelPressure(const CatalogEntry& entry, Bundle bundle, PotentialKind kind, int m) {
    const double eps = 0.05;
    const auto sys_m = power_system(entry.system, m);
    const auto pot = make_potential(entry.system, entry.frame, kind, bundle);
    // Seeds resolve Bowen balls of f^m over two iterates.
    double spacing = 0.0;
    const auto seeds = separated_seeds(entry, m + 1, eps, &spacing);
    for (int n_iter : {1, 2}) {
      const auto set = max_separated_set(sys_m, n_iter, eps, seeds, spacing);
      std::vector<double> sums;
      for (const auto& x : set.points) {
        double s = 0.0;
        Point y = x;
        for (int j = 0; j < n_iter; ++j) {
          s += pot(y, m);
          y = sys_m.forward(y);
        }
        sums.push_back(s);
      }
      sums_.push_back(std::move(sums));
    }
  }

  double operator()(double s) const { return 2.0 * raw(1, s) - raw(0, s); }

  /// Distance between the extrapolated and the raw two-iterate value.
  double residual(double s) const { return std::abs(raw(1, s) - raw(0, s)); }

 private:
  double raw(std::size_t i, double s) const {
    double mx = -1e300;
    for (double b : sums_[i]) mx = std::max(mx, s * b);
    double acc = 0.0;
    for (double b : sums_[i]) acc += std::exp(s * b - mx);
    return (mx + std::log(acc)) / static_cast<double>(i + 1);
  }

  std::vector<std::vector<double>> sums_;
};

}  // namespace

std::vector<BowenBracket> sandwich_sequence(const CatalogEntry& entry, Bundle bundle, int k_max,
                                            SandwichMethod method, unsigned jobs) {
  if (k_max < 0) throw InvalidArgument("sandwich_sequence: k_max must be >= 0");
  if (method == SandwichMethod::separated && k_max > 5)
    throw InvalidArgument("sandwich_sequence: k_max must be <= 5 for the separated method");
  if (method == SandwichMethod::transfer_operator && k_max > 8)
    throw InvalidArgument("sandwich_sequence: k_max must be <= 8 for the transfer method");
  const int dim = entry.frame.dim(bundle);
  if (dim == 0) throw InvalidArgument("sandwich_sequence: the " + std::string(to_string(bundle)) + " bundle is empty");

  std::vector<BowenBracket> out(static_cast<std::size_t>(k_max + 1));
  std::vector<std::exception_ptr> errors(out.size());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    try {
      const int m = 1 << i;
      BowenBracket b;
      b.k = static_cast<int>(i);
      if (method == SandwichMethod::transfer_operator) {
        const PowerPressure ps(entry, bundle, PotentialKind::super_norm, m);
        const PowerPressure pt(entry, bundle, PotentialKind::sub_conorm, m);
        // Roots of P(f^m, .) = 0 and of P(f^m, .) / m = 0 coincide; scaling keeps tolerances comparable.
        const auto [s, ts] = root_with_tolerance([&](double x) { return ps(x) / m; }, dim, ps.residual() / m);
        const auto [t, tt] = root_with_tolerance([&](double x) { return pt(x) / m; }, dim, pt.residual() / m);
        b.s_val = s;
        b.t_val = t;
        b.tolerance = std::max(ts, tt);
      } else {
        const SeparatedLevelPressure ps(entry, bundle, PotentialKind::super_norm, m);
        const SeparatedLevelPressure pt(entry, bundle, PotentialKind::sub_conorm, m);
        const auto s0 = bowen_root_auto([&](double x) { return ps(x) / m; }, dim, kRootTol).root;
        const auto t0 = bowen_root_auto([&](double x) { return pt(x) / m; }, dim, kRootTol).root;
        const auto [s, ts] = root_with_tolerance([&](double x) { return ps(x) / m; }, dim, ps.residual(s0) / m);
        const auto [t, tt] = root_with_tolerance([&](double x) { return pt(x) / m; }, dim, pt.residual(t0) / m);
        b.s_val = s;
        b.t_val = t;
        b.tolerance = std::max(ts, tt);
      }
      out[i] = b;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

int affordable_depth(const MarkovCoding& coding, int requested, double max_words) {
  int d = std::max(1, requested);
  while (d > 1 && count_words(coding.transition, d) > max_words) --d;
  return d;
}

FormulaResult dimension_via_formula(const CatalogEntry& entry, Bundle bundle, int depth) {
  if (!entry.coding) throw InvalidArgument("dimension_via_formula: " + entry.system.name + " has no coding");
  const int dim = entry.frame.dim(bundle);
  if (dim == 0)
    throw InvalidArgument("dimension_via_formula: the " + std::string(to_string(bundle)) + " bundle is empty");
  const auto& c = *entry.coding;
  const auto words = enumerate_words(c, depth);
  const auto pot = make_potential(entry.system, entry.frame, PotentialKind::additive_det, bundle);
  std::vector<double> phi;
  phi.reserve(words.size());
  for (const auto& w : words) phi.push_back(pot(c.anchor(w), 1));

  auto scaled = [&](double r) {
    std::vector<double> v(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) v[i] = r * phi[i];
    return v;
  };
  auto pressure = [&](double r) { return pressure_transfer(c.transition, words, scaled(r), depth, false).estimate.value; };
  const auto root = bowen_root_auto(pressure, dim, kRootTol);
  const auto at_root = pressure_transfer(c.transition, words, scaled(root.root), depth, true);

  FormulaResult f;
  f.depth = depth;
  f.r = root.root;
  f.pressure_at_root = at_root.estimate.value;
  f.entropy = at_root.equilibrium.entropy;
  // Potential at the root is r * phi, so its integral is r * int phi.
  const double int_phi = root.root > 0.0 ? at_root.equilibrium.potential_integral / root.root : 0.0;
  f.det_integral = -dim * int_phi;
  if (!(f.det_integral > 0.0))
    throw NumericalError("dimension_via_formula", "determinant integral is not positive; the bundle is not expanded");
  return f;
}

std::vector<Point> defect_sample(const CatalogEntry& entry, int depth, std::size_t cap, std::uint64_t seed) {
  if (!entry.coding) return entry.info.sample(10000, seed);
  const auto& c = *entry.coding;
  const int d = affordable_depth(c, depth, static_cast<double>(cap));
  std::vector<Point> out;
  for (const auto& w : enumerate_words(c, d)) out.push_back(c.anchor(w));
  return out;
}

const BundleReport* DimensionReport::find(Bundle b) const {
  for (const auto& r : bundles)
    if (r.bundle == b) return &r;
  return nullptr;
}

bool DimensionReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

DimensionReport full_report(const CatalogEntry& entry, const ReportOptions& options) {
  if (options.n_check < 1) throw InvalidArgument("full_report: n_check must be >= 1");
  DimensionReport rep;
  rep.system = entry.system.name;
  rep.params = entry.info.params;
  const auto sample = defect_sample(entry, options.defect_depth, options.defect_cap, options.seed);
  bool non_conformal = false;

  for (Bundle b : {Bundle::unstable, Bundle::stable}) {
    const int dim = entry.frame.dim(b);
    if (dim == 0) continue;
    BundleReport br;
    br.bundle = b;
    br.dim = dim;
    for (int n = 1; n <= options.n_check; n *= 2)
      br.defect_curve.push_back({n, conformality_defect(entry.system, entry.frame, b, n, sample, options.jobs)});
    if (br.defect_curve.back().n != options.n_check)
      br.defect_curve.push_back(
          {options.n_check, conformality_defect(entry.system, entry.frame, b, options.n_check, sample, options.jobs)});
    br.applicable = br.defect_curve.back().defect < options.theta;
    non_conformal = non_conformal || !br.applicable;
    if (options.formula && entry.coding) {
      const int depth = entry.system.constant_jacobian ? std::min(options.depth, affordable_depth(*entry.coding, options.depth, 4096))
                                                       : affordable_depth(*entry.coding, options.depth, 1 << 20);
      br.formula = dimension_via_formula(entry, b, depth);
    }
    if (options.sandwich && entry.coding)
      br.brackets = sandwich_sequence(entry, b, options.k_max, options.method, options.jobs);
    rep.bundles.push_back(std::move(br));
  }
  if (non_conformal) rep.flags.push_back(kNonConformalFlag);
  if (options.formula && entry.coding) {
    double total = 0.0;
    for (const auto& br : rep.bundles) total += br.formula->r;
    rep.total_dim = total;
  }
  if (options.boxdim) rep.box_oracle = boxdim_oracle(entry);
  return rep;
}

}  // namespace hypdim
