#pragma once

#include "hypdim/systems.hpp"
#include "hypdim/types.hpp"

#include <functional>
#include <vector>

namespace hypdim {

/// Derivative cocycle d_x g^n restricted to a bundle, in moving orthonormal
/// frames. For the unstable bundle g = f; for the stable bundle g = f^{-1},
/// so both bundles are expanded and every log-quantity below is positive on
/// a hyperbolic set.
///
/// Magnitudes are kept in log form: the true restricted array is
/// exp(log_scale) * restricted.
struct CocycleValue {
  Point base_point;
  int steps = 1;
  Bundle bundle = Bundle::unstable;
  Matrix restricted;
  double log_scale = 0.0;
  double log_op_norm = 0.0;
  double log_conorm = 0.0;
  double log_abs_det = 0.0;

  int dim() const { return static_cast<int>(restricted.rows()); }
  double op_norm() const;
  double conorm() const;
};

/// One step of the bundle dynamics: f for unstable, f^{-1} for stable.
Point bundle_step(const SmoothSystem& sys, Bundle bundle, const Point& x);
Point bundle_orbit_point(const SmoothSystem& sys, Bundle bundle, Point x, int n);

/// Throws NumericalError naming the orbit index if the transported frame collapses.
CocycleValue cocycle_value(const SmoothSystem& sys, const BundleFrame& frame, const Point& x, int n, Bundle bundle);

/// Cocycle values for every n = 1..n_max along one orbit, in a single pass.
std::vector<CocycleValue> cocycle_prefix(const SmoothSystem& sys, const BundleFrame& frame, const Point& x,
                                         int n_max, Bundle bundle);

enum class PotentialKind {
  super_norm,    // Phi_n = -log ||d g^n|_E||
  sub_conorm,    // phi_n = -log m(d g^n|_E)
  additive_det,  // -(1/d_E) log |det d g^n|_E|
};

std::string_view to_string(PotentialKind k);

struct PotentialSequence {
  PotentialKind kind = PotentialKind::sub_conorm;
  Bundle bundle = Bundle::unstable;
  std::function<double(const Point&, int)> evaluator;
  /// All values n = 1..n_max at one point; element i holds the value at n = i + 1.
  std::function<std::vector<double>(const Point&, int)> prefix;
  /// One step of the dynamics the sequence is additive along.
  std::function<Point(const Point&)> step;

  double operator()(const Point& x, int n) const { return evaluator(x, n); }
};

PotentialSequence make_potential(const SmoothSystem& sys, const BundleFrame& frame, PotentialKind kind,
                                 Bundle bundle);

double potential_of(PotentialKind kind, const CocycleValue& v);

struct LyapunovResult {
  std::vector<double> exponents;  // ascending
  std::vector<int> checkpoints;
  std::vector<std::vector<double>> partials;  // exponents estimated at each checkpoint
  bool converged = true;
};

/// QR-orthogonalized cocycle iteration over N >= 50 steps. Checkpoints are
/// N / 2^j; the estimate is flagged non-converged when the last two differ
/// by more than 1e-2.
LyapunovResult lyapunov_exponents(const SmoothSystem& sys, const BundleFrame& frame, const Point& x, int N,
                                  Bundle bundle);

/// max over the sample of (log ||d g^n|_E|| - log m(d g^n|_E)) / n.
double conformality_defect(const SmoothSystem& sys, const BundleFrame& frame, Bundle bundle, int n,
                           const std::vector<Point>& sample, unsigned jobs = 1);

struct KingmanEstimate {
  double limit_estimate = 0.0;  // phi_N(x) / N
  double inf_estimate = 0.0;    // min_{n <= N} phi_n(x) / n
};

KingmanEstimate kingman_check(const PotentialSequence& pot, const Point& x, int N);

/// Constants of the 4C inequality at block length m:
/// c1 = max |phi_i| and c2 = -max |phi_i| over i in 1..2m-1 and the sample.
struct FourCConstants {
  int m = 1;
  double c1 = 0.0;
  double c2 = 0.0;
};

FourCConstants four_c_constants(const PotentialSequence& pot, const std::vector<Point>& sample, int m);

/// Sub-additive kinds: phi_n(x) <= S_n(phi_m / m)(x) + 4 c1.
/// super_norm: Phi_n(x) >= S_n(Phi_m / m)(x) + 4 c2. Both with `slack`.
bool four_c_inequality_check(const PotentialSequence& pot, const Point& x, int n, const FourCConstants& c,
                             double slack = 1e-6);

}  // namespace hypdim
