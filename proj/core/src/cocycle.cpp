#include "hypdim/cocycle.hpp"

#include "hypdim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace hypdim {

double CocycleValue::op_norm() const { return std::exp(log_op_norm); }
double CocycleValue::conorm() const { return std::exp(log_conorm); }

Point bundle_step(const SmoothSystem& sys, Bundle bundle, const Point& x) {
  return bundle == Bundle::unstable ? sys.forward(x) : sys.preimage(x);
}

Point bundle_orbit_point(const SmoothSystem& sys, Bundle bundle, Point x, int n) {
  for (int i = 0; i < n; ++i) x = bundle_step(sys, bundle, x);
  return x;
}

namespace {

/// Stepwise QR transport. Calls sink(n, state) after every step.
class Transport {
 public:
  Transport(const SmoothSystem& sys, const BundleFrame& frame, const Point& x, Bundle bundle)
      : sys_(sys), bundle_(bundle), point_(x) {
    q_ = frame.frame(bundle, x);
    const auto k = q_.cols();
    acc_ = Matrix::Identity(k, k);
  }

  void advance(int index) {
    Matrix jac;
    Point next;
    if (bundle_ == Bundle::unstable) {
      jac = sys_.jacobian(point_);
      next = sys_.forward(point_);
    } else {
      next = sys_.preimage(point_);
      jac = sys_.jacobian(next).inverse();
    }
    const Matrix m = jac * q_;
    Eigen::HouseholderQR<Matrix> qr(m);
    const auto k = m.cols();
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), k);
    Matrix r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    const double scale = m.norm();
    for (Eigen::Index j = 0; j < k; ++j) {
      if (r(j, j) < 0) {
        r.row(j) *= -1.0;
        q.col(j) *= -1.0;
      }
      if (!std::isfinite(r(j, j)) || !(r(j, j) > 1e-14 * scale))
        throw NumericalError("cocycle_value", "frame degenerate at orbit index " + std::to_string(index));
      log_diag_sum_(j) += std::log(r(j, j));
    }
    q_ = std::move(q);
    acc_ = r * acc_;
    const double mx = acc_.cwiseAbs().maxCoeff();
    acc_ /= mx;
    log_scale_ += std::log(mx);
    point_ = std::move(next);
  }

  CocycleValue value(const Point& base, int n) const {
    CocycleValue v;
    v.base_point = base;
    v.steps = n;
    v.bundle = bundle_;
    v.restricted = acc_;
    v.log_scale = log_scale_;
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Matrix>(acc_).singularValues();
    v.log_op_norm = log_scale_ + std::log(sv(0));
    v.log_conorm = log_scale_ + std::log(sv(sv.size() - 1));
    v.log_abs_det = log_diag_sum_.sum();
    return v;
  }

  const Eigen::VectorXd& log_diag_sum() const { return log_diag_sum_; }

  void init_sums() { log_diag_sum_ = Eigen::VectorXd::Zero(q_.cols()); }

 private:
  const SmoothSystem& sys_;
  Bundle bundle_;
  Point point_;
  Matrix q_;
  Matrix acc_;
  double log_scale_ = 0.0;
  Eigen::VectorXd log_diag_sum_;
};

Transport make_transport(const SmoothSystem& sys, const BundleFrame& frame, const Point& x, Bundle bundle) {
  Transport t(sys, frame, x, bundle);
  t.init_sums();
  return t;
}

}  // namespace

CocycleValue cocycle_value(const SmoothSystem& sys, const BundleFrame& frame, const Point& x, int n, Bundle bundle) {
  if (n < 1) throw InvalidArgument("cocycle_value: n must be >= 1");
  Transport t = make_transport(sys, frame, x, bundle);
  for (int i = 0; i < n; ++i) t.advance(i);
  return t.value(x, n);
}

std::vector<CocycleValue> cocycle_prefix(const SmoothSystem& sys, const BundleFrame& frame, const Point& x,
                                         int n_max, Bundle bundle) {
  if (n_max < 1) throw InvalidArgument("cocycle_prefix: n_max must be >= 1");
  Transport t = make_transport(sys, frame, x, bundle);
  std::vector<CocycleValue> out;
  out.reserve(static_cast<std::size_t>(n_max));
  for (int i = 0; i < n_max; ++i) {
    t.advance(i);
    out.push_back(t.value(x, i + 1));
  }
  return out;
}

std::string_view to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::super_norm: return "super_norm";
    case PotentialKind::sub_conorm: return "sub_conorm";
    case PotentialKind::additive_det: return "additive_det";
  }
  return "unknown";
}

double potential_of(PotentialKind kind, const CocycleValue& v) {
  switch (kind) {
    case PotentialKind::super_norm: return -v.log_op_norm;
    case PotentialKind::sub_conorm: return -v.log_conorm;
    case PotentialKind::additive_det: return -v.log_abs_det / v.dim();
  }
  return 0.0;
}

PotentialSequence make_potential(const SmoothSystem& sys, const BundleFrame& frame, PotentialKind kind,
                                 Bundle bundle) {
  if (frame.dim(bundle) == 0)
    throw InvalidArgument("make_potential: the " + std::string(to_string(bundle)) + " bundle is empty");
  PotentialSequence p;
  p.kind = kind;
  p.bundle = bundle;
  p.evaluator = [sys, frame, kind, bundle](const Point& x, int n) {
    return potential_of(kind, cocycle_value(sys, frame, x, n, bundle));
  };
  p.prefix = [sys, frame, kind, bundle](const Point& x, int n_max) {
    std::vector<double> out;
    for (const auto& v : cocycle_prefix(sys, frame, x, n_max, bundle)) out.push_back(potential_of(kind, v));
    return out;
  };
  p.step = [sys, bundle](const Point& x) { return bundle_step(sys, bundle, x); };
  return p;
}

LyapunovResult lyapunov_exponents(const SmoothSystem& sys, const BundleFrame& frame, const Point& x, int N,
                                  Bundle bundle) {
  if (N < 50) throw InvalidArgument("lyapunov_exponents: N must be >= 50");
  std::vector<int> checkpoints;
  for (int c = N; c >= 1 && checkpoints.size() < 6; c /= 2) checkpoints.push_back(c);
  std::reverse(checkpoints.begin(), checkpoints.end());

  Transport t = make_transport(sys, frame, x, bundle);
  LyapunovResult res;
  std::size_t next = 0;
  for (int i = 1; i <= N; ++i) {
    t.advance(i - 1);
    if (next < checkpoints.size() && i == checkpoints[next]) {
      std::vector<double> est(static_cast<std::size_t>(t.log_diag_sum().size()));
      for (std::size_t j = 0; j < est.size(); ++j) est[j] = t.log_diag_sum()(static_cast<Eigen::Index>(j)) / i;
      std::sort(est.begin(), est.end());
      res.checkpoints.push_back(i);
      res.partials.push_back(std::move(est));
      ++next;
    }
  }
  res.exponents = res.partials.back();
  if (res.partials.size() >= 2) {
    const auto& a = res.partials[res.partials.size() - 2];
    const auto& b = res.partials.back();
    for (std::size_t j = 0; j < a.size(); ++j)
      if (std::abs(a[j] - b[j]) > 1e-2) res.converged = false;
  }
  return res;
}

double conformality_defect(const SmoothSystem& sys, const BundleFrame& frame, Bundle bundle, int n,
                           const std::vector<Point>& sample, unsigned jobs) {
  if (sample.empty()) throw InvalidArgument("conformality_defect: empty sample");
  if (n < 1) throw InvalidArgument("conformality_defect: n must be >= 1");
  if (frame.dim(bundle) == 1) return 0.0;
  std::vector<double> vals(sample.size());
  parallel_for(sample.size(), jobs, [&](std::size_t i) {
    const auto v = cocycle_value(sys, frame, sample[i], n, bundle);
    vals[i] = (v.log_op_norm - v.log_conorm) / n;
  });
  return *std::max_element(vals.begin(), vals.end());
}

KingmanEstimate kingman_check(const PotentialSequence& pot, const Point& x, int N) {
  if (N < 16) throw InvalidArgument("kingman_check: N must be >= 16");
  const auto values = pot.prefix(x, N);
  KingmanEstimate k;
  k.limit_estimate = values.back() / N;
  k.inf_estimate = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < values.size(); ++i)
    k.inf_estimate = std::min(k.inf_estimate, values[i] / static_cast<double>(i + 1));
  return k;
}

FourCConstants four_c_constants(const PotentialSequence& pot, const std::vector<Point>& sample, int m) {
  if (m < 1) throw InvalidArgument("four_c_constants: m must be >= 1");
  if (sample.empty()) throw InvalidArgument("four_c_constants: empty sample");
  double c = 0.0;
  for (const auto& x : sample)
    for (double v : pot.prefix(x, 2 * m - 1)) c = std::max(c, std::abs(v));
  return {m, c, -c};
}

bool four_c_inequality_check(const PotentialSequence& pot, const Point& x, int n, const FourCConstants& c,
                             double slack) {
  if (c.m < 1 || n <= c.m) throw InvalidArgument("four_c_inequality_check: need 1 <= m < n");
  const double lhs = pot(x, n);
  double birkhoff = 0.0;
  Point y = x;
  for (int j = 0; j < n; ++j) {
    birkhoff += pot(y, c.m) / c.m;
    y = pot.step(y);
  }
  if (pot.kind == PotentialKind::super_norm) return lhs >= birkhoff + 4.0 * c.c2 - slack;
  return lhs <= birkhoff + 4.0 * c.c1 + slack;
}

}  // namespace hypdim
