#include "hypdim/systems.hpp"

#include <algorithm>
#include <cmath>

namespace hypdim {

Point Domain::displacement(const Point& a, const Point& b) const {
  Point d = a - b;
  if (periodic()) {
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) -= std::round(d(i));
  }
  return d;
}

Point Domain::wrap(const Point& p) const {
  if (!periodic()) return p;
  Point q = p;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    q(i) -= std::floor(q(i));
    if (q(i) >= 1.0) q(i) = 0.0;
  }
  return q;
}

Point SmoothSystem::orbit_point(Point x, int n) const {
  for (int i = 0; i < n; ++i) x = forward(x);
  return x;
}

Point SmoothSystem::preimage(const Point& x) const {
  if (kind != MapKind::diffeomorphism)
    throw InvalidArgument(name + ": unique preimage requested from a non-invertible map");
  auto pre = backward(x);
  if (pre.size() != 1) throw NumericalError("preimage", name + ": expected exactly one preimage");
  return pre.front();
}

Matrix BundleFrame::frame(Bundle b, const Point& x) const {
  if (dim(b) == 0) throw InvalidArgument(std::string("empty ") + std::string(to_string(b)) + " bundle");
  return b == Bundle::stable ? stable_frame(x) : unstable_frame(x);
}

BundleFrame BundleFrame::constant(const Matrix& stable, const Matrix& unstable) {
  BundleFrame f;
  f.d_s = static_cast<int>(stable.cols());
  f.d_u = static_cast<int>(unstable.cols());
  f.stable_frame = [stable](const Point&) { return stable; };
  f.unstable_frame = [unstable](const Point&) { return unstable; };
  return f;
}

SmoothSystem power_system(const SmoothSystem& sys, int n) {
  if (n < 1) throw InvalidArgument("power_system: n must be >= 1");
  if (n > (1 << 20)) throw InvalidArgument("power_system: n exceeds 2^20");
  if (n == 1) return sys;

  SmoothSystem p = sys;
  p.name = sys.name + "^" + std::to_string(n);
  p.iterate = sys.iterate * n;
  auto fwd = sys.forward;
  auto lift = sys.forward_lift;
  auto jac = sys.jacobian;
  auto bwd = sys.backward;
  p.forward = [fwd, n](const Point& x) {
    Point y = x;
    for (int i = 0; i < n; ++i) y = fwd(y);
    return y;
  };
  // Lifts are equivariant under the period lattice, so composing them on the
  // universal cover gives the lift of the iterate.
  p.forward_lift = [lift, n](const Point& x) {
    Point y = x;
    for (int i = 0; i < n; ++i) y = lift(y);
    return y;
  };
  p.jacobian = [fwd, jac, n](const Point& x) {
    Point y = x;
    Matrix acc = jac(y);
    for (int i = 1; i < n; ++i) {
      y = fwd(y);
      acc = jac(y) * acc;
    }
    return acc;
  };
  p.backward = [bwd, n](const Point& x) {
    std::vector<Point> layer{x};
    for (int i = 0; i < n; ++i) {
      std::vector<Point> next;
      for (const auto& q : layer) {
        auto pre = bwd(q);
        next.insert(next.end(), pre.begin(), pre.end());
      }
      layer = std::move(next);
    }
    return layer;
  };
  return p;
}

Matrix orthonormalize(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
  // Fix signs so that R has a positive diagonal; keeps frames continuous.
  const Matrix r = qr.matrixQR().topRows(m.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (r(j, j) < 0) q.col(j) *= -1.0;
  return q;
}

double principal_angle(const Matrix& a, const Matrix& b) {
  const Matrix qa = orthonormalize(a);
  const Matrix qb = orthonormalize(b);
  // acos alone loses half the digits near zero; pair the cosine with the sine
  // from the component of b outside span(a).
  Eigen::JacobiSVD<Matrix> cos_svd(qa.transpose() * qb);
  Eigen::JacobiSVD<Matrix> sin_svd(qb - qa * (qa.transpose() * qb));
  const double c = std::clamp(cos_svd.singularValues().minCoeff(), 0.0, 1.0);
  const double s = std::clamp(sin_svd.singularValues().maxCoeff(), 0.0, 1.0);
  return std::atan2(s, c);
}

Matrix power_iteration_frame(const SmoothSystem& sys, const Point& x, Bundle bundle, int bundle_dim,
                             int iterations) {
  if (bundle_dim < 1 || bundle_dim > sys.ambient_dim)
    throw InvalidArgument("power_iteration_frame: bundle dimension out of range");
  Matrix q = Matrix::Identity(sys.ambient_dim, bundle_dim);
  // A fixed generic start avoids accidental alignment with the complementary bundle.
  for (int j = 0; j < bundle_dim; ++j)
    for (int i = 0; i < sys.ambient_dim; ++i) q(i, j) += 0.3141592653589793 * (i + 1) / (j + 2);
  q = orthonormalize(q);

  if (bundle == Bundle::unstable) {
    if (sys.kind == MapKind::diffeomorphism) {
      std::vector<Point> orbit{x};
      for (int i = 0; i < iterations; ++i) orbit.push_back(sys.preimage(orbit.back()));
      for (int i = iterations; i >= 1; --i) q = orthonormalize(sys.jacobian(orbit[i]) * q);
    } else {
      // Expanding maps: push along the branch-0 backward orbit.
      std::vector<Point> orbit{x};
      for (int i = 0; i < iterations; ++i) orbit.push_back(sys.backward(orbit.back()).front());
      for (int i = iterations; i >= 1; --i) q = orthonormalize(sys.jacobian(orbit[i]) * q);
    }
    return q;
  }
  if (sys.kind != MapKind::diffeomorphism)
    throw InvalidArgument("power_iteration_frame: stable frames need an invertible map");
  std::vector<Point> orbit{x};
  for (int i = 0; i < iterations; ++i) orbit.push_back(sys.forward(orbit.back()));
  for (int i = iterations - 1; i >= 0; --i) q = orthonormalize(sys.jacobian(orbit[i]).inverse() * q);
  return q;
}

}  // namespace hypdim
