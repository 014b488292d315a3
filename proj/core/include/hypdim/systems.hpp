#pragma once

#include "hypdim/region.hpp"
#include "hypdim/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hypdim {

enum class MapKind { diffeomorphism, expanding_endomorphism };

enum class DomainKind {
  interval,     // [0,1] with branch domains, Euclidean metric
  unit_square,  // [0,1]^2, Euclidean metric
  circle,       // R/Z, flat quotient metric
  torus,        // R^2/Z^2, flat quotient metric
};

struct Domain {
  DomainKind kind = DomainKind::interval;
  int dim = 1;
  std::vector<Region> branches;  // branch domains; empty when the map is globally defined

  bool periodic() const { return kind == DomainKind::circle || kind == DomainKind::torus; }

  /// Shortest representative of a - b (minimal image on periodic domains).
  Point displacement(const Point& a, const Point& b) const;
  double distance(const Point& a, const Point& b) const { return displacement(a, b).norm(); }
  Point wrap(const Point& p) const;
};

/// A C^1 map on a compact domain together with the analytic data every
/// analysis needs: derivative, preimages, and invariant-set membership.
///
/// All members are pure callables, so a SmoothSystem can be copied freely and
/// evaluated concurrently.
struct SmoothSystem {
  std::string name;
  int ambient_dim = 1;
  MapKind kind = MapKind::expanding_endomorphism;
  Domain domain;

  std::function<Point(const Point&)> forward;
  /// The map without reduction modulo the period lattice; equal to `forward`
  /// on non-periodic domains. Used for differences along cylinders.
  std::function<Point(const Point&)> forward_lift;
  /// Branch-indexed preimages. Diffeomorphisms return exactly one point.
  std::function<std::vector<Point>(const Point&)> backward;
  std::function<Matrix(const Point&)> jacobian;
  std::function<bool(const Point&)> in_invariant_set;

  bool constant_jacobian = false;
  int iterate = 1;  // n when this system is the n-fold power of a catalog map

  Point step(const Point& x) const { return forward(x); }
  Point orbit_point(Point x, int n) const;
  Point preimage(const Point& x) const;  // diffeomorphisms only
};

/// Orthonormal frames for the stable and unstable subbundles.
struct BundleFrame {
  int d_s = 0;
  int d_u = 1;
  std::function<Matrix(const Point&)> stable_frame;
  std::function<Matrix(const Point&)> unstable_frame;

  int dim(Bundle b) const { return b == Bundle::stable ? d_s : d_u; }
  Matrix frame(Bundle b, const Point& x) const;
  static BundleFrame constant(const Matrix& stable, const Matrix& unstable);
};

/// n-fold composition with chain-rule Jacobian. Rejects n < 1 and n > 2^20.
SmoothSystem power_system(const SmoothSystem& sys, int n);

/// Unstable (or stable) frame at x obtained by pushing a generic subspace
/// along the orbit segment ending (or starting) at x, re-orthonormalizing
/// at every step. Requires a diffeomorphism for the stable bundle.
Matrix power_iteration_frame(const SmoothSystem& sys, const Point& x, Bundle bundle, int bundle_dim,
                             int iterations = 30);

/// Largest principal angle (radians) between the column spans of a and b.
double principal_angle(const Matrix& a, const Matrix& b);

/// Orthonormal basis for the column span via Householder QR.
Matrix orthonormalize(const Matrix& m);

}  // namespace hypdim
