#pragma once

#include "hypdim/region.hpp"
#include "hypdim/systems.hpp"
#include "hypdim/types.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace hypdim {

using Word = std::vector<int>;
using TransitionMatrix = Eigen::MatrixXi;

/// Symbolic model of a coded invariant set.
///
/// Words index cylinders. For the unstable bundle (and for repellers) a word
/// is the forward itinerary w_0 .. w_{n-1}; for the stable bundle of an
/// invertible system it is the backward itinerary w_{-1} .. w_{-n}.
struct MarkovCoding {
  std::vector<Region> rectangles;
  TransitionMatrix transition;  // 0/1, A(i,j) = 1 iff i -> j is allowed
  bool two_sided = false;
  int resolution_limit = 30;

  std::function<int(const Point&)> symbol_of;
  std::function<Point(const Point&)> forward;
  std::function<Point(const Point&)> backward;  // set only when two_sided

  /// Leaf piece of the cylinder through `base` for the given word.
  std::function<Region(std::span<const int> word, Bundle bundle, const Point& base)> cylinder_map;
  /// Whether a word starting with `symbol` has a leaf piece through `base`.
  /// Defaults to true when unset.
  std::function<bool(int symbol, Bundle bundle, const Point& base)> on_leaf;
  /// Canonical point of the invariant set inside the forward cylinder of `word`.
  std::function<Point(std::span<const int> word)> anchor;
  /// Base point whose leaves carry `sample_leaf_set`.
  Point reference_point;

  int alphabet_size() const { return static_cast<int>(transition.rows()); }
  bool admissible(std::span<const int> word) const;
  bool admissible_backward(std::span<const int> word) const;
};

/// inf / sup of |f^n x - f^n y| / |x - y| over a cylinder of depth n + k.
struct CylinderRatio {
  Point z;
  int n = 1;
  int k = 0;
  Bundle bundle = Bundle::unstable;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;

  double ratio() const { return lambda_upper / lambda_lower; }
};

/// Forward (j >= 0) or backward (j < 0) symbols of z for j in [from, to).
Word itinerary(const MarkovCoding& coding, const Point& z, int from, int to);

/// Leaf cylinder of the given depth through z.
Region cylinder(const MarkovCoding& coding, const Point& z, int depth, Bundle bundle);

/// Mesh-based estimate of the expansion ratios over the depth-(n+k) cylinder.
CylinderRatio quasi_conformal_ratio(const SmoothSystem& sys, const MarkovCoding& coding, const Point& z, int n,
                                    int k, Bundle bundle, int mesh_points = 1024);

/// Number of admissible words of length n: sum of the entries of A^{n-1}.
/// Computed in double precision so large counts do not overflow.
double count_words(const TransitionMatrix& a, int n);

/// All admissible words of length n in lexicographic order.
std::vector<Word> enumerate_words(const MarkovCoding& coding, int n, std::uint64_t max_count = 10'000'000);
std::vector<Word> enumerate_words(const TransitionMatrix& a, int n, std::uint64_t max_count = 10'000'000);

/// True when the directed graph of A is strongly connected.
bool is_irreducible(const TransitionMatrix& a);

/// Coding of the golden-mean beta map x -> phi x mod 1, A = [[1,1],[1,0]].
MarkovCoding golden_mean_coding();

}  // namespace hypdim
