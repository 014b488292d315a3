#pragma once

#include "hypdim/catalog.hpp"
#include "hypdim/coding.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace hypdim {

struct BoxCountTable {
  std::vector<double> scales;          // descending
  std::vector<std::uint64_t> counts;   // non-decreasing as scales shrink
  double fit_dim = 0.0;
  double fit_residual = 0.0;           // max |log N - fit|
};

/// One point per admissible depth-`depth` word on the leaf through the
/// coding's reference point. Repellers use cylinder anchors.
std::vector<Point> sample_leaf_set(const MarkovCoding& coding, Bundle bundle, int depth,
                                   std::uint64_t max_count = 10'000'000);

/// Median distance to the nearest other point, estimated on at most 2000 queries.
double median_nn_spacing(const std::vector<Point>& points);

/// Grid counts anchored at the origin (points within 1e-6 cells below a grid
/// line count in the upper cell) and a least-squares fit of log N
/// against log(1/epsilon). Rejects ladders finer than 10x the sampling
/// spacing and ladders whose counts are all equal.
BoxCountTable box_dimension(const std::vector<Point>& points, std::vector<double> scales);

/// {ratio^k : k = k_lo..k_hi}.
std::vector<double> geometric_ladder(double ratio, int k_lo = 2, int k_hi = 6);

struct OracleOptions {
  int depth = 10;
  std::uint64_t max_points = 1u << 20;
};

/// Box dimension of the whole invariant set. Two-sided codings use one point
/// per two-sided cylinder of depth d on each side, d = depth or less so the
/// cloud stays under max_points.
BoxCountTable boxdim_oracle(const CatalogEntry& entry, const OracleOptions& options = {});

/// Box dimension of one leaf section.
BoxCountTable boxdim_leaf(const CatalogEntry& entry, Bundle bundle, const OracleOptions& options = {});

/// CSV with header scale,count.
void write_boxdim_csv(std::ostream& os, const BoxCountTable& table);

}  // namespace hypdim
