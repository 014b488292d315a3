#pragma once

#include "hypdim/coding.hpp"
#include "hypdim/systems.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hypdim {

using ParameterRecord = std::map<std::string, double>;

/// ||df^n v|| <= C lambda^n ||v|| on E^s and ||df^{-n} v|| <= C lambda^n ||v|| on E^u.
struct HyperbolicityWitness {
  double constant = 1.0;
  double rate = 0.5;
};

/// Catalog metadata. Analytic values exist for the test harness and for
/// oracle comparisons in reports; no analysis reads them.
struct SystemInfo {
  std::string family;
  ParameterRecord params;
  std::optional<double> analytic_dimension;
  std::optional<double> analytic_unstable_dimension;
  std::optional<double> analytic_stable_dimension;
  HyperbolicityWitness witness;
  double max_expansion = 2.0;    // sup ||df|_{E^u}||
  double max_contraction = 0.0;  // sup ||df|_{E^s}||; zero for repellers
  double box_ratio = 0.5;        // natural scale ratio for box-count ladders
  bool average_conformal = true;
  bool linear = false;
  /// Random points of the invariant set.
  std::function<std::vector<Point>(std::size_t count, std::uint64_t seed)> sample;
  /// Deterministic cover of the invariant set with the given spacing along
  /// unstable and stable directions.
  std::function<std::vector<Point>(double unstable_spacing, double stable_spacing)> seed_grid;
};

struct CatalogEntry {
  SmoothSystem system;
  BundleFrame frame;
  std::optional<MarkovCoding> coding;
  SystemInfo info;
};

struct CatalogDescriptor {
  std::string name;
  ParameterRecord defaults;
  std::string description;
  std::optional<double> analytic_dimension;
};

/// Builds a catalog family. Unknown names, unknown parameter keys and
/// parameters that break hyperbolicity raise InvalidArgument.
CatalogEntry catalog_system(std::string_view name, const ParameterRecord& params = {});

/// Sorted by name.
std::vector<CatalogDescriptor> list_catalog();

/// Root of sum_i r_i^s = 1 by bisection (Moran equation for affine IFS).
double moran_root(const std::vector<double>& ratios, double tol = 1e-14);

}  // namespace hypdim
