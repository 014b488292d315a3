#pragma once

#include "hypdim/boxdim.hpp"
#include "hypdim/catalog.hpp"
#include "hypdim/pressure.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hypdim {

struct RootResult {
  double root = 0.0;
  double pressure = 0.0;  // pressure at the returned root
  int iterations = 0;
};

/// Bisection for P(s) = 0 with P(s_lo) > 0 > P(s_hi), at most 64 steps.
/// Throws NumericalError for an invalid bracket or non-monotone samples.
RootResult bowen_root_detailed(const std::function<double(double)>& pressure_fn, double s_lo, double s_hi,
                               double tol);
double bowen_root(const std::function<double(double)>& pressure_fn, double s_lo, double s_hi, double tol);

/// Root on [0, d + 1], widening the upper end x2 up to four times.
RootResult bowen_root_auto(const std::function<double(double)>& pressure_fn, int bundle_dim, double tol);

struct BowenBracket {
  int k = 0;
  double s_val = 0.0;
  double t_val = 0.0;
  double tolerance = 0.0;
};

enum class SandwichMethod { separated, transfer_operator };

std::string_view to_string(SandwichMethod m);

/// Roots s_{2^k} of P(f^{2^k}, s Phi_{2^k}) = 0 and t_{2^k} of
/// P(f^{2^k}, t phi_{2^k}) = 0 for k = 0..k_max.
std::vector<BowenBracket> sandwich_sequence(const CatalogEntry& entry, Bundle bundle, int k_max,
                                            SandwichMethod method, unsigned jobs = 1);

struct FormulaResult {
  double r = 0.0;
  double entropy = 0.0;
  double det_integral = 0.0;  // integral of log |det d g|_E| under the equilibrium measure
  int depth = 0;
  double pressure_at_root = 0.0;
};

/// Root of P(-r (1/d_E) log |det d g|_E|) = 0 on depth-`depth` cylinders,
/// with the equilibrium entropy and determinant integral at the root.
FormulaResult dimension_via_formula(const CatalogEntry& entry, Bundle bundle, int depth);

/// Largest depth <= requested whose admissible word count is <= max_words.
int affordable_depth(const MarkovCoding& coding, int requested, double max_words);

/// Points for the conformality defect: anchors of depth-`depth` cylinders
/// (depth reduced to stay under `cap`), or seeded samples without a coding.
std::vector<Point> defect_sample(const CatalogEntry& entry, int depth = 8, std::size_t cap = 4096,
                                 std::uint64_t seed = 42);

struct DefectPoint {
  int n = 0;
  double defect = 0.0;
};

struct BundleReport {
  Bundle bundle = Bundle::unstable;
  int dim = 1;
  bool applicable = true;
  std::optional<FormulaResult> formula;
  std::vector<BowenBracket> brackets;
  std::vector<DefectPoint> defect_curve;
};

struct ReportOptions {
  int depth = 10;
  int k_max = 3;
  int n_check = 64;
  double theta = 0.1;
  int defect_depth = 8;
  std::size_t defect_cap = 4096;
  bool formula = true;
  bool sandwich = true;
  bool boxdim = false;
  SandwichMethod method = SandwichMethod::transfer_operator;
  unsigned jobs = 1;
  std::uint64_t seed = 42;
};

inline constexpr const char* kNonConformalFlag = "NON_CONFORMAL";

struct DimensionReport {
  std::string system;
  ParameterRecord params;
  std::vector<BundleReport> bundles;
  std::optional<double> total_dim;
  std::optional<BoxCountTable> box_oracle;
  std::vector<std::string> flags;

  const BundleReport* find(Bundle b) const;
  bool has_flag(const std::string& f) const;
};

/// Assembles both bundles' formula dimensions, sandwich histories and defect
/// curves. A defect at n_check above theta raises NON_CONFORMAL and marks the
/// affected formula values inapplicable; it is not an error.
DimensionReport full_report(const CatalogEntry& entry, const ReportOptions& options = {});

}  // namespace hypdim
