#pragma once

#include <hypdim/bowen.hpp>
#include <hypdim/report.hpp>

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hypdim::cli {

inline const std::vector<std::string> kAnalyses = {"boxdim", "defect", "dimension", "lyapunov",
                                                   "pressure_curve", "quasiconf", "sandwich"};

struct PressureKnobs {
  std::vector<double> t = {0.0, 0.5, 1.0};
  int n = 8;
  double epsilon = 0.05;
  Bundle bundle = Bundle::unstable;
  PotentialKind kind = PotentialKind::sub_conorm;
};

struct QuasiconfKnobs {
  int n = 4;
  int k = 2;
  int samples = 16;
  int mesh_points = 1024;
};

struct RunConfig {
  std::string system;
  ParameterRecord params;
  std::set<std::string> analyses;

  int depth = 10;
  int k_max = 3;
  SandwichMethod sandwich_method = SandwichMethod::transfer_operator;
  int n_check = 64;
  double theta = 0.1;
  int defect_depth = 8;
  int defect_cap = 4096;
  int lyapunov_steps = 2000;
  int boxdim_depth = 10;
  PressureKnobs pressure;
  QuasiconfKnobs quasiconf;

  std::uint64_t seed = 42;
  unsigned jobs = 1;
  std::string output_dir = "hypdim-out";
  std::set<std::string> formats = {"csv", "json"};

  bool wants(const std::string& analysis) const { return analyses.count(analysis) > 0; }
};

/// Parses and range-checks a config document. Unknown keys, wrong types and
/// out-of-range knobs raise InvalidArgument naming the offending key.
RunConfig parse_config(const Json& doc);

/// Every knob with defaults applied; parse_config(resolved(c)) reproduces c.
Json resolved(const RunConfig& config);

/// Re-runs the range checks after command-line overrides.
void validate(const RunConfig& config);

}  // namespace hypdim::cli
