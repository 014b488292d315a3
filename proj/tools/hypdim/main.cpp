// hypdim: dimension estimates for catalog hyperbolic sets and repellers.
//
//   hypdim run --config run.json [overrides]
//   hypdim list-systems [filter] [--json]

#include "hypdim/config.hpp"
#include "hypdim/run.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

using namespace hypdim;

namespace {

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("config file " + path + " is not valid JSON: " + e.what());
  }
}

struct Overrides {
  std::optional<std::string> system;
  std::vector<std::string> params;
  std::vector<std::string> analyses;
  std::optional<int> depth, k_max, n_check, defect_depth, defect_cap, lyapunov_steps, boxdim_depth;
  std::optional<double> theta;
  std::optional<std::string> sandwich_method;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> output_dir;
  std::vector<std::string> formats;
};

// Overrides are applied to the document, so they pass through the same
// key and type checks as the file itself.
void apply_overrides(const Overrides& o, Json& doc) {
  if (o.system) doc["system"]["name"] = *o.system;
  for (const auto& kv : o.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--param expects key=value, got " + kv);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(kv.substr(eq + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != kv.size() - eq - 1) throw InvalidArgument("--param value is not a number: " + kv);
    doc["system"]["params"][kv.substr(0, eq)] = v;
  }
  if (!o.analyses.empty()) doc["analyses"] = o.analyses;
  if (o.depth) doc["depth"] = *o.depth;
  if (o.k_max) doc["k_max"] = *o.k_max;
  if (o.n_check) doc["n_check"] = *o.n_check;
  if (o.defect_depth) doc["defect_depth"] = *o.defect_depth;
  if (o.defect_cap) doc["defect_cap"] = *o.defect_cap;
  if (o.lyapunov_steps) doc["lyapunov_steps"] = *o.lyapunov_steps;
  if (o.boxdim_depth) doc["boxdim_depth"] = *o.boxdim_depth;
  if (o.theta) doc["theta"] = *o.theta;
  if (o.sandwich_method) doc["sandwich_method"] = *o.sandwich_method;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.jobs) doc["jobs"] = *o.jobs;
  if (o.output_dir) doc["output"]["dir"] = *o.output_dir;
  if (!o.formats.empty()) doc["output"]["formats"] = o.formats;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dimension estimates for hyperbolic sets and repellers"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run analyses described by a config file");
  std::string config_path;
  Overrides o;
  run_cmd->add_option("-c,--config", config_path, "JSON config file")->required();
  run_cmd->add_option("--system", o.system, "catalog system name");
  run_cmd->add_option("--param", o.params, "system parameter key=value (repeatable)");
  run_cmd->add_option("--analyses", o.analyses, "analyses to run")->delimiter(',');
  run_cmd->add_option("--depth", o.depth);
  run_cmd->add_option("--k-max", o.k_max);
  run_cmd->add_option("--n-check", o.n_check);
  run_cmd->add_option("--theta", o.theta);
  run_cmd->add_option("--defect-depth", o.defect_depth);
  run_cmd->add_option("--defect-cap", o.defect_cap);
  run_cmd->add_option("--lyapunov-steps", o.lyapunov_steps);
  run_cmd->add_option("--boxdim-depth", o.boxdim_depth);
  run_cmd->add_option("--sandwich-method", o.sandwich_method);
  run_cmd->add_option("--seed", o.seed);
  run_cmd->add_option("-j,--jobs", o.jobs, "worker threads");
  run_cmd->add_option("-o,--output-dir", o.output_dir, "output directory (overrides HYPDIM_OUTPUT_DIR)");
  run_cmd->add_option("--formats", o.formats, "json and/or csv")->delimiter(',');

  auto* list_cmd = app.add_subcommand("list-systems", "List catalog systems");
  std::string filter;
  bool as_json = false;
  list_cmd->add_option("filter", filter, "substring of the system name");
  list_cmd->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kValidation;
  }

  try {
    if (*list_cmd) {
      if (as_json) std::cout << cli::list_systems_json(filter).dump(2) << '\n';
      else std::cout << cli::list_systems_text(filter);
      return cli::kOk;
    }
    Json doc = read_config_file(config_path);
    if (!doc.is_object()) throw InvalidArgument("config file must hold a JSON object");
    if (const char* env = std::getenv("HYPDIM_OUTPUT_DIR"); env && *env) doc["output"]["dir"] = env;
    apply_overrides(o, doc);
    cli::run(cli::parse_config(doc));
    return cli::kOk;
  } catch (const InvalidArgument& e) {
    std::cerr << "hypdim: invalid input: " << e.what() << '\n';
    return cli::kValidation;
  } catch (const NumericalError& e) {
    std::cerr << "hypdim: numerical failure in " << e.operation() << ": " << e.what() << '\n';
    return cli::kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "hypdim: " << e.what() << '\n';
    return 1;
  }
}
