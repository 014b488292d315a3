#include "hypdim/config.hpp"

#include <algorithm>
#include <cmath>

namespace hypdim::cli {
namespace {

void reject_unknown(const Json& obj, const std::vector<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument("config: " + where + " must be an object");
  for (const auto& item : obj.items())
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      throw InvalidArgument("config: unknown key \"" + where + item.key() + "\"");
}

template <class T>
void read(const Json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  const auto& v = obj[key];
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw InvalidArgument("config: " + where + key + " must be a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw InvalidArgument("config: " + where + key + " must be an integer");
    if constexpr (std::is_unsigned_v<T>)
      if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        throw InvalidArgument("config: " + where + key + " must be non-negative");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw InvalidArgument("config: " + where + key + " must be a number");
  } else {
    if (!v.is_string()) throw InvalidArgument("config: " + where + key + " must be a string");
  }
  out = v.get<T>();
}

std::vector<std::string> string_list(const Json& v, const std::string& key) {
  if (!v.is_array()) throw InvalidArgument("config: " + key + " must be a list of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw InvalidArgument("config: " + key + " must be a list of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

void check_range(bool ok, const std::string& key, const std::string& range) {
  if (!ok) throw InvalidArgument("config: " + key + " must be " + range);
}

Bundle parse_bundle(const std::string& s) {
  if (s == "unstable") return Bundle::unstable;
  if (s == "stable") return Bundle::stable;
  throw InvalidArgument("config: pressure.bundle must be \"unstable\" or \"stable\"");
}

PotentialKind parse_kind(const std::string& s) {
  for (auto k : {PotentialKind::super_norm, PotentialKind::sub_conorm, PotentialKind::additive_det})
    if (to_string(k) == s) return k;
  throw InvalidArgument("config: pressure.kind must be one of super_norm, sub_conorm, additive_det");
}

SandwichMethod parse_method(const std::string& s) {
  if (s == "transfer_operator") return SandwichMethod::transfer_operator;
  if (s == "separated") return SandwichMethod::separated;
  throw InvalidArgument("config: sandwich_method must be \"transfer_operator\" or \"separated\"");
}

}  // namespace

void validate(const RunConfig& c) {
  if (c.system.empty()) throw InvalidArgument("config: system.name is required");
  for (const auto& a : c.analyses)
    check_range(std::find(kAnalyses.begin(), kAnalyses.end(), a) != kAnalyses.end(), "analyses entry \"" + a + "\"",
                "one of boxdim, defect, dimension, lyapunov, pressure_curve, quasiconf, sandwich");
  check_range(!c.analyses.empty(), "analyses", "a non-empty list");
  for (const auto& [k, v] : c.params) check_range(std::isfinite(v), "system.params." + k, "finite");
  check_range(c.depth >= 1 && c.depth <= 30, "depth", "in [1, 30]");
  check_range(c.k_max >= 0 && c.k_max <= 8, "k_max", "in [0, 8]");
  if (c.sandwich_method == SandwichMethod::separated)
    check_range(c.k_max <= 5, "k_max", "at most 5 with the separated sandwich method");
  check_range(c.n_check >= 1 && c.n_check <= 1024, "n_check", "in [1, 1024]");
  check_range(c.theta > 0.0 && std::isfinite(c.theta), "theta", "positive");
  check_range(c.defect_depth >= 1 && c.defect_depth <= 30, "defect_depth", "in [1, 30]");
  check_range(c.defect_cap >= 1 && c.defect_cap <= 1'000'000, "defect_cap", "in [1, 1000000]");
  check_range(c.lyapunov_steps >= 50 && c.lyapunov_steps <= 10'000'000, "lyapunov_steps", "in [50, 10000000]");
  check_range(c.boxdim_depth >= 1 && c.boxdim_depth <= 30, "boxdim_depth", "in [1, 30]");
  check_range(!c.pressure.t.empty(), "pressure.t", "a non-empty list");
  for (double t : c.pressure.t) check_range(std::isfinite(t), "pressure.t", "a list of finite numbers");
  check_range(c.pressure.n >= 1 && c.pressure.n <= 4096, "pressure.n", "in [1, 4096]");
  check_range(c.pressure.epsilon > 0.0 && c.pressure.epsilon <= 0.5, "pressure.epsilon", "in (0, 0.5]");
  check_range(c.quasiconf.n >= 1 && c.quasiconf.n <= 24, "quasiconf.n", "in [1, 24]");
  check_range(c.quasiconf.k >= 0 && c.quasiconf.k <= 6, "quasiconf.k", "in [0, 6]");
  check_range(c.quasiconf.samples >= 1 && c.quasiconf.samples <= 10000, "quasiconf.samples", "in [1, 10000]");
  check_range(c.quasiconf.mesh_points >= 2 && c.quasiconf.mesh_points <= 1 << 16, "quasiconf.mesh_points",
              "in [2, 65536]");
  check_range(c.jobs >= 1 && c.jobs <= 256, "jobs", "in [1, 256]");
  check_range(!c.output_dir.empty(), "output.dir", "non-empty");
  check_range(!c.formats.empty(), "output.formats", "a non-empty subset of {json, csv}");
  for (const auto& f : c.formats) check_range(f == "json" || f == "csv", "output.formats", "a subset of {json, csv}");
}

RunConfig parse_config(const Json& doc) {
  reject_unknown(doc,
                 {"system", "analyses", "depth", "k_max", "sandwich_method", "n_check", "theta", "defect_depth",
                  "defect_cap", "lyapunov_steps", "boxdim_depth", "pressure", "quasiconf", "seed", "jobs", "output"},
                 "");
  RunConfig c;
  if (!doc.contains("system")) throw InvalidArgument("config: system is required");
  const auto& sys = doc["system"];
  reject_unknown(sys, {"name", "params"}, "system.");
  read(sys, "name", c.system, "system.");
  if (sys.contains("params")) {
    if (!sys["params"].is_object()) throw InvalidArgument("config: system.params must be an object");
    for (const auto& item : sys["params"].items()) {
      if (!item.value().is_number()) throw InvalidArgument("config: system.params." + item.key() + " must be a number");
      c.params[item.key()] = item.value().get<double>();
    }
  }
  if (!doc.contains("analyses")) throw InvalidArgument("config: analyses is required");
  for (const auto& a : string_list(doc["analyses"], "analyses")) c.analyses.insert(a);

  read(doc, "depth", c.depth, "");
  read(doc, "k_max", c.k_max, "");
  if (doc.contains("sandwich_method")) {
    std::string m;
    read(doc, "sandwich_method", m, "");
    c.sandwich_method = parse_method(m);
  }
  read(doc, "n_check", c.n_check, "");
  read(doc, "theta", c.theta, "");
  read(doc, "defect_depth", c.defect_depth, "");
  read(doc, "defect_cap", c.defect_cap, "");
  read(doc, "lyapunov_steps", c.lyapunov_steps, "");
  read(doc, "boxdim_depth", c.boxdim_depth, "");
  if (doc.contains("pressure")) {
    const auto& p = doc["pressure"];
    reject_unknown(p, {"t", "n", "epsilon", "bundle", "kind"}, "pressure.");
    if (p.contains("t")) {
      if (!p["t"].is_array()) throw InvalidArgument("config: pressure.t must be a list of numbers");
      c.pressure.t.clear();
      for (const auto& t : p["t"]) {
        if (!t.is_number()) throw InvalidArgument("config: pressure.t must be a list of numbers");
        c.pressure.t.push_back(t.get<double>());
      }
    }
    read(p, "n", c.pressure.n, "pressure.");
    read(p, "epsilon", c.pressure.epsilon, "pressure.");
    std::string s;
    if (p.contains("bundle")) {
      read(p, "bundle", s, "pressure.");
      c.pressure.bundle = parse_bundle(s);
    }
    if (p.contains("kind")) {
      read(p, "kind", s, "pressure.");
      c.pressure.kind = parse_kind(s);
    }
  }
  if (doc.contains("quasiconf")) {
    const auto& q = doc["quasiconf"];
    reject_unknown(q, {"n", "k", "samples", "mesh_points"}, "quasiconf.");
    read(q, "n", c.quasiconf.n, "quasiconf.");
    read(q, "k", c.quasiconf.k, "quasiconf.");
    read(q, "samples", c.quasiconf.samples, "quasiconf.");
    read(q, "mesh_points", c.quasiconf.mesh_points, "quasiconf.");
  }
  read(doc, "seed", c.seed, "");
  read(doc, "jobs", c.jobs, "");
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, {"dir", "formats"}, "output.");
    read(o, "dir", c.output_dir, "output.");
    if (o.contains("formats")) {
      c.formats.clear();
      for (const auto& f : string_list(o["formats"], "output.formats")) c.formats.insert(f);
    }
  }
  validate(c);
  return c;
}

Json resolved(const RunConfig& c) {
  Json j;
  j["system"] = {{"name", c.system}, {"params", c.params}};
  j["analyses"] = c.analyses;
  j["depth"] = c.depth;
  j["k_max"] = c.k_max;
  j["sandwich_method"] = std::string(to_string(c.sandwich_method));
  j["n_check"] = c.n_check;
  j["theta"] = c.theta;
  j["defect_depth"] = c.defect_depth;
  j["defect_cap"] = c.defect_cap;
  j["lyapunov_steps"] = c.lyapunov_steps;
  j["boxdim_depth"] = c.boxdim_depth;
  j["pressure"] = {{"t", c.pressure.t},
                   {"n", c.pressure.n},
                   {"epsilon", c.pressure.epsilon},
                   {"bundle", std::string(to_string(c.pressure.bundle))},
                   {"kind", std::string(to_string(c.pressure.kind))}};
  j["quasiconf"] = {{"n", c.quasiconf.n},
                    {"k", c.quasiconf.k},
                    {"samples", c.quasiconf.samples},
                    {"mesh_points", c.quasiconf.mesh_points}};
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  j["output"] = {{"dir", c.output_dir}, {"formats", c.formats}};
  return j;
}

}  // namespace hypdim::cli
