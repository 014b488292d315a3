#include "hypdim/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

namespace hypdim {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Json to_json(const BoxCountTable& table) {
  Json j;
  j["scales"] = table.scales;
  j["counts"] = table.counts;
  j["fit_dim"] = table.fit_dim;
  j["fit_residual"] = table.fit_residual;
  return j;
}

Json to_json(const BundleReport& b) {
  Json j;
  j["dim"] = b.dim;
  j["applicable"] = b.applicable;
  if (b.formula) {
    j["r"] = b.formula->r;
    j["entropy"] = b.formula->entropy;
    j["det_integral"] = b.formula->det_integral;
    j["depth"] = b.formula->depth;
    j["pressure_at_root"] = b.formula->pressure_at_root;
  }
  j["brackets"] = Json::array();
  for (const auto& br : b.brackets)
    j["brackets"].push_back({{"k", br.k}, {"s_val", br.s_val}, {"t_val", br.t_val}, {"tolerance", br.tolerance}});
  j["defect"] = Json::array();
  for (const auto& d : b.defect_curve) j["defect"].push_back({{"n", d.n}, {"defect", d.defect}});
  return j;
}

Json to_json(const DimensionReport& report) {
  Json j;
  j["system"] = {{"name", report.system}, {"params", report.params}};
  j["bundles"] = Json::object();
  for (const auto& b : report.bundles) j["bundles"][std::string(to_string(b.bundle))] = to_json(b);
  j["total"] = report.total_dim ? Json(*report.total_dim) : Json(nullptr);
  j["flags"] = report.flags;
  if (report.box_oracle) j["box_dim_oracle"] = to_json(*report.box_oracle);
  return j;
}

void write_brackets_csv(std::ostream& os, const DimensionReport& report) {
  os << "bundle,k,s_val,t_val,tolerance\n";
  for (const auto& b : report.bundles)
    for (const auto& br : b.brackets)
      os << to_string(b.bundle) << ',' << br.k << ',' << format_real(br.s_val) << ',' << format_real(br.t_val) << ','
         << format_real(br.tolerance) << '\n';
}

void write_defect_csv(std::ostream& os, const DimensionReport& report) {
  os << "bundle,n,defect\n";
  for (const auto& b : report.bundles)
    for (const auto& d : b.defect_curve) os << to_string(b.bundle) << ',' << d.n << ',' << format_real(d.defect) << '\n';
}

std::filesystem::path default_schema_path() {
  if (const char* dir = std::getenv("HYPDIM_SCHEMA_DIR"); dir && *dir)
    return std::filesystem::path(dir) / "report.schema.json";
  return std::filesystem::path(HYPDIM_SCHEMA_DIR) / "report.schema.json";
}

Json load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("load_schema: cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("load_schema: " + path.string() + ": " + e.what());
  }
}

namespace {

bool type_matches(const Json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  return false;
}

void validate_at(const Json& v, const Json& s, const Json& root, const std::string& where,
                 std::vector<std::string>& errors) {
  if (s.contains("$ref")) {
    const auto ref = s["$ref"].get<std::string>();
    if (ref.rfind("#/", 0) != 0) throw InvalidArgument("validate_json: only local $ref is supported: " + ref);
    validate_at(v, root.at(Json::json_pointer(ref.substr(1))), root, where, errors);
    return;
  }
  if (s.contains("type")) {
    const auto& t = s["type"];
    bool ok = false;
    if (t.is_string()) ok = type_matches(v, t.get<std::string>());
    else
      for (const auto& alt : t) ok = ok || type_matches(v, alt.get<std::string>());
    if (!ok) {
      errors.push_back(where + ": expected type " + t.dump() + ", got " + v.type_name());
      return;
    }
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(where + ": value " + v.dump() + " not in enum");
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
    errors.push_back(where + ": value below minimum " + s["minimum"].dump());
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& key : s["required"])
        if (!v.contains(key.get<std::string>())) errors.push_back(where + ": missing required key " + key.dump());
    const Json props = s.value("properties", Json::object());
    for (const auto& [key, child] : v.items()) {
      if (props.contains(key)) {
        validate_at(child, props[key], root, where + "/" + key, errors);
      } else if (s.contains("additionalProperties")) {
        const auto& ap = s["additionalProperties"];
        if (ap.is_boolean() && !ap.get<bool>()) errors.push_back(where + ": unexpected key \"" + key + "\"");
        else if (ap.is_object()) validate_at(child, ap, root, where + "/" + key, errors);
      }
    }
  }
  if (v.is_array() && s.contains("items"))
    for (std::size_t i = 0; i < v.size(); ++i) validate_at(v[i], s["items"], root, where + "/" + std::to_string(i), errors);
}

}  // namespace

std::vector<std::string> validate_json(const Json& doc, const Json& schema) {
  std::vector<std::string> errors;
  validate_at(doc, schema, schema, "#", errors);
  return errors;
}

}  // namespace hypdim
