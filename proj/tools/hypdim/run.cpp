#include "hypdim/run.hpp"

#include <hypdim/cocycle.hpp>
#include <hypdim/pressure.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hypdim::cli {
namespace fs = std::filesystem;

namespace {

class ArtifactWriter {
 public:
  explicit ArtifactWriter(const RunConfig& c) : dir_(c.output_dir), json_(c.formats.count("json") > 0),
                                                csv_(c.formats.count("csv") > 0) {
    fs::create_directories(dir_);
  }

  void json(const std::string& name, const Json& doc) const {
    if (!json_) return;
    std::ofstream out(dir_ / name, std::ios::binary);
    out << doc.dump(2) << '\n';
  }

  template <class Fn>
  void csv(const std::string& name, Fn&& write) const {
    if (!csv_) return;
    std::ofstream out(dir_ / name, std::ios::binary);
    write(out);
  }

 private:
  fs::path dir_;
  bool json_;
  bool csv_;
};

std::vector<Bundle> bundles_of(const CatalogEntry& e) {
  std::vector<Bundle> out;
  for (Bundle b : {Bundle::unstable, Bundle::stable})
    if (e.frame.dim(b) > 0) out.push_back(b);
  return out;
}

Json lyapunov_json(const CatalogEntry& e, const RunConfig& c) {
  Json out = Json::object();
  const Point x = e.info.sample(1, c.seed).front();
  for (Bundle b : bundles_of(e)) {
    const auto r = lyapunov_exponents(e.system, e.frame, x, c.lyapunov_steps, b);
    out[std::string(to_string(b))] = {
        {"exponents", r.exponents}, {"checkpoints", r.checkpoints}, {"partials", r.partials}, {"converged", r.converged}};
  }
  return out;
}

Json pressure_json(const CatalogEntry& e, const RunConfig& c, std::vector<PressureRow>& rows) {
  const auto& p = c.pressure;
  if (e.frame.dim(p.bundle) == 0)
    throw InvalidArgument("pressure_curve: the " + std::string(to_string(p.bundle)) + " bundle is empty");
  const auto pot = make_potential(e.system, e.frame, p.kind, p.bundle);
  Json out = Json::array();
  for (std::size_t i = 0; i < p.t.size(); ++i) {
    const auto est = pressure_sequence(e, pot, p.t[i], p.n, p.epsilon);
    for (auto row : est.diagnostics) {
      row.k = static_cast<int>(i);
      rows.push_back(row);
    }
    out.push_back({{"t", p.t[i]},
                   {"value", est.value},
                   {"n_used", est.n_used},
                   {"epsilon", est.epsilon_used},
                   {"method", std::string(to_string(est.method))},
                   {"residual", est.residual}});
  }
  return out;
}

Json quasiconf_json(const CatalogEntry& e, const RunConfig& c) {
  if (!e.coding) throw InvalidArgument("quasiconf: " + e.system.name + " has no coding");
  const auto& q = c.quasiconf;
  const auto sample = e.info.sample(static_cast<std::size_t>(q.samples), c.seed);
  Json out = Json::object();
  for (Bundle b : bundles_of(e)) {
    double worst = 1.0;
    for (const auto& z : sample)
      worst = std::max(worst, quasi_conformal_ratio(e.system, *e.coding, z, q.n, q.k, b, q.mesh_points).ratio());
    out[std::string(to_string(b))] = {{"n", q.n}, {"k", q.k}, {"max_ratio", worst}, {"samples", q.samples}};
  }
  return out;
}

ReportOptions report_options(const RunConfig& c) {
  ReportOptions o;
  o.depth = c.depth;
  o.k_max = c.k_max;
  o.n_check = c.n_check;
  o.theta = c.theta;
  o.defect_depth = c.defect_depth;
  o.defect_cap = static_cast<std::size_t>(c.defect_cap);
  o.formula = c.wants("dimension");
  o.sandwich = c.wants("sandwich");
  o.boxdim = false;
  o.method = c.sandwich_method;
  o.jobs = c.jobs;
  o.seed = c.seed;
  return o;
}

}  // namespace

void run(const RunConfig& c) {
  const auto entry = catalog_system(c.system, c.params);
  const ArtifactWriter out(c);
  out.json("config.resolved.json", resolved(c));

  Json doc;
  doc["system"] = {{"name", entry.system.name}, {"params", entry.info.params}};
  doc["bundles"] = Json::object();
  doc["total"] = nullptr;
  doc["flags"] = Json::array();
  Json analyses = Json::object();
  std::vector<PressureRow> rows;
  auto flush = [&] {
    if (!analyses.empty()) doc["analyses"] = analyses;
    out.json("report.json", doc);
  };

  try {
    if (c.wants("lyapunov")) analyses["lyapunov"] = lyapunov_json(entry, c);
    if (c.wants("pressure_curve")) {
      analyses["pressure_curve"] = pressure_json(entry, c, rows);
      out.csv("pressure.csv", [&](std::ostream& os) { write_pressure_csv(os, rows); });
    }
    if (c.wants("quasiconf")) analyses["quasiconf"] = quasiconf_json(entry, c);

    const auto rep = full_report(entry, report_options(c));
    const Json rep_doc = to_json(rep);
    for (const auto& item : rep_doc.items()) doc[item.key()] = item.value();
    if (c.wants("defect") || c.wants("dimension"))
      out.csv("defect.csv", [&](std::ostream& os) { write_defect_csv(os, rep); });
    if (c.wants("sandwich")) out.csv("brackets.csv", [&](std::ostream& os) { write_brackets_csv(os, rep); });

    if (c.wants("boxdim")) {
      OracleOptions oo;
      oo.depth = c.boxdim_depth;
      const auto table = boxdim_oracle(entry, oo);
      doc["box_dim_oracle"] = to_json(table);
      out.csv("boxdim.csv", [&](std::ostream& os) { write_boxdim_csv(os, table); });
    }
  } catch (const NumericalError&) {
    flush();
    throw;
  }
  flush();
}

namespace {

std::vector<CatalogDescriptor> filtered(const std::string& filter) {
  auto all = list_catalog();
  std::vector<CatalogDescriptor> out;
  std::copy_if(all.begin(), all.end(), std::back_inserter(out),
               [&](const auto& d) { return d.name.find(filter) != std::string::npos; });
  return out;
}

std::string params_text(const ParameterRecord& p) {
  if (p.empty()) return "-";
  std::string s;
  for (const auto& [k, v] : p) s += (s.empty() ? "" : ",") + k + "=" + format_real(v);
  return s;
}

}  // namespace

std::string list_systems_text(const std::string& filter) {
  const auto rows = filtered(filter);
  std::size_t w_name = 4, w_params = 10;
  for (const auto& d : rows) {
    w_name = std::max(w_name, d.name.size());
    w_params = std::max(w_params, params_text(d.defaults).size());
  }
  std::ostringstream os;
  os << std::left << "# " << std::setw(static_cast<int>(w_name)) << "name" << "  "
     << std::setw(static_cast<int>(w_params)) << "parameters" << "  dimension\n";
  for (const auto& d : rows) {
    os << "  " << std::setw(static_cast<int>(w_name)) << d.name << "  " << std::setw(static_cast<int>(w_params))
       << params_text(d.defaults) << "  " << (d.analytic_dimension ? format_real(*d.analytic_dimension) : "-") << '\n';
  }
  return os.str();
}

Json list_systems_json(const std::string& filter) {
  Json out = Json::array();
  for (const auto& d : filtered(filter))
    out.push_back({{"name", d.name},
                   {"params", d.defaults},
                   {"description", d.description},
                   {"analytic_dimension", d.analytic_dimension ? Json(*d.analytic_dimension) : Json(nullptr)}});
  return out;
}

}  // namespace hypdim::cli
