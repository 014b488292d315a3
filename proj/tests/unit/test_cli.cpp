#include <doctest.h>

#include "hypdim/config.hpp"
#include "hypdim/run.hpp"

#include "support/oracles.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hypdim;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("hypdim-test-" + tag)) {
    fs::remove_all(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  return Json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args, const fs::path& stdout_file) {
  const std::string cmd = std::string(HYPDIM_EXE) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const Json doc = {{"system", {{"name", "cantor_repeller"}}}, {"analyses", {"dimension"}}};
  const auto c = cli::parse_config(doc);
  CHECK(c.depth == 10);
  CHECK(c.formats.count("json") == 1);
  const auto again = cli::parse_config(cli::resolved(c));
  CHECK(cli::resolved(again) == cli::resolved(c));

  auto bad = doc;
  bad["depth"] = -1;
  CHECK_THROWS_AS(cli::parse_config(bad), InvalidArgument);
  bad = doc;
  bad["dpeth"] = 3;
  CHECK_THROWS_AS(cli::parse_config(bad), InvalidArgument);
  bad = doc;
  bad["analyses"] = {"dimension", "spectrum"};
  CHECK_THROWS_AS(cli::parse_config(bad), InvalidArgument);
  bad = doc;
  bad["theta"] = "small";
  CHECK_THROWS_AS(cli::parse_config(bad), InvalidArgument);
  bad = doc;
  bad["sandwich_method"] = "separated";
  bad["k_max"] = 7;
  CHECK_THROWS_AS(cli::parse_config(bad), InvalidArgument);
}

TEST_CASE("cantor run writes a schema-valid report") {
  TempDir dir("cantor");
  auto c = cli::parse_config({{"system", {{"name", "cantor_repeller"}}},
                              {"analyses", {"dimension", "sandwich", "defect", "boxdim"}},
                              {"k_max", 2},
                              {"output", {{"dir", dir.path.string()}}}});
  cli::run(c);
  const auto report = read_json(dir.path / "report.json");
  CHECK(report["bundles"]["unstable"]["r"].get<double>() == doctest::Approx(oracle::kLog2OverLog3).epsilon(1e-4));
  CHECK(report["box_dim_oracle"]["fit_dim"].get<double>() == doctest::Approx(oracle::kLog2OverLog3).epsilon(0.05));
  CHECK(validate_json(report, load_schema()).empty());
  for (const char* f : {"config.resolved.json", "brackets.csv", "defect.csv", "boxdim.csv"})
    CHECK(fs::exists(dir.path / f));
  CHECK(slurp(dir.path / "brackets.csv").rfind("bundle,k,s_val,t_val,tolerance\n", 0) == 0);
}

TEST_CASE("diagonal map run is flagged and succeeds") {
  TempDir dir("diag");
  TempDir out("diag-stdout");
  fs::create_directories(out.path);
  std::ofstream(out.path / "cfg.json") << Json{{"system", {{"name", "diag_endomorphism"}}},
                                               {"analyses", {"dimension", "defect"}},
                                               {"output", {{"dir", dir.path.string()}}}}
                                              .dump();
  CHECK(run_tool("run -c " + (out.path / "cfg.json").string(), out.path / "stdout.txt") == cli::kOk);
  const auto report = read_json(dir.path / "report.json");
  CHECK(validate_json(report, load_schema()).empty());
  const auto flags = report["flags"].get<std::vector<std::string>>();
  CHECK(std::find(flags.begin(), flags.end(), "NON_CONFORMAL") != flags.end());
}

TEST_CASE("invalid depth exits with the validation code and writes nothing") {
  TempDir dir("bad-depth");
  TempDir out("bad-depth-stdout");
  fs::create_directories(out.path);
  std::ofstream(out.path / "cfg.json") << Json{{"system", {{"name", "cantor_repeller"}}},
                                               {"analyses", {"dimension"}},
                                               {"depth", -3},
                                               {"output", {{"dir", dir.path.string()}}}}
                                              .dump();
  CHECK(run_tool("run -c " + (out.path / "cfg.json").string(), out.path / "stdout.txt") == cli::kValidation);
  CHECK_FALSE(fs::exists(dir.path));
  CHECK(run_tool("run -c " + (out.path / "cfg.json").string() + " --depth 4 --system nope", out.path / "o.txt") ==
        cli::kValidation);
  CHECK_FALSE(fs::exists(dir.path));
}

TEST_CASE("list-systems") {
  const auto text = cli::list_systems_text("");
  std::istringstream in(text);
  std::string line;
  int header = 0, rows = 0;
  while (std::getline(in, line)) (line.rfind("#", 0) == 0 ? header : rows)++;
  CHECK(header == 1);
  CHECK(rows == 7);
  CHECK(cli::list_systems_json("").size() == 7);
  const auto one = cli::list_systems_json("horseshoe");
  REQUIRE(one.size() == 1);
  CHECK(one[0]["name"] == "linear_horseshoe");

  TempDir out("list");
  fs::create_directories(out.path);
  CHECK(run_tool("list-systems horseshoe", out.path / "stdout.txt") == cli::kOk);
  const auto printed = slurp(out.path / "stdout.txt");
  CHECK(printed.find("linear_horseshoe") != std::string::npos);
  CHECK(printed.find("cat_map") == std::string::npos);
}

TEST_CASE("schema validator reports violations") {
  const auto schema = load_schema();
  Json doc = {{"system", {{"name", "x"}, {"params", Json::object()}}},
              {"bundles", Json::object()},
              {"total", nullptr},
              {"flags", Json::array()}};
  CHECK(validate_json(doc, schema).empty());
  doc["extra"] = 1;
  CHECK_FALSE(validate_json(doc, schema).empty());
  doc.erase("extra");
  doc.erase("flags");
  CHECK_FALSE(validate_json(doc, schema).empty());
}
