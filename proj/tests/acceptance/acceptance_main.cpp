// Acceptance run: one PASS/FAIL line per criterion.
//
// A criterion that cannot be met as stated (the requested bound lies below
// the exact value of the quantity) is printed as FAIL with the word
// "infeasible" and the exact value; it does not change the exit status.
// Every other FAIL does.

#include "hypdim/config.hpp"
#include "hypdim/run.hpp"
#include "support/oracles.hpp"

#include <hypdim/bowen.hpp>
#include <hypdim/boxdim.hpp>
#include <hypdim/catalog.hpp>
#include <hypdim/cocycle.hpp>
#include <hypdim/pressure.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hypdim;

namespace {

struct Outcome {
  bool pass = true;
  bool infeasible = false;  // only meaningful when !pass
  std::string detail;
};

class Notes {
 public:
  template <class... A>
  void add(const char* fmt, A... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    if (!text_.empty()) text_ += "; ";
    text_ += buf;
  }
  std::string str() const { return text_; }

 private:
  std::string text_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = catalog_system("cantor_repeller", {{"slope", 3.0}});
  const auto f = dimension_via_formula(e, Bundle::unstable, 10);
  const double secs = seconds_since(t0);
  const double err = std::abs(f.r - oracle::kLog2OverLog3);
  Notes n;
  n.add("r=%.9f |r-log2/log3|=%.2e (tol 1e-4) time=%.2fs (limit 5s)", f.r, err, secs);
  return {err <= 1e-4 && secs < 5.0, false, n.str()};
}

Outcome criterion2() {
  const auto e = catalog_system("cookie_cutter", {{"slope_left", 3.0}, {"slope_right", 4.0}});
  const double moran = oracle::moran({1.0 / 3.0, 1.0 / 4.0});
  const auto f = dimension_via_formula(e, Bundle::unstable, 10);
  const auto br = sandwich_sequence(e, Bundle::unstable, 3, SandwichMethod::transfer_operator);
  const auto& b3 = br.at(3);
  const bool contains = b3.s_val - b3.tolerance <= moran && moran <= b3.t_val + b3.tolerance;
  const double err = std::abs(f.r - moran);
  Notes n;
  n.add("oracle=%.10f r=%.10f |diff|=%.2e (tol 1e-3)", moran, f.r, err);
  n.add("k=3 bracket [%.10f, %.10f] +/- %.1e contains oracle: %s", b3.s_val, b3.t_val, b3.tolerance,
        contains ? "yes" : "no");
  return {err <= 1e-3 && contains, false, n.str()};
}

Outcome criterion3() {
  const auto e = catalog_system("linear_horseshoe");
  const auto ru = dimension_via_formula(e, Bundle::unstable, 10).r;
  const auto rs = dimension_via_formula(e, Bundle::stable, 10).r;
  const double total = ru + rs;
  const double target = 2.0 * oracle::kLog2OverLog3;
  const auto box = boxdim_oracle(e);
  const bool ok = std::abs(ru - oracle::kLog2OverLog3) <= 1e-3 && std::abs(rs - oracle::kLog2OverLog3) <= 1e-3 &&
                  std::abs(total - target) <= 2e-3 && std::abs(box.fit_dim - target) <= 5e-2;
  Notes n;
  n.add("r_u=%.9f r_s=%.9f (tol 1e-3) total=%.9f vs %.9f (tol 2e-3) box=%.6f (tol 5e-2)", ru, rs, total, target,
        box.fit_dim);
  return {ok, false, n.str()};
}

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = catalog_system("cat_map");
  const auto ru = dimension_via_formula(e, Bundle::unstable, 10).r;
  const auto rs = dimension_via_formula(e, Bundle::stable, 10).r;
  const auto h = pressure_separated(e, [](const Point&) { return 0.0; }, 8, 0.05);
  const double secs = seconds_since(t0);
  const bool ok = std::abs(ru - 1.0) <= 1e-2 && std::abs(rs - 1.0) <= 1e-2 &&
                  std::abs(h.value - oracle::kLogGolden) <= 5e-2 && secs < 60.0;
  Notes n;
  n.add("r_u=%.9f r_s=%.9f (tol 1e-2) entropy(n=8)=%.6f vs %.6f (tol 5e-2) time=%.1fs (limit 60s)", ru, rs, h.value,
        oracle::kLogGolden, secs);
  return {ok, false, n.str()};
}

/// Exact k-th bracket for the Jordan map 3 [[1,1],[0,1]]: P(f^m, s Phi_m) = m log 9 - s log sigma_1(A^m).
std::pair<double, double> jordan_exact_bracket(int k) {
  const int m = 1 << k;
  const double shear = std::log(oracle::shear_sigma_max(static_cast<double>(m)));
  const double base = m * std::log(3.0);
  return {2.0 * base / (base + shear), 2.0 * base / (base - shear)};
}

Outcome criterion5() {
  Outcome out;
  Notes n;
  bool hard_fail = false;
  // Both systems have locally constant derivatives, so the tighter slack applies.
  for (const char* name : {"jordan_endomorphism", "cookie_cutter"}) {
    const auto e = catalog_system(name);
    const auto br = sandwich_sequence(e, Bundle::unstable, 4, SandwichMethod::transfer_operator);
    bool monotone = true;
    for (std::size_t k = 1; k < br.size(); ++k)
      monotone = monotone && br[k].s_val >= br[k - 1].s_val - 1e-3 && br[k].t_val <= br[k - 1].t_val + 1e-3;
    const double width = br.back().t_val - br.back().s_val;
    n.add("%s: monotone k=0..4 %s, width(k=4)=%.4f (limit 0.1)", name, monotone ? "yes" : "NO", width);
    if (!monotone) {
      out.pass = false;
      hard_fail = true;
      continue;
    }
    if (width <= 0.1) continue;
    out.pass = false;
    if (std::string(name) != "jordan_endomorphism") {
      hard_fail = true;
      continue;
    }
    const auto [s4, t4] = jordan_exact_bracket(4);
    const bool exact = std::abs(br.back().s_val - s4) < 1e-9 && std::abs(br.back().t_val - t4) < 1e-9;
    hard_fail = hard_fail || !(exact && t4 - s4 > 0.1);
    n.add("infeasible: closed-form k=4 bracket [%.6f, %.6f] has width %.4f", s4, t4, t4 - s4);
    const auto ext = sandwich_sequence(e, Bundle::unstable, 8, SandwichMethod::transfer_operator);
    n.add("extended run k=8 width=%.4f", ext.back().t_val - ext.back().s_val);
  }
  out.infeasible = !out.pass && !hard_fail;
  out.detail = n.str();
  return out;
}

Outcome criterion6() {
  Outcome out;
  Notes n;
  bool hard_fail = false;
  for (const char* name : {"cat_map", "cantor_repeller", "jordan_endomorphism"}) {
    const auto e = catalog_system(name);
    const auto sample = defect_sample(e);
    double worst = 0.0;
    for (Bundle b : {Bundle::unstable, Bundle::stable})
      if (e.frame.dim(b) > 0) worst = std::max(worst, conformality_defect(e.system, e.frame, b, 128, sample));
    n.add("%s defect(128)=%.5f (limit 0.05)", name, worst);
    if (worst > 0.05) {
      out.pass = false;
      if (std::string(name) == "jordan_endomorphism") {
        const double exact = 2.0 * std::log(oracle::shear_sigma_max(128.0)) / 128.0;
        n.add("infeasible: exact value 2 log sigma_max([[1,128],[0,1]])/128 = %.5f", exact);
        hard_fail = hard_fail || std::abs(worst - exact) >= 1e-6;
      } else {
        hard_fail = true;
      }
    }
  }
  const auto diag = catalog_system("diag_endomorphism", {{"a", 2.0}, {"b", 3.0}});
  const double d32 = conformality_defect(diag.system, diag.frame, Bundle::unstable, 32, defect_sample(diag));
  ReportOptions opts;
  opts.formula = false;
  opts.sandwich = false;
  const auto rep = full_report(diag, opts);
  const bool flagged = rep.has_flag(kNonConformalFlag);
  n.add("diag(2,3) defect(32)=%.5f (min 0.35) flag %s", d32, flagged ? "raised" : "MISSING");
  if (!(d32 >= 0.35 && flagged)) {
    out.pass = false;
    hard_fail = true;
  }
  out.infeasible = !out.pass && !hard_fail;
  out.detail = n.str();
  return out;
}

Outcome criterion7() {
  Outcome out;
  Notes n;
  const auto jordan = catalog_system("jordan_endomorphism");
  double worst_gap = 0.0;
  bool one_sided = true;
  for (double t : {0.5, 1.0, 2.0}) {
    for (int nn : {16, 32, 64}) {
      const auto c = variational_crosscheck(jordan, Bundle::unstable, t, nn, 0.05);
      one_sided = one_sided && c.p_plus <= c.p_minus + 1e-12;
      if (nn == 64) worst_gap = std::max(worst_gap, c.gap);
    }
  }
  n.add("jordan max gap(n=64)=%.4f (limit 0.15)", worst_gap);
  if (worst_gap > 0.15) out.pass = false;

  double worst_1d = 0.0;
  for (const char* name : {"cantor_repeller", "cookie_cutter", "linear_horseshoe", "cat_map", "perturbed_doubling"}) {
    const auto e = catalog_system(name);
    for (Bundle b : {Bundle::unstable, Bundle::stable}) {
      if (e.frame.dim(b) != 1) continue;
      for (double t : {0.5, 1.0, 2.0})
        for (int nn : {16, 32, 64}) {
          const auto c = variational_crosscheck(e, b, t, nn, 0.05);
          one_sided = one_sided && c.p_plus <= c.p_minus + 1e-12;
          if (nn == 64) worst_1d = std::max(worst_1d, c.gap);
        }
    }
  }
  n.add("1-D bundles max gap(n=64)=%.2e (limit 1e-9); P*(tF+) <= P*(tF-) everywhere: %s", worst_1d,
        one_sided ? "yes" : "NO");
  if (worst_1d > 1e-9 || !one_sided) out.pass = false;
  out.detail = n.str();
  return out;
}

const std::vector<const char*> kAllSystems = {"cantor_repeller", "cat_map", "cookie_cutter", "diag_endomorphism",
                                              "jordan_endomorphism", "linear_horseshoe", "perturbed_doubling"};

Outcome criterion8() {
  std::mt19937_64 rng(42);
  long violations = 0;
  long trials = 0;
  for (const char* name : kAllSystems) {
    const auto e = catalog_system(name);
    const auto points = e.info.sample(1000, 42);
    for (Bundle b : {Bundle::unstable, Bundle::stable}) {
      if (e.frame.dim(b) == 0) continue;
      const auto sub = make_potential(e.system, e.frame, PotentialKind::sub_conorm, b);
      const auto sup = make_potential(e.system, e.frame, PotentialKind::super_norm, b);
      std::uniform_int_distribution<int> len(1, 20);
      const FourCConstants c_sub = four_c_constants(sub, points, 4);
      const FourCConstants c_sup = four_c_constants(sup, points, 4);
      for (const auto& x : points) {
        const int n = len(rng);
        const int m = len(rng);
        Point y = x;
        for (int j = 0; j < n; ++j) y = sub.step(y);
        // phi_{n+m}(x) <= phi_n(x) + phi_m(g^n x); Phi the other way.
        if (sub(x, n + m) > sub(x, n) + sub(y, m) + 1e-6) ++violations;
        if (sup(x, n + m) < sup(x, n) + sup(y, m) - 1e-6) ++violations;
        const int n4 = 5 + len(rng);
        if (!four_c_inequality_check(sub, x, n4, c_sub)) ++violations;
        if (!four_c_inequality_check(sup, x, n4, c_sup)) ++violations;
        trials += 4;
      }
    }
  }
  Notes n;
  n.add("%ld checks over 1000 points per system and bundle, %ld violations beyond 1e-6", trials, violations);
  return {violations == 0, false, n.str()};
}

Outcome criterion9() {
  long bad = 0;
  long bad_equal = 0;
  long trials = 0;
  for (const char* name : kAllSystems) {
    const auto e = catalog_system(name);
    const auto points = e.info.sample(1000, 7);
    for (Bundle b : {Bundle::unstable, Bundle::stable}) {
      if (e.frame.dim(b) == 0) continue;
      for (auto kind : {PotentialKind::sub_conorm, PotentialKind::super_norm}) {
        const auto pot = make_potential(e.system, e.frame, kind, b);
        for (std::size_t i = 0; i < points.size(); i += 10) {
          const auto k = kingman_check(pot, points[i], 64);
          ++trials;
          if (k.limit_estimate < k.inf_estimate) ++bad;
          if (e.system.constant_jacobian && e.frame.dim(b) == 1 && std::abs(k.limit_estimate - k.inf_estimate) > 1e-6)
            ++bad_equal;
        }
      }
    }
  }
  Notes n;
  n.add("%ld trials: limit < inf in %ld, inequality on conformal constant-derivative bundles in %ld", trials, bad,
        bad_equal);
  return {bad == 0 && bad_equal == 0, false, n.str()};
}

Outcome criterion10() {
  const auto e = catalog_system("perturbed_doubling");
  const auto f = dimension_via_formula(e, Bundle::unstable, 12);
  Notes n;
  n.add("root=%.9f (target 1, tol 1e-3)", f.r);
  return {std::abs(f.r - 1.0) <= 1e-3, false, n.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome criterion11() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "hypdim-acceptance-determinism";
  fs::remove_all(root);
  Json cfg = {{"system", {{"name", "cookie_cutter"}}},
              {"analyses", {"dimension", "sandwich", "defect", "boxdim", "pressure_curve", "lyapunov"}},
              {"seed", 42}};
  for (const char* run : {"a", "b"}) {
    cfg["output"] = {{"dir", (root / run).string()}};
    cli::run(cli::parse_config(cfg));
  }
  int files = 0;
  bool same = true;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const auto name = entry.path().filename();
    if (name == "config.resolved.json") continue;  // holds the output directory itself
    ++files;
    same = same && slurp(entry.path()) == slurp(root / "b" / name);
  }
  fs::remove_all(root);
  Notes n;
  n.add("%d artifacts compared, byte-identical: %s", files, same ? "yes" : "NO");
  return {same && files >= 5, false, n.str()};
}

}  // namespace

int main() {
  using Fn = Outcome (*)();
  const std::vector<std::pair<const char*, Fn>> criteria = {
      {"conformal Cantor repeller dimension", criterion1},
      {"cookie-cutter root and k=3 bracket", criterion2},
      {"linear horseshoe dimensions and box count", criterion3},
      {"cat map dimensions and entropy", criterion4},
      {"monotone sandwich", criterion5},
      {"average-conformality detector", criterion6},
      {"variational cross-check", criterion7},
      {"sub/super-additivity and 4C property suites", criterion8},
      {"Kingman contract", criterion9},
      {"perturbed doubling root", criterion10},
      {"determinism", criterion11},
  };
  int fatal = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, false, std::string("exception: ") + e.what()};
    }
    const char* tag = o.pass ? "PASS" : (o.infeasible ? "FAIL (infeasible as specified)" : "FAIL");
    std::printf("[%s] criterion %zu: %s: %s\n", tag, i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass && !o.infeasible) ++fatal;
  }
  return fatal == 0 ? 0 : 1;
}
