// Command-line front end: one subcommand per run, one document per output.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "excess/errors.hpp"
#include "excess/reproduce.hpp"

namespace fs = std::filesystem;
using namespace excess;

namespace {

struct RunConfig {
  std::optional<double> c_lo, c_gn, d_const, beta_lower;
  std::optional<std::size_t> grid_n;
  std::optional<double> r_max;
  std::string format;  // empty: per-command default
  std::string output;
  bool verbose = false;

  Constants constants() const {
    Constants c;
    if (c_lo) c.c_lo = *c_lo;
    if (c_gn) c = c.with_gn(*c_gn);
    else if (c_lo) c.d_const = c.c_lo * c.c_gn;
    if (d_const) c.d_const = *d_const;
    if (beta_lower) c.beta_lower = *beta_lower;
    c.validate();
    return c;
  }

  SCFConfig scf() const {
    SCFConfig s;
    if (grid_n) s.grid_size = *grid_n;
    if (r_max) s.r_max = *r_max;
    s.validate();
    return s;
  }
};

// A scalar-only CSV view of a JSON object: one "key,value" row per leaf.
void flatten(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else {
    out << prefix << ',' << (j.is_string() ? j.get<std::string>() : j.dump()) << '\n';
  }
}

std::string render(const Json& doc, const std::string& format) {
  if (format == "csv") {
    std::ostringstream out;
    out << "key,value\n";
    flatten(doc, "", out);
    return out.str();
  }
  return doc.dump(2) + "\n";
}

fs::path output_path(const std::string& name) {
  fs::path p(name);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("EXCESS_OUTPUT_DIR"); dir && *dir) p = fs::path(dir) / p;
  }
  return p;
}

void emit(const RunConfig& rc, const std::string& text) {
  if (rc.output.empty()) {
    std::cout << text;
    return;
  }
  const auto path = output_path(rc.output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cli-report", "cannot write " + path.string());
  f << text;
}

Json hartree_document(const HartreeSolution& sol, double D) {
  Json doc = to_json(sol);
  const auto [v1, v2] = virial_residuals(sol);
  doc["virial"] = Json{{"2K-A+R_over_K", round6(v1)}, {"K-A+2R_over_K", round6(v2)}};
  doc["lemmas"] = to_json(lemma_checks(sol));
  doc["cup_ratio"] = round6(cup_ratio(sol.psi));
  doc["kinetic_certificate"] = to_json(kinetic_certificate(sol, D));
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excess-charge laboratory: Hartree model, sharp constants and bounds on N(Z)"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file; flags override it");

  RunConfig rc;
  app.add_option("--c-lo", rc.c_lo, "Lieb-Oxford constant")->check(CLI::Range(1.0, 2.0));
  app.add_option("--c-gn", rc.c_gn, "Gagliardo-Nirenberg constant (D recomputed as c_lo * c_gn)");
  app.add_option("--d-const", rc.d_const, "D constant");
  app.add_option("--beta-lower", rc.beta_lower, "lower bound on beta");
  app.add_option("--grid-n", rc.grid_n, "radial grid size");
  app.add_option("--rmax", rc.r_max, "fixed outer radius (default: adaptive)");
  app.add_option("--format", rc.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("-o,--output", rc.output, "output file (relative paths go under $EXCESS_OUTPUT_DIR)");
  app.add_flag("-v,--verbose", rc.verbose, "progress on stderr");

  // hartree
  auto* hartree = app.add_subcommand("hartree", "Hartree model")->require_subcommand(1, 1);
  double z = 1.0, n = 1.0;
  std::string profile_out;
  auto* h_solve = hartree->add_subcommand("solve", "converged state at fixed mass");
  h_solve->add_option("--z", z, "nuclear charge")->required();
  h_solve->add_option("--n", n, "mass N")->required();
  h_solve->add_option("--profile", profile_out, "write the radial profile here");
  auto* h_crit = hartree->add_subcommand("critical", "critical mass N_c(Z)");
  h_crit->add_option("--z", z, "nuclear charge")->required();
  h_crit->add_option("--profile", profile_out, "write the radial profile here");

  // gn
  auto* gn = app.add_subcommand("gn", "Gagliardo-Nirenberg constant")->require_subcommand(1, 1);
  double shoot_tol = 1e-12, rho = 2.0 / 3.0;
  int dim = 3;
  auto* gn_compute = gn->add_subcommand("compute", "sharp constant by shooting");
  gn_compute->add_option("--shoot-tol", shoot_tol, "tolerance on u(0)");
  auto* gn_nasibov = gn->add_subcommand("nasibov", "analytic Nasibov bound k_N(rho, d)");
  gn_nasibov->add_option("--rho", rho, "exponent rho");
  gn_nasibov->add_option("--d", dim, "dimension");

  // beta
  auto* beta = app.add_subcommand("beta", "beta and alpha_N")->require_subcommand(1, 1);
  std::string family = "rpow-exp";
  int budget = 200, points = 2, seeds = 64;
  std::uint64_t seed = 20240601;
  auto* b_trial = beta->add_subcommand("trial", "minimise beta over a trial family");
  b_trial->add_option("--family", family, "rpow-exp, shell or soft-annulus");
  b_trial->add_option("--budget", budget, "optimizer iterations");
  auto* b_alpha = beta->add_subcommand("alpha-n", "minimise alpha_N over point sets");
  b_alpha->add_option("--n", points, "number of points")->required();
  b_alpha->add_option("--seeds", seeds, "random starts");
  b_alpha->add_option("--seed", seed, "base seed");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "closed-form bounds")->require_subcommand(1, 1);
  int zmin = 1, zmax = 5, scan_cap = 10000;
  auto* b_table = bounds->add_subcommand("table", "per-Z bound table");
  b_table->add_option("--zmin", zmin, "first Z");
  b_table->add_option("--zmax", zmax, "last Z");
  auto* b_compare = bounds->add_subcommand("compare", "all bounds and error terms at one Z");
  b_compare->add_option("--z", z, "nuclear charge")->required();
  auto* b_cross = bounds->add_subcommand("crossover", "largest Z where the main bound beats 1.22Z + 3Z^{1/3}");
  b_cross->add_option("--scan-cap", scan_cap, "largest Z scanned");

  // reproduce
  int samples = 100;
  auto* repro = app.add_subcommand("reproduce", "run every acceptance check");
  repro->add_option("--samples", samples, "profiles per property sweep");
  repro->add_option("--seeds", seeds, "alpha_N random starts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    const Constants constants = rc.constants();
    const SCFConfig scf = rc.scf();
    const std::string fmt = rc.format.empty() ? "json" : rc.format;
    int status = 0;

    auto write_profile_file = [&](const RadialProfile& p, Json& doc) {
      if (profile_out.empty()) return;
      const auto path = output_path(profile_out);
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      std::ofstream f(path);
      if (!f) throw Error(ErrorKind::InvalidArgument, "cli-report", "cannot write " + path.string());
      write_profile(f, p);
      doc["profile"] = profile_out;
    };

    if (h_solve->parsed()) {
      const auto sol = solve(z, n, scf);
      Json doc = hartree_document(sol, constants.d_const);
      write_profile_file(sol.psi, doc);
      emit(rc, render(doc, fmt));
    } else if (h_crit->parsed()) {
      const auto cp = critical_point(z, scf);
      Json doc{{"Z", round6(z)}, {"N_c", round6(cp.N_c)}, {"N_c_over_Z", round6(cp.N_c / z)}};
      doc["solution"] = hartree_document(cp.solution, constants.d_const);
      write_profile_file(cp.solution.psi, doc);
      emit(rc, render(doc, fmt));
    } else if (gn_compute->parsed()) {
      GNConfig cfg;
      cfg.shoot_tol = shoot_tol;
      if (rc.grid_n) cfg.grid_size = *rc.grid_n;
      if (rc.r_max) cfg.r_max = *rc.r_max;
      emit(rc, render(to_json(solve_ground_state(cfg)), fmt));
    } else if (gn_nasibov->parsed()) {
      const auto p = GNParams::make(rho, dim);
      const double kn = nasibov_kn(rho, dim);
      Json doc{{"rho", round6(rho)},
               {"d", dim},
               {"alpha", round6(p.alpha)},
               {"k_N", round6(kn)},
               {"k_N_pow_rho_plus_2", round6(std::pow(kn, rho + 2.0))},
               {"babenko_beckner", round6(babenko_beckner((rho + 2.0) / (rho + 1.0), dim))}};
      emit(rc, render(doc, fmt));
    } else if (b_trial->parsed()) {
      const auto est = optimize_beta_upper(parse_beta_family(family), budget, scf.grid_size);
      emit(rc, render(to_json(est), fmt));
    } else if (b_alpha->parsed()) {
      emit(rc, render(to_json(minimize_alpha_n(points, seeds, seed)), fmt));
    } else if (b_table->parsed()) {
      const auto rows = compare_table(zmin, zmax, constants);
      emit(rc, rc.format == "json" ? bounds_json(rows).dump(2) + "\n" : bounds_csv(rows));
    } else if (b_compare->parsed()) {
      const auto rep = bound_report(z, constants);
      Json doc = to_json(rep);
      const auto detail = main_bound_detail(z, constants);
      doc["frozen_a"] = Json{{"applies", detail.frozen_a_applies}, {"value", round6(detail.frozen_a_value)}};
      doc["recomputed"] = Json{{"coefficient", round6(detail.recomputed_coefficient)},
                               {"value", round6(detail.recomputed_value)}};
      const auto du = delta_u0(rep.main, z, constants);
      doc["delta_at_main"] = round6(du.delta);
      doc["u0_at_main"] = round6(du.u0);
      doc["hartree_with_beta_upper"] = round6(hartree_bound_with_beta(z, constants.beta_upper));
      doc["constants"] = to_json(constants);
      emit(rc, render(doc, fmt));
    } else if (b_cross->parsed()) {
      emit(rc, render(to_json(crossover_vs_nam(constants, scan_cap)), fmt));
    } else if (repro->parsed()) {
      ReproduceOptions opt;
      opt.constants = constants;
      opt.scf = scf;
      if (rc.grid_n) opt.gn.grid_size = *rc.grid_n;
      opt.property_samples = samples;
      opt.alpha_seeds = seeds;
      ReproduceContext ctx(opt);
      Json checks = Json::array();
      bool all = true;
      for (const auto& entry : acceptance_checks()) {
        const auto res = run_check(entry.first, ctx);
        std::cerr << summary_line(res) << '\n';
        checks.push_back(to_json(res));
        all = all && res.passed;
      }
      // Bound table under the supplied constants next to the defaults.
      Json deltas = Json::array();
      for (int zz = 1; zz <= 5; ++zz)
        deltas.push_back(Json{{"Z", zz},
                              {"main", round6(main_bound(zz, constants))},
                              {"main_default", round6(main_bound(zz))},
                              {"delta", round6(main_bound(zz, constants) - main_bound(zz))}});
      Json doc{{"constants", to_json(constants)}, {"checks", checks}, {"table_deltas", deltas},
               {"all_passed", all}};
      emit(rc, render(doc, fmt));
      status = all ? 0 : 1;
    }

    if (rc.verbose) {
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cerr << "done in " << s << " s\n";
    }
    return status;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.is_input_error() ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
