#include "excess/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "excess/errors.hpp"

namespace excess {

namespace {

CheckItem within(const std::string& label, double x, double ref, double tol) {
  std::ostringstream rule;
  rule << "|x - ref| <= " << tol;
  return {label, x, ref, rule.str(), std::abs(x - ref) <= tol};
}

CheckItem within_rel(const std::string& label, double x, double ref, double tol) {
  std::ostringstream rule;
  rule << "|x/ref - 1| <= " << tol;
  return {label, x, ref, rule.str(), std::abs(x / ref - 1.0) <= tol};
}

CheckItem at_most(const std::string& label, double x, double bound) {
  std::ostringstream rule;
  rule << "x <= " << bound;
  return {label, x, bound, rule.str(), x <= bound};
}

CheckItem at_least(const std::string& label, double x, double bound) {
  std::ostringstream rule;
  rule << "x >= " << bound;
  return {label, x, bound, rule.str(), x >= bound};
}

CheckItem inside(const std::string& label, double x, double lo, double hi) {
  std::ostringstream rule;
  rule << lo << " <= x <= " << hi;
  return {label, x, std::nullopt, rule.str(), x >= lo && x <= hi};
}

CheckItem flag(const std::string& label, bool ok, double value = NAN) {
  return {label, value, std::nullopt, "holds", ok};
}

std::string zlabel(const std::string& what, double Z) {
  std::ostringstream s;
  s << what << " (Z=" << Z << ")";
  return s.str();
}

CheckResult begin(int id, const std::string& title) {
  CheckResult r;
  r.id = id;
  r.title = title;
  return r;
}

CheckResult finish(CheckResult r) {
  r.passed = !r.items.empty() && std::all_of(r.items.begin(), r.items.end(), [](const auto& i) { return i.ok; });
  return r;
}

// ---------------------------------------------------------------------------

CheckResult check_main_table(ReproduceContext& ctx) {
  auto r = begin(1, "main bound for Z=1..5 and integer caps");
  const auto& c = ctx.options().constants;
  const double ref[] = {2.9489, 4.4824, 6.0286, 7.5741, 9.1180};
  const long caps[] = {2, 4, 6, 7, 9};
  for (int z = 1; z <= 5; ++z) {
    const double m = main_bound(z, c);
    r.items.push_back(within(zlabel("main", z), m, ref[z - 1], 2e-3));
    r.items.push_back({zlabel("integer cap", z), static_cast<double>(integer_cap(m)),
                       static_cast<double>(caps[z - 1]), "exact", integer_cap(m) == caps[z - 1]});
  }
  return finish(r);
}

CheckResult check_h_of_z(ReproduceContext& ctx) {
  auto r = begin(2, "h(6) and monotone decrease of h on [1, 1000]");
  const auto& c = ctx.options().constants;
  r.items.push_back(within("h(6)", h_of_z(6.0, c), 0.29363, 2e-4));
  int violations = 0;
  double prev = h_of_z(1.0, c);
  for (int k = 1; k <= 3996; ++k) {
    const double z = 1.0 + 0.25 * k;
    const double h = h_of_z(z, c);
    if (!(h < prev)) ++violations;
    prev = h;
  }
  r.items.push_back({"non-decreasing steps on a 0.25 lattice", static_cast<double>(violations), 0.0, "== 0",
                     violations == 0});
  return finish(r);
}

CheckResult check_gn(ReproduceContext& ctx) {
  auto r = begin(3, "sharp Gagliardo-Nirenberg constant and Pohozaev ratios");
  const auto& gs = ctx.ground_state();
  r.items.push_back(within("cgn (direct ratio)", gs.cgn_ratio, kGNReference, 1e-3));
  r.items.push_back(within_rel("cgn (direct) vs cgn (K-only)", gs.cgn_ratio, gs.cgn_pohozaev, 1e-5));
  r.items.push_back(within_rel("M/K", gs.M / gs.K, 5.0 / 3.0, 1e-5));
  r.items.push_back(within_rel("P/K", gs.P / gs.K, 8.0 / 3.0, 1e-5));
  const auto e = RadialProfile::exponential(RadialGrid::logarithmic(ctx.options().gn.grid_size, 300.0));
  r.notes.push_back("gn_ratio(e^{-r}) = " + format6(gn_ratio(e)) + " (a lower bound on the sharp constant)");
  r.notes.push_back("u(0) = " + format6(gs.u0) + ", K = " + format6(gs.K));
  return finish(r);
}

CheckResult check_nasibov(ReproduceContext& ctx) {
  auto r = begin(4, "Nasibov bound on the Gagliardo-Nirenberg constant");
  const double nb = nasibov_bound();
  r.items.push_back(within("k_N(2/3,3)^{8/3}", nb, kNasibovReference, 1e-5));
  r.items.push_back(within("k_N^{8/3} vs 96/125 (5 pi)^{-1/3}", nb, 96.0 / 125.0 * std::cbrt(1.0 / (5.0 * kPi)), 1e-10));
  r.items.push_back(within("k_N(2/3,3) vs (3^3 2^15 / (pi 5^10))^{1/8}", nasibov_kn(2.0 / 3.0, 3),
                           std::pow(27.0 * 32768.0 / (kPi * 9765625.0), 0.125), 1e-10));
  const double cgn = ctx.ground_state().cgn_ratio;
  r.items.push_back({"k_N^{8/3} - cgn", nb - cgn, std::nullopt, "> 0", nb > cgn});
  return finish(r);
}

CheckResult check_critical_mass(ReproduceContext& ctx) {
  auto r = begin(5, "Hartree critical mass and its Z-independence");
  const double n1 = ctx.critical(1.0).N_c;
  r.items.push_back(within("N_c(1)", n1, 1.21, 0.02));
  for (double z : {1.0, 2.0, 4.0}) {
    const double nc = ctx.critical(z).N_c;
    r.items.push_back(inside(zlabel("N_c", z), nc, z, 2.0 * z));
    if (z > 1.0) r.items.push_back(within(zlabel("N_c/Z", z), nc / z, n1, 1e-3));
  }
  return finish(r);
}

struct Constrained {
  double Z, N;
};
constexpr Constrained kConstrained[] = {{1.0, 0.2}, {1.0, 0.5}, {1.0, 1.0}, {2.0, 1.0}};

std::string nlabel(const std::string& what, double Z, double N) {
  std::ostringstream s;
  s << what << " (Z=" << Z << ", N=" << N << ")";
  return s.str();
}

CheckResult check_virial(ReproduceContext& ctx) {
  auto r = begin(6, "virial identities");
  for (const auto& c : kConstrained) {
    const auto sol = solve(c.Z, c.N, ctx.options().scf);
    const auto [v1, v2] = virial_residuals(sol);
    r.items.push_back(at_most(nlabel("|2K-A+R|/K", c.Z, c.N), std::abs(v1), 1e-4));
    r.notes.push_back(nlabel("(K-A+2R)/K", c.Z, c.N) + " = " + format6(v2) + ", -mu N/K = " +
                      format6(-sol.mu * sol.breakdown.N / sol.breakdown.K));
  }
  for (double z : {1.0, 2.0, 4.0}) {
    const auto& sol = ctx.critical(z).solution;
    const auto [v1, v2] = virial_residuals(sol);
    const auto& e = sol.breakdown;
    r.items.push_back(at_most(zlabel("|2K-A+R|/K at N_c", z), std::abs(v1), 1e-4));
    r.items.push_back(at_most(zlabel("|K-A+2R|/K at N_c", z), std::abs(v2), 1e-2));
    r.items.push_back(at_most(zlabel("|3K-A|/A at N_c", z), std::abs(3.0 * e.K - e.A) / e.A, 1e-2));
  }
  return finish(r);
}

CheckResult check_lemmas(ReproduceContext& ctx) {
  auto r = begin(7, "lemma suite on Hartree minimisers");
  const double D = ctx.options().constants.d_const;
  for (double z : {1.0, 2.0, 4.0}) {
    const auto& sol = ctx.critical(z).solution;
    const auto lem = lemma_checks(sol);
    r.items.push_back(at_most(zlabel("A/(NZ^2/3) at N_c", z), lem.a_ratio, 1.0 + 1e-8));
    r.items.push_back(at_most(zlabel("E/(-NZ^2/9) at N_c", z), lem.e_ratio, 1.0 + 1e-8));
    r.items.push_back(at_least(zlabel("J/(3N/Z) at N_c", z), lem.j_ratio, 1.0 - 1e-8));
    r.items.push_back(at_most(zlabel("cup ratio at N_c", z), cup_ratio(sol.psi), 1.0 + 1e-6));
    const auto cert = kinetic_certificate(sol, D);
    r.items.push_back(flag(zlabel("K <= NZ^2/9 + D K^{1/2} N^{5/6} at N_c", z), cert.holds, cert.lhs / cert.rhs));
  }
  for (const auto& c : kConstrained) {
    const auto sol = solve(c.Z, c.N, ctx.options().scf);
    r.items.push_back(at_most(nlabel("cup ratio", c.Z, c.N), cup_ratio(sol.psi), 1.0 + 1e-6));
    const auto lem = lemma_checks(sol);
    r.notes.push_back(nlabel("constrained state", c.Z, c.N) + ": A/(NZ^2/3) = " + format6(lem.a_ratio) +
                      ", E/(-NZ^2/9) = " + format6(lem.e_ratio) + ", J/(3N/Z) = " + format6(lem.j_ratio) +
                      " (the A and E lemmas need 3K = A, i.e. mu = 0)");
  }
  return finish(r);
}

CheckResult check_property_sweeps(ReproduceContext& ctx) {
  auto r = begin(8, "inequality sweeps over random profiles");
  const auto& opt = ctx.options();
  const auto grid = RadialGrid::logarithmic(opt.scf.grid_size, 800.0);
  const double cgn = ctx.ground_state().cgn_ratio;
  double min_nam = INFINITY, min_wk = INFINITY, max_gn = -INFINITY, max_schwarz = -INFINITY;
  for (int k = 0; k < opt.property_samples; ++k) {
    const auto p = random_profile(grid, opt.seed + static_cast<std::uint64_t>(k));
    min_nam = std::min(min_nam, nam_form_ratio(p));
    min_wk = std::min(min_wk, weighted_kinetic(p) / (kinetic(p) + mass(p)));
    max_gn = std::max(max_gn, gn_ratio(p));
    const double n = mass(p);
    max_schwarz = std::max(max_schwarz, n * n / (moment(p, 1) * moment(p, -1)));
  }
  r.items.push_back(at_least("min nam_form_ratio", min_nam, -0.75 - 1e-6));
  r.items.push_back(at_least("min weighted_kinetic/(K+N)", min_wk, -1e-8));
  r.items.push_back(at_most("max gn_ratio - cgn", max_gn - cgn, 1e-4));
  r.items.push_back(at_most("max N^2/(J A/Z)", max_schwarz, 1.0 + 1e-10));
  r.notes.push_back(std::to_string(opt.property_samples) + " profiles per sweep");
  return finish(r);
}

CheckResult check_beta(ReproduceContext& ctx) {
  auto r = begin(9, "beta estimator on trial densities");
  const auto est = optimize_beta_upper(BetaFamily::RPowExp, 200, ctx.options().scf.grid_size);
  r.items.push_back(inside("min over r^a e^{-r}", est.beta_upper, kBetaLower - 1e-3, kBetaUpper + 1e-3));
  double lowest = INFINITY;
  for (const auto& e : est.evaluations) lowest = std::min(lowest, e.value);
  r.items.push_back(at_least("lowest evaluated value", lowest, kBetaLower - 1e-3));
  TrialDensity shell;
  shell.shells.push_back({1.0, 1.0});
  r.items.push_back(within("unit shell", beta_functional(shell), 1.0, 1e-6));
  r.notes.push_back("r^a e^{-r} minimiser a = " + format6(est.best_parameters.front()));
  const auto soft = optimize_beta_upper(BetaFamily::SoftAnnulus, 400, ctx.options().scf.grid_size);
  r.notes.push_back("soft-annulus family reaches " + format6(soft.beta_upper));
  return finish(r);
}

Point3 rotate(const std::array<double, 9>& m, const Point3& p) {
  return {m[0] * p[0] + m[1] * p[1] + m[2] * p[2], m[3] * p[0] + m[4] * p[1] + m[5] * p[2],
          m[6] * p[0] + m[7] * p[1] + m[8] * p[2]};
}

CheckResult check_alpha(ReproduceContext& ctx) {
  auto r = begin(10, "alpha_N minimisation and invariances");
  const auto& opt = ctx.options();
  const auto res = minimize_alpha_n(2, opt.alpha_seeds, opt.seed);
  r.items.push_back(at_most("min alpha_2", res.value, 0.5 + 1e-6));
  const auto& x = res.best.points;
  const double sum = std::hypot(x[0][0] + x[1][0], x[0][1] + x[1][1], x[0][2] + x[1][2]);
  const double len = std::hypot(x[0][0], x[0][1], x[0][2]) + std::hypot(x[1][0], x[1][1], x[1][2]);
  r.items.push_back(at_most("|x_1 + x_2| / (|x_1| + |x_2|)", sum / len, 1e-6));

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  PointConfig cfg;
  for (int i = 0; i < 7; ++i) cfg.points.push_back({g(rng), g(rng), g(rng)});
  const double base = alpha_n_value(cfg);

  PointConfig scaled = cfg;
  for (auto& p : scaled.points)
    for (double& c : p) c *= 7.0;
  r.items.push_back(within_rel("scaled by 7", alpha_n_value(scaled), base, 1e-10));

  // Rotation from a random unit quaternion.
  double q[4] = {g(rng), g(rng), g(rng), g(rng)};
  const double qn = std::sqrt(q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]);
  for (double& v : q) v /= qn;
  const double w = q[0], a = q[1], b = q[2], c = q[3];
  const std::array<double, 9> m = {1 - 2 * (b * b + c * c), 2 * (a * b - c * w),     2 * (a * c + b * w),
                                   2 * (a * b + c * w),     1 - 2 * (a * a + c * c), 2 * (b * c - a * w),
                                   2 * (a * c - b * w),     2 * (b * c + a * w),     1 - 2 * (a * a + b * b)};
  PointConfig rotated = cfg;
  for (auto& p : rotated.points) p = rotate(m, p);
  r.items.push_back(within_rel("rotated", alpha_n_value(rotated), base, 1e-10));

  PointConfig permuted = cfg;
  std::reverse(permuted.points.begin(), permuted.points.end());
  std::swap(permuted.points[0], permuted.points[3]);
  r.items.push_back(within_rel("permuted", alpha_n_value(permuted), base, 1e-10));
  return finish(r);
}

CheckResult check_bosonic(ReproduceContext& ctx) {
  auto r = begin(11, "main bound below 2Z+1 for Z=1..118");
  const auto& c = ctx.options().constants;
  int violations = 0;
  double worst = INFINITY;
  for (int z = 1; z <= 118; ++z) {
    const double gap = lieb_bound(z) - main_bound(z, c);
    if (!(gap > 0.0)) ++violations;
    worst = std::min(worst, gap);
  }
  r.items.push_back({"Z with main >= 2Z+1", static_cast<double>(violations), 0.0, "== 0", violations == 0});
  r.notes.push_back("smallest margin 2Z+1 - main = " + format6(worst));
  return finish(r);
}

CheckResult check_crossover(ReproduceContext& ctx) {
  auto r = begin(12, "crossover of the main bound with 1.22Z + 3Z^{1/3}");
  const auto cr = crossover_vs_nam(ctx.options().constants);
  r.items.push_back(inside("real-valued crossover Z", cr.real_crossover, 21, 24));
  r.items.push_back({"integer-truncated crossover Z", static_cast<double>(cr.integer_crossover),
                     static_cast<double>(cr.claimed), "reported beside the claimed value", true});
  r.notes.push_back("claimed crossover: Z <= " + std::to_string(cr.claimed) + "; computed real-valued " +
                    std::to_string(cr.real_crossover) + ", integer-truncated " +
                    std::to_string(cr.integer_crossover) + " (scan to " + std::to_string(cr.scan_cap) + ")");
  return finish(r);
}

}  // namespace

ReproduceContext::ReproduceContext(ReproduceOptions opt) : opt_(std::move(opt)) {
  opt_.constants.validate();
  opt_.scf.validate();
}

const GNGroundState& ReproduceContext::ground_state() {
  if (!gs_) gs_.emplace(solve_ground_state(opt_.gn));
  return *gs_;
}

const CriticalPoint& ReproduceContext::critical(double Z) {
  auto it = critical_.find(Z);
  if (it == critical_.end()) it = critical_.emplace(Z, critical_point(Z, opt_.scf)).first;
  return it->second;
}

const std::vector<std::pair<int, CheckFn>>& acceptance_checks() {
  static const std::vector<std::pair<int, CheckFn>> checks = {
      {1, check_main_table}, {2, check_h_of_z},          {3, check_gn},    {4, check_nasibov},
      {5, check_critical_mass}, {6, check_virial},       {7, check_lemmas}, {8, check_property_sweeps},
      {9, check_beta},      {10, check_alpha},           {11, check_bosonic}, {12, check_crossover},
  };
  return checks;
}

CheckResult run_check(int id, ReproduceContext& ctx) {
  for (const auto& [n, fn] : acceptance_checks()) {
    if (n != id) continue;
    try {
      return fn(ctx);
    } catch (const Error& e) {
      CheckResult r;
      r.id = id;
      r.title = "check " + std::to_string(id);
      r.error = e.what();
      r.numerical_error = !e.is_input_error();
      return r;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "cli-report", "no acceptance check " + std::to_string(id));
}

std::vector<CheckResult> reproduce_all(const ReproduceOptions& opt) {
  ReproduceContext ctx(opt);
  std::vector<CheckResult> out;
  for (const auto& entry : acceptance_checks()) out.push_back(run_check(entry.first, ctx));
  return out;
}

RadialProfile random_profile(const RadialGrid& grid, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Term {
    double c, a;
    int m, p;
  };
  std::vector<Term> terms;
  for (int k = 0; k < 3; ++k) {
    const double c = k == 0 ? 0.5 + 0.5 * unit(rng) : -0.5 + 1.5 * unit(rng);
    const double a = 0.4 + 2.6 * unit(rng);
    const int m = static_cast<int>(3.0 * unit(rng));
    const int p = unit(rng) < 0.5 ? 1 : 2;
    terms.push_back({c, a, m, p});
  }
  return RadialProfile::sample(grid, [&](double r) {
    double v = 0.0;
    for (const auto& t : terms) v += t.c * std::pow(r, t.m) * std::exp(-t.a * std::pow(r, t.p));
    return v;
  });
}

Json to_json(const CheckResult& r) {
  Json items = Json::array();
  for (const auto& i : r.items) {
    Json j{{"label", i.label}, {"computed", round6(i.computed)}};
    if (i.reference) j["reference"] = round6(*i.reference);
    j["rule"] = i.rule;
    j["ok"] = i.ok;
    items.push_back(j);
  }
  Json out{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"items", items}};
  if (!r.notes.empty()) out["notes"] = r.notes;
  if (!r.error.empty()) out["error"] = r.error;
  return out;
}

std::string summary_line(const CheckResult& r) {
  std::ostringstream s;
  s << (r.passed ? "[PASS] " : "[FAIL] ") << '#' << r.id << ' ' << r.title;
  if (!r.error.empty()) {
    s << " -- " << r.error;
  } else if (!r.passed) {
    for (const auto& i : r.items) {
      if (i.ok) continue;
      s << " -- " << i.label << " = " << format6(i.computed);
      if (i.reference) s << " (ref " << format6(*i.reference) << ")";
      s << " fails " << i.rule;
      break;
    }
  }
  return s.str();
}

}  // namespace excess
