#include "excess/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace excess {

double round6(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(format6(v).c_str(), nullptr);
}

std::string format6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(round6(x));
  return a;
}

}  // namespace

Json to_json(const HartreeSolution& sol) {
  const auto& e = sol.breakdown;
  return Json{{"Z", round6(sol.Z)},
              {"N", round6(e.N)},
              {"mu", round6(sol.mu)},
              {"K", round6(e.K)},
              {"A", round6(e.A)},
              {"R", round6(e.R)},
              {"E", round6(e.E)},
              {"J", round6(e.J)},
              {"iterations", sol.iterations},
              {"converged", sol.converged},
              {"density_residual", round6(sol.density_residual)},
              {"r_max", round6(sol.psi.grid().r_max())},
              {"grid_size", sol.psi.grid().size()}};
}

Json to_json(const LemmaReport& rep) {
  return Json{{"A_over_NZ2_3", round6(rep.a_ratio)}, {"A_holds", rep.a_holds},
              {"E_over_minus_NZ2_9", round6(rep.e_ratio)}, {"E_holds", rep.e_holds},
              {"J_over_3N_Z", round6(rep.j_ratio)}, {"J_holds", rep.j_holds}};
}

Json to_json(const KineticCertificate& c) {
  return Json{{"K", round6(c.lhs)},     {"rhs", round6(c.rhs)},     {"sigma", round6(c.sigma)},
              {"u", round6(c.u)},       {"delta", round6(c.delta)}, {"u0", round6(c.u0)},
              {"holds", c.holds}};
}

Json to_json(const GNGroundState& gs) {
  return Json{{"u0", round6(gs.u0)},
              {"K", round6(gs.K)},
              {"M", round6(gs.M)},
              {"P", round6(gs.P)},
              {"cgn_ratio", round6(gs.cgn_ratio)},
              {"cgn_pohozaev", round6(gs.cgn_pohozaev)},
              {"nasibov_bound", round6(nasibov_bound())},
              {"published_cgn", kGNReference},
              {"splice_radius", round6(gs.splice_radius)},
              {"bisection_steps", gs.bisection_steps}};
}

Json to_json(const BetaEstimate& est) {
  Json params = Json::object();
  for (std::size_t k = 0; k < est.best_parameters.size(); ++k)
    params[est.parameter_names[k]] = round6(est.best_parameters[k]);
  double lowest = INFINITY;
  for (const auto& e : est.evaluations) lowest = std::min(lowest, e.value);
  return Json{{"family", to_string(est.family)},
              {"best_value", round6(est.beta_upper)},
              {"parameters", params},
              {"evaluations", est.evaluations.size()},
              {"iterations", est.iterations},
              {"converged", est.converged},
              {"lowest_evaluated", round6(lowest)},
              {"reference_interval", numbers({est.reference_lower, est.reference_upper})}};
}

Json to_json(const AlphaResult& res) {
  Json pts = Json::array();
  for (const auto& p : res.best.points) pts.push_back(numbers({p[0], p[1], p[2]}));
  return Json{{"N", res.N},
              {"value", round6(res.value)},
              {"seeds", res.seeds},
              {"best_seed", res.best_seed},
              {"configuration", pts},
              {"beta_lower", kBetaLower},
              {"reference_interval", numbers({kBetaLower, kBetaUpper})}};
}

Json to_json(const BoundReport& r) {
  return Json{{"Z", round6(r.Z)},
              {"lieb", round6(r.lieb)},
              {"nam", round6(r.nam)},
              {"hartree", round6(r.hartree)},
              {"main", round6(r.main)},
              {"a", round6(r.a)},
              {"hZ", round6(r.h_of_z)},
              {"best_real", r.best_real},
              {"best_integer", r.best_integer},
              {"max_integer_N", Json{{"lieb", r.lieb_cap}, {"nam", r.nam_cap}, {"hartree", r.hartree_cap}, {"main", r.main_cap}}}};
}

Json to_json(const CrossoverReport& r) {
  return Json{{"integer_crossover", r.integer_crossover},
              {"real_crossover", r.real_crossover},
              {"claimed", r.claimed},
              {"scan_cap", r.scan_cap}};
}

Json to_json(const Constants& c) {
  return Json{{"c_lo", round6(c.c_lo)},
              {"c_gn", round6(c.c_gn)},
              {"d_const", round6(c.d_const)},
              {"beta_lower", round6(c.beta_lower)},
              {"beta_upper", round6(c.beta_upper)}};
}

std::string bounds_csv(const std::vector<BoundReport>& rows) {
  std::ostringstream out;
  out << "Z,lieb,nam,hartree,main,a,hZ,best_real,best_integer\n";
  for (const auto& r : rows) {
    out << format6(r.Z) << ',' << format6(r.lieb) << ',' << format6(r.nam) << ',' << format6(r.hartree) << ','
        << format6(r.main) << ',' << format6(r.a) << ',' << format6(r.h_of_z) << ',' << r.best_real << ','
        << r.best_integer << '\n';
  }
  return out.str();
}

Json bounds_json(const std::vector<BoundReport>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) a.push_back(to_json(r));
  return a;
}

}  // namespace excess
