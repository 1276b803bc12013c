#include "excess/hartree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "excess/bounds.hpp"
#include "excess/errors.hpp"
#include "excess/radial_eigen.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "hartree-scf";
constexpr int kMaxDoublings = 12;
constexpr double kDefaultRadius = 60.0;    // r_max = 60 / Z for ordinary solves
constexpr double kCriticalRadius = 3840.0;  // r_max = 3840 / Z near mu = 0
constexpr double kMinMixing = 1.0 / 64.0;

[[noreturn]] void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, kModule, message);
}

struct ScfRun {
  std::vector<double> psi;  // mass N
  std::vector<double> phi;
  double mu = 0.0;
  int iterations = 0;
  bool converged = false;
  double residual = std::numeric_limits<double>::infinity();
};

double spectrum_floor(double Z) { return -0.25 * Z * Z * 1.01 - 1e-12; }

std::vector<double> attractive_potential(const RadialGrid& grid, double Z, std::span<const double> psi) {
  const RadialProfile p(grid, std::vector<double>(psi.begin(), psi.end()));
  auto phi = hartree_potential_values(p);
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = Z / grid.node(i) - phi[i];
  return phi;
}

double l1_density_distance(const RadialGrid& grid, std::span<const double> a, std::span<const double> b) {
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = grid.node(i);
    f[i] = kFourPi * r * r * std::abs(a[i] - b[i]);
  }
  return grid.integrate(f, 2.0);
}

std::vector<double> hydrogenic_start(const RadialGrid& grid, double Z, double N) {
  // psi ~ e^{-Z r / 2}, normalised to mass N.
  std::vector<double> psi(grid.size());
  for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = std::exp(-0.5 * Z * grid.node(i));
  std::vector<double> dens(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const double r = grid.node(i);
    dens[i] = kFourPi * r * r * psi[i] * psi[i];
  }
  const double f = std::sqrt(N / grid.integrate(dens, 2.0));
  for (double& x : psi) x *= f;
  return psi;
}

// Linear interpolation in ln r of a profile onto another grid; zero outside.
std::vector<double> transfer(const RadialGrid& from, std::span<const double> values, const RadialGrid& to,
                             double N) {
  std::vector<double> out(to.size(), 0.0);
  const double x0 = std::log(from.r_min());
  const double h = from.log_step();
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = to.node(i);
    if (r <= from.r_min()) {
      out[i] = values.front();
      continue;
    }
    if (r >= from.r_max()) break;
    const double t = (std::log(r) - x0) / h;
    const auto k = std::min(static_cast<std::size_t>(t), from.size() - 2);
    const double s = t - static_cast<double>(k);
    out[i] = (1.0 - s) * values[k] + s * values[k + 1];
  }
  std::vector<double> dens(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = to.node(i);
    dens[i] = kFourPi * r * r * out[i] * out[i];
  }
  const double f = std::sqrt(N / to.integrate(dens, 2.0));
  for (double& x : out) x *= f;
  return out;
}

ScfRun run_scf(double Z, double N, const RadialGrid& grid, const SCFConfig& cfg, std::vector<double> psi0) {
  const std::size_t n = grid.size();
  std::vector<double> rho(n), rho_new(n);
  for (std::size_t i = 0; i < n; ++i) rho[i] = psi0[i] * psi0[i];

  ScfRun run;
  double mixing = cfg.mixing;
  double previous = std::numeric_limits<double>::infinity();
  int rising = 0;
  std::vector<double> psi(n);

  for (int it = 1; it <= cfg.max_iter; ++it) {
    for (std::size_t i = 0; i < n; ++i) psi[i] = std::sqrt(rho[i]);
    const auto phi = attractive_potential(grid, Z, psi);
    const auto eig = lowest_s_state(grid, phi, cfg.eig_tol, spectrum_floor(Z));
    for (std::size_t i = 0; i < n; ++i) rho_new[i] = N * eig.psi[i] * eig.psi[i];

    run.iterations = it;
    run.mu = -eig.energy;
    run.residual = l1_density_distance(grid, rho_new, rho) / N;
    if (run.residual <= cfg.tol_density) {
      run.converged = true;
      break;
    }
    // Halve the mixing when the residual grows twice in a row.
    if (run.residual > previous) {
      if (++rising >= 2) {
        mixing = std::max(kMinMixing, 0.5 * mixing);
        rising = 0;
      }
    } else {
      rising = 0;
    }
    previous = run.residual;
    for (std::size_t i = 0; i < n; ++i) rho[i] = (1.0 - mixing) * rho[i] + mixing * rho_new[i];
  }

  run.psi.resize(n);
  const auto& final_rho = run.converged ? rho_new : rho;
  for (std::size_t i = 0; i < n; ++i) run.psi[i] = std::sqrt(final_rho[i]);
  run.phi = attractive_potential(grid, Z, run.psi);
  if (run.converged) run.mu = -lowest_s_state(grid, run.phi, cfg.eig_tol, spectrum_floor(Z)).energy;
  return run;
}

HartreeSolution make_solution(double Z, const RadialGrid& grid, const ScfRun& run) {
  RadialProfile psi(grid, run.psi);
  RadialProfile phi(grid, run.phi);
  const auto breakdown = energy_breakdown(psi, Z);  // throws TailNotConverged
  return HartreeSolution{std::move(psi), std::move(phi), run.mu, breakdown,   Z,
                         run.iterations, run.converged,  run.residual};
}

std::string describe(double Z, double N) {
  std::ostringstream s;
  s << "Z=" << Z << " N=" << N;
  return s.str();
}

}  // namespace

void SCFConfig::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::InvalidArgument, kModule, m); };
  if (!(mixing > 0.0 && mixing <= 1.0)) bad("mixing must lie in (0, 1]");
  if (!(tol_density > 0.0)) bad("tol_density must be positive");
  if (!(eig_tol > 0.0)) bad("eig_tol must be positive");
  if (max_iter < 1) bad("max_iter must be at least 1");
  if (grid_size < RadialGrid::kMinSize) bad("grid_size must be at least 100");
  if (r_max < 0.0) bad("r_max must be nonnegative");
}

HartreeSolution solve(double Z, double N, const SCFConfig& cfg) {
  cfg.validate();
  if (!(Z > 0.0)) fail(ErrorKind::InvalidArgument, "Z must be positive");
  if (!(N > 0.0)) fail(ErrorKind::InvalidArgument, "N must be positive");

  const bool adaptive = cfg.r_max == 0.0;
  double r_max = adaptive ? kDefaultRadius / Z : cfg.r_max;
  std::optional<RadialGrid> previous_grid;
  std::vector<double> previous_psi;

  for (int attempt = 0;; ++attempt) {
    const auto grid = RadialGrid::logarithmic(cfg.grid_size, r_max);
    auto start = previous_grid ? transfer(*previous_grid, previous_psi, grid, N) : hydrogenic_start(grid, Z, N);
    const auto run = run_scf(Z, N, grid, cfg, std::move(start));
    const bool may_grow = adaptive && attempt < kMaxDoublings;

    if (!run.converged) {
      std::ostringstream m;
      m << describe(Z, N) << ": density residual " << run.residual << " above tol_density "
        << cfg.tol_density << " after " << run.iterations << " iterations";
      if (run.mu <= 0.0) fail(ErrorKind::Unbound, m.str() + " with nonnegative eigenvalue");
      fail(ErrorKind::NotConverged, m.str());
    }
    try {
      auto sol = make_solution(Z, grid, run);
      if (sol.mu <= 0.0) {
        std::ostringstream m;
        m << describe(Z, N) << ": lowest eigenvalue " << -sol.mu << " is not negative";
        fail(ErrorKind::Unbound, m.str());
      }
      return sol;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TailNotConverged || !may_grow) {
        if (e.kind() == ErrorKind::TailNotConverged && run.mu <= 0.0)
          fail(ErrorKind::Unbound, describe(Z, N) + ": density escapes to the box edge");
        throw;
      }
    }
    previous_grid = grid;
    previous_psi = run.psi;
    r_max *= 2.0;
  }
}

CriticalPoint critical_point(double Z, const SCFConfig& cfg) {
  cfg.validate();
  if (!(Z > 0.0)) fail(ErrorKind::InvalidArgument, "Z must be positive");

  const bool adaptive = cfg.r_max == 0.0;
  double r_max = adaptive ? kCriticalRadius / Z : cfg.r_max;

  for (int attempt = 0;; ++attempt) {
    const auto grid = RadialGrid::logarithmic(cfg.grid_size, r_max);

    // Warm start each evaluation from the closest mass solved so far.
    std::vector<std::pair<double, std::vector<double>>> solved;
    auto mu_of = [&](double N) -> ScfRun {
      std::vector<double> start;
      if (solved.empty()) {
        start = hydrogenic_start(grid, Z, N);
      } else {
        const auto best = std::min_element(solved.begin(), solved.end(), [&](const auto& a, const auto& b) {
          return std::abs(a.first - N) < std::abs(b.first - N);
        });
        start = best->second;
        const double f = std::sqrt(N / best->first);
        for (double& x : start) x *= f;
      }
      auto run = run_scf(Z, N, grid, cfg, std::move(start));
      if (!run.converged) {
        std::ostringstream m;
        m << describe(Z, N) << ": density residual " << run.residual << " above tol_density "
          << cfg.tol_density << " during critical-mass search";
        fail(ErrorKind::NotConverged, m.str());
      }
      solved.emplace_back(N, run.psi);
      return run;
    };

    // March up from N = Z until mu changes sign, then Illinois false position.
    // Far above N_c the box states slosh and the SCF stalls, so the bracket is
    // grown in small steps and a stalled evaluation shrinks the step.
    double a = Z;
    ScfRun ra = mu_of(a);
    if (!(ra.mu > 0.0)) fail(ErrorKind::BracketFailed, "mu(Z) is not positive for " + describe(Z, Z));
    double step = 0.05 * Z;
    double b = 0.0;
    ScfRun rb;
    for (;;) {
      if (step < 1e-6 * Z || a + step > 2.0 * Z)
        fail(ErrorKind::BracketFailed, "mu(N) does not change sign on [Z, 2Z] for Z=" + std::to_string(Z));
      try {
        ScfRun r = mu_of(a + step);
        if (r.mu < 0.0) {
          b = a + step;
          rb = std::move(r);
          break;
        }
        a += step;
        ra = std::move(r);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotConverged) throw;
        step *= 0.5;
      }
    }
    double fa = ra.mu, fb = rb.mu;
    int side = 0;
    ScfRun best = std::abs(fa) < std::abs(fb) ? ra : rb;
    double best_n = std::abs(fa) < std::abs(fb) ? a : b;
    for (int k = 0; k < 100; ++k) {
      const double c = (a * fb - b * fa) / (fb - fa);
      ScfRun rc = mu_of(c);
      const double fc = rc.mu;
      if (std::abs(fc) < std::abs(best.mu)) {
        best = rc;
        best_n = c;
      }
      if (std::abs(fc) < 1e-12 * Z * Z || std::abs(b - a) < 1e-10 * Z) break;
      if ((fc > 0.0) == (fa > 0.0)) {
        a = c;
        fa = fc;
        if (side == -1) fb *= 0.5;
        side = -1;
      } else {
        b = c;
        fb = fc;
        if (side == 1) fa *= 0.5;
        side = 1;
      }
    }

    try {
      return CriticalPoint{best_n, make_solution(Z, grid, best)};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TailNotConverged || !adaptive || attempt >= kMaxDoublings) throw;
    }
    r_max *= 2.0;
  }
}

double critical_mass(double Z, const SCFConfig& cfg) { return critical_point(Z, cfg).N_c; }

std::pair<double, double> virial_residuals(const HartreeSolution& sol) {
  const auto& e = sol.breakdown;
  return {(2.0 * e.K - e.A + e.R) / e.K, (e.K - e.A + 2.0 * e.R) / e.K};
}

LemmaReport lemma_checks(const HartreeSolution& sol) {
  constexpr double slack = 1e-8;
  const auto& e = sol.breakdown;
  const double Z = sol.Z;
  LemmaReport rep;
  rep.a_ratio = e.A / (e.N * Z * Z / 3.0);
  rep.e_ratio = e.E / (-e.N * Z * Z / 9.0);
  rep.j_ratio = e.J / (3.0 * e.N / Z);
  rep.a_holds = rep.a_ratio <= 1.0 + slack;
  rep.e_holds = rep.e_ratio <= 1.0 + slack;
  rep.j_holds = rep.j_ratio >= 1.0 - slack;
  return rep;
}

KineticCertificate kinetic_certificate(const HartreeSolution& sol, double D) {
  if (!(D >= 0.0)) fail(ErrorKind::InvalidArgument, "D must be nonnegative");
  const auto& e = sol.breakdown;
  const double Z = sol.Z;
  KineticCertificate c;
  c.lhs = e.K;
  c.rhs = e.N * Z * Z / 9.0 + D * std::sqrt(e.K) * std::pow(e.N, 5.0 / 6.0);
  c.sigma = Z * std::sqrt(e.N) / 3.0;
  c.u = std::sqrt(e.K) / c.sigma;
  Constants constants;
  constants.d_const = D;
  const auto du = delta_u0(e.N, Z, constants);
  c.delta = du.delta;
  c.u0 = du.u0;
  c.holds = c.lhs <= c.rhs * (1.0 + 1e-8);
  return c;
}

double equation_residual(const HartreeSolution& sol) {
  const auto& grid = sol.psi.grid();
  const auto lap = minus_laplacian(sol.psi);
  std::vector<double> f(grid.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = grid.node(i);
    const double res = lap[i] - (sol.phi[i] - sol.mu) * sol.psi[i];
    f[i] = kFourPi * r * r * res * res;
  }
  return std::sqrt(grid.integrate(f, 2.0));
}

double fixed_point_residual(const HartreeSolution& sol, const SCFConfig& cfg) {
  const auto& grid = sol.psi.grid();
  const auto eig = lowest_s_state(grid, sol.phi.values(), cfg.eig_tol, spectrum_floor(sol.Z));
  const double N = sol.breakdown.N;
  std::vector<double> rho(grid.size()), rho_e(grid.size());
  for (std::size_t i = 0; i < rho.size(); ++i) {
    rho[i] = sol.psi[i] * sol.psi[i];
    rho_e[i] = N * eig.psi[i] * eig.psi[i];
  }
  return l1_density_distance(grid, rho, rho_e) / N;
}

}  // namespace excess
