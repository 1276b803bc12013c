#include "excess/gn.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "excess/errors.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "gn-constant";
constexpr double kLow = 1.1;
constexpr double kHigh = 50.0;
constexpr double kShootRadius = 60.0;
constexpr double kOdeTol = 1e-13;
constexpr double kSpliceAgreement = 1e-7;

using State = std::array<double, 2>;  // (u, u')
namespace odeint = boost::numeric::odeint;
using Stepper = odeint::runge_kutta_dopri5<State>;

void rhs(const State& y, State& dy, double r) {
  const double u = y[0];
  dy[0] = y[1];
  dy[1] = -2.0 * y[1] / r + u - std::copysign(std::pow(std::abs(u), 5.0 / 3.0), u);
}

// Series start u = u0 + (u0 - u0^{5/3}) r^2 / 6.
State series(double u0, double r) {
  const double c = (u0 - std::pow(u0, 5.0 / 3.0)) / 6.0;
  return {u0 + c * r * r, 2.0 * c * r};
}

enum class Outcome { Crosses, TurnsUp, Undecided };

// Integrates from r_start and reports which side of the ground state u0 is on.
// When `at` is non-empty the trajectory is sampled there (until the outcome).
Outcome shoot(double u0, double r_start, std::span<const double> at, std::vector<double>* samples) {
  auto stepper = odeint::make_dense_output(kOdeTol, kOdeTol, Stepper());
  stepper.initialize(series(u0, r_start), r_start, 1e-4);
  std::size_t next = 0;
  if (samples) samples->clear();
  while (stepper.current_time() < kShootRadius) {
    stepper.do_step(rhs);
    if (samples) {
      State y;
      while (next < at.size() && at[next] <= stepper.current_time()) {
        stepper.calc_state(at[next], y);
        samples->push_back(y[0]);
        ++next;
      }
    }
    const State& y = stepper.current_state();
    if (y[0] < 0.0) return Outcome::Crosses;
    if (y[1] > 0.0) return Outcome::TurnsUp;
  }
  return Outcome::Undecided;
}

double profile_power(const RadialProfile& p, double power) {
  const auto& g = p.grid();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g.node(i);
    f[i] = kFourPi * r * r * std::pow(std::abs(p[i]), power);
  }
  g.check_tail(f, "u^p");
  return g.integrate(f, 2.0);
}

}  // namespace

GNParams GNParams::make(double rho, int d) {
  return GNParams{rho, d, alpha_exponent(rho, d)};
}

double alpha_exponent(double rho, int d) {
  if (d < 1) throw Error(ErrorKind::OutOfRange, kModule, "dimension must be at least 1");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw Error(ErrorKind::OutOfRange, kModule, "rho must be positive");
  if (d >= 3 && !(rho < 4.0 / (d - 2)))
    throw Error(ErrorKind::OutOfRange, kModule, "rho must be below 4/(d-2)");
  return 0.5 * d * rho / (rho + 2.0);
}

double babenko_beckner(double p, int d) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorKind::OutOfRange, kModule, "p must lie in (1, inf)");
  if (d < 1) throw Error(ErrorKind::OutOfRange, kModule, "dimension must be at least 1");
  const double q = p / (p - 1.0);
  const double two_pi = 2.0 * kPi;
  return std::pow(std::pow(p / two_pi, 1.0 / p) / std::pow(q / two_pi, 1.0 / q), 0.5 * d);
}

double nasibov_kn(double rho, int d) {
  const double a = alpha_exponent(rho, d);
  const double chi = std::sqrt(std::pow(a, a) * std::pow(1.0 - a, 1.0 - a));
  const double sphere = 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
  const double b = std::beta(0.5 * d, d * (1.0 - a) / (2.0 * a));
  return std::pow(0.5 * sphere * b, a / d) / chi * babenko_beckner((rho + 2.0) / (rho + 1.0), d);
}

double nasibov_bound() { return std::pow(nasibov_kn(2.0 / 3.0, 3), 8.0 / 3.0); }

double gn_ratio(const RadialProfile& p) {
  const double M = mass(p);
  const double K = kinetic(p);
  if (!(M > 0.0) || !(K > 0.0)) throw Error(ErrorKind::ZeroProfile, kModule, "profile has zero mass or gradient");
  return profile_power(p, 8.0 / 3.0) / (std::sqrt(K) * std::pow(M, 5.0 / 6.0));
}

GNGroundState solve_ground_state(const GNConfig& cfg) {
  if (!(cfg.shoot_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, kModule, "shoot_tol must be positive");
  if (!(cfg.r_max > kShootRadius)) throw Error(ErrorKind::InvalidArgument, kModule, "r_max must exceed 60");
  const auto grid = RadialGrid::logarithmic(cfg.grid_size, cfg.r_max);
  const double r0 = grid.r_min();
  const std::span<const double> none;

  double lo = kLow, hi = kHigh;
  if (shoot(lo, r0, none, nullptr) != Outcome::TurnsUp || shoot(hi, r0, none, nullptr) != Outcome::Crosses)
    throw Error(ErrorKind::BracketFailed, kModule, "u(0) in [1.1, 50] does not bracket the ground state");

  int steps = 0;
  while (hi - lo > cfg.shoot_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const Outcome o = shoot(mid, r0, none, nullptr);
    (o == Outcome::Crosses ? hi : lo) = mid;
    ++steps;
  }

  // Both bracketing trajectories, sampled on the grid; they agree until the
  // exponentially growing mode separates them.
  const auto nodes = grid.nodes().subspan(1);
  std::vector<double> u_lo, u_hi;
  shoot(lo, r0, nodes, &u_lo);
  shoot(hi, r0, nodes, &u_hi);
  const std::size_t common = std::min(u_lo.size(), u_hi.size());
  std::size_t k = 0;
  while (k < common && std::abs(u_lo[k] - u_hi[k]) <= kSpliceAgreement * std::abs(u_lo[k]) && u_lo[k] > 0.0) ++k;
  if (k < 2) throw Error(ErrorKind::NotConverged, kModule, "shooting trajectories separate immediately");

  // Grid index of the splice node is k (sample k-1 of the subspan).
  const std::size_t m = k;
  const double rm = grid.node(m);
  const double um = 0.5 * (u_lo[k - 1] + u_hi[k - 1]);
  const double c = um * rm * std::exp(rm);

  std::vector<double> u(grid.size());
  u[0] = series(0.5 * (lo + hi), r0)[0];
  for (std::size_t i = 1; i <= m; ++i) u[i] = 0.5 * (u_lo[i - 1] + u_hi[i - 1]);
  for (std::size_t i = m + 1; i < u.size(); ++i) {
    const double r = grid.node(i);
    u[i] = c * std::exp(-r) / r;
  }

  GNGroundState out{RadialProfile(grid, std::move(u))};
  out.u0 = 0.5 * (lo + hi);
  out.splice_radius = rm;
  out.bisection_steps = steps;
  out.K = kinetic(out.u);
  out.M = mass(out.u);
  out.P = profile_power(out.u, 8.0 / 3.0);
  out.cgn_ratio = out.P / (std::sqrt(out.K) * std::pow(out.M, 5.0 / 6.0));
  out.cgn_pohozaev = 8.0 / 3.0 * std::pow(0.6, 5.0 / 6.0) * std::pow(out.K, -1.0 / 3.0);
  return out;
}

}  // namespace excess
