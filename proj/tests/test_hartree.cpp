#include <doctest.h>

#include <cmath>

#include "excess/bounds.hpp"
#include "excess/errors.hpp"
#include "excess/hartree.hpp"
#include "excess/radial_eigen.hpp"

using namespace excess;
using doctest::Approx;

namespace {

std::vector<double> coulomb(const RadialGrid& g, double Z) {
  std::vector<double> phi(g.size());
  for (std::size_t i = 0; i < phi.size(); ++i) phi[i] = Z / g.node(i);
  return phi;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("hydrogenic eigenvalues from the shooting solver") {
  for (double Z : {1.0, 3.0}) {
    const auto g = RadialGrid::logarithmic(4000, 60.0 / Z);
    const auto s = lowest_s_state(g, coulomb(g, Z), 1e-12, -Z * Z);
    CHECK(s.energy == Approx(-0.25 * Z * Z).epsilon(1e-8));
    // Unit-mass psi = (Z^3 / 8 pi)^{1/2} e^{-Z r/2}.
    const double c = std::sqrt(Z * Z * Z / (8.0 * kPi));
    for (std::size_t i = 0; i < g.size(); i += 101)
      if (g.node(i) < 20.0 / Z) CHECK(s.psi[i] == Approx(c * std::exp(-0.5 * Z * g.node(i))).epsilon(1e-4));
    CHECK(count_nodes(g, coulomb(g, Z), -0.25 * Z * Z * 1.001) == 0);
    CHECK(count_nodes(g, coulomb(g, Z), -0.25 * Z * Z * 0.999) == 1);
  }
}

TEST_CASE("vanishing self-interaction limit") {
  const auto sol = solve(1.0, 0.001);
  CHECK(sol.converged);
  CHECK(sol.mu == Approx(0.25).epsilon(0.01));
  // A = N Z <1/r> with <1/r> = Z/2 gives A/(N Z^2/3) -> 3/2.
  CHECK(lemma_checks(sol).a_ratio == Approx(1.5).epsilon(1e-2));
}

TEST_CASE("solution at Z=1, N=1") {
  const auto sol = solve(1.0, 1.0);
  const auto [v1, v2] = virial_residuals(sol);
  CHECK(std::abs(v1) <= 1e-4);
  // Constrained stationarity: K - A + 2R = -mu N.
  CHECK(v2 == Approx(-sol.mu * sol.breakdown.N / sol.breakdown.K).epsilon(1e-6));
  CHECK(equation_residual(sol) < 1e-5);
  CHECK(fixed_point_residual(sol) <= 1e-8);
  CHECK(sol.breakdown.N == Approx(1.0).epsilon(1e-10));

  const auto again = energy_breakdown(sol.psi, 1.0);
  CHECK(again.K == Approx(sol.breakdown.K).epsilon(1e-8));
  CHECK(again.A == Approx(sol.breakdown.A).epsilon(1e-8));
  CHECK(again.R == Approx(sol.breakdown.R).epsilon(1e-8));
  CHECK(sol.breakdown.E == sol.breakdown.K - sol.breakdown.A + sol.breakdown.R);

  const auto& g = sol.psi.grid();
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(sol.psi[i] >= 0.0);
  for (std::size_t i = 1; i < g.size(); ++i)
    if (g.node(i) > 10.0 * g.r_min()) REQUIRE(sol.psi[i] <= sol.psi[i - 1]);
  CHECK(cup_ratio(sol.psi) <= 1.0 + 1e-6);
  const auto& e = sol.breakdown;
  CHECK(e.N * e.N <= e.J * (e.A / sol.Z) * (1.0 + 1e-10));

  // phi is the nuclear minus the Newton potential.
  const auto Phi = hartree_potential(sol.psi);
  for (std::size_t i = 0; i < g.size(); i += 211) CHECK(sol.phi[i] == Approx(1.0 / g.node(i) - Phi[i]).epsilon(1e-10));
}

TEST_CASE("second virial residual has the sign of -mu") {
  const auto sol = solve(1.0, 0.2);
  const auto [v1, v2] = virial_residuals(sol);
  CHECK(std::abs(v1) <= 1e-4);
  CHECK(v2 < 0.0);
  CHECK(v2 == Approx(-sol.mu * 0.2 / sol.breakdown.K).epsilon(1e-6));
}

TEST_CASE("Z^3 scaling of the energy at fixed N/Z") {
  const auto a = solve(1.0, 0.5);
  const auto b = solve(2.0, 1.0);
  CHECK(b.breakdown.E == Approx(8.0 * a.breakdown.E).epsilon(1e-5));
  CHECK(b.mu == Approx(4.0 * a.mu).epsilon(1e-5));
  const auto la = lemma_checks(a), lb = lemma_checks(b);
  CHECK(lb.a_ratio == Approx(la.a_ratio).epsilon(1e-6));
  CHECK(lb.e_ratio == Approx(la.e_ratio).epsilon(1e-6));
  CHECK(lb.j_ratio == Approx(la.j_ratio).epsilon(1e-6));
}

TEST_CASE("mu(N) is nonincreasing") {
  double prev = INFINITY;
  for (double N : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const auto s = solve(1.0, N);
    CHECK(s.mu < prev);
    prev = s.mu;
  }
}

TEST_CASE("critical point") {
  const auto cp = critical_point(1.0);
  CHECK(cp.N_c > 1.0);
  CHECK(cp.N_c < 2.0);
  CHECK(cp.N_c == Approx(1.21).epsilon(0.02 / 1.21));
  const auto& sol = cp.solution;
  CHECK(std::abs(sol.mu) < 1e-6);
  const auto [v1, v2] = virial_residuals(sol);
  CHECK(std::abs(v1) <= 1e-4);
  CHECK(std::abs(v2) <= 1e-2);
  const auto& e = sol.breakdown;
  CHECK(std::abs(3.0 * e.K - e.A) / e.A <= 1e-2);

  const auto lem = lemma_checks(sol);
  CHECK(lem.all());

  const auto cert = kinetic_certificate(sol, kDPublished);
  CHECK(cert.holds);
  CHECK(cert.u <= cert.u0);
  CHECK(cert.u == Approx(std::sqrt(e.K) / (std::sqrt(e.N) / 3.0)).epsilon(1e-12));
  const auto zero_d = kinetic_certificate(sol, 0.0);
  CHECK(zero_d.rhs == Approx(e.N / 9.0).epsilon(1e-12));
  CHECK(zero_d.holds);

  // 3N/(4I) <= (Z/4)(1 + delta/2 + delta^2/8) with I the first moment.
  const auto du = delta_u0(e.N, 1.0);
  CHECK(3.0 * e.N / (4.0 * e.J) <= 0.25 * du.u0_upper);
}

TEST_CASE("error paths") {
  CHECK(kind_of([] { solve(1.0, 3.0); }) == ErrorKind::Unbound);
  CHECK(kind_of([] { solve(1.0, -1.0); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { solve(0.0, 1.0); }) == ErrorKind::InvalidArgument);
  SCFConfig bad;
  bad.mixing = 0.0;
  CHECK(kind_of([&] { solve(1.0, 1.0, bad); }) == ErrorKind::InvalidArgument);
  SCFConfig tight;
  tight.max_iter = 2;
  CHECK(kind_of([&] { solve(1.0, 1.0, tight); }) == ErrorKind::NotConverged);
  SCFConfig box;
  box.r_max = 12.0;
  CHECK(kind_of([&] { solve(1.0, 0.5, box); }) == ErrorKind::TailNotConverged);
}
