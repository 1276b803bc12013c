#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "excess/errors.hpp"
#include "excess/radial.hpp"
#include "excess/reproduce.hpp"

using namespace excess;
using doctest::Approx;

namespace {

const double pi = kPi;

RadialGrid wide() { return RadialGrid::logarithmic(4000, 300.0); }

// Trapezoid double sum for (1/2) \iint f(r) f(s) / max(r, s) dr ds, independent of
// the library's quadrature.
double self_energy_oracle(const RadialProfile& p) {
  const auto& g = p.grid();
  const std::size_t n = g.size();
  std::vector<double> f(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.node(i);
    f[i] = kFourPi * r * r * p[i] * p[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? g.node(i) - g.node(i - 1) : 0.0;
    const double right = i + 1 < n ? g.node(i + 1) - g.node(i) : 0.0;
    w[i] = 0.5 * (left + right);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sum += w[i] * w[j] * f[i] * f[j] / std::max(g.node(i), g.node(j));
  return 0.5 * sum;
}

}  // namespace

TEST_CASE("grid invariants") {
  const auto g = RadialGrid::logarithmic(4000, 60.0);
  CHECK(g.size() == 4000);
  for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g.node(i) > g.node(i - 1));
  CHECK(g.r_min() > 0.0);
  CHECK(g.r_min() <= 1e-5 * g.r_max());
  CHECK(g.r_max() == Approx(60.0).epsilon(1e-14));

  double sum = 0.0;
  for (double w : g.weights()) sum += w;
  CHECK(std::abs(sum / (g.r_max() - g.r_min()) - 1.0) <= 1e-10);

  CHECK_THROWS_AS(RadialGrid::logarithmic(99, 10.0), Error);
  CHECK_THROWS_AS(RadialGrid::logarithmic(1000, -1.0), Error);
  CHECK_THROWS_AS(RadialGrid::logarithmic(1000, 10.0, 1e-3), Error);
}

TEST_CASE("quadrature is exact for low powers in ln r and accurate for exponentials") {
  const auto g = wide();
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::exp(-g.node(i)) * g.node(i) * g.node(i);
  CHECK(g.integrate(f, 2.0) == Approx(2.0).epsilon(1e-10));
  const auto c = g.cumulative(f, 2.0);
  // \int_0^r s^2 e^{-s} ds = 2 - e^{-r}(r^2 + 2r + 2)
  for (std::size_t i = 0; i < g.size(); i += 97) {
    const double r = g.node(i);
    const double exact = 2.0 - std::exp(-r) * (r * r + 2 * r + 2);
    CHECK(std::abs(c[i] - exact) <= 1e-9 * exact + 1e-14);
  }
}

TEST_CASE("moments of e^{-r}") {
  const auto p = RadialProfile::exponential(wide());
  CHECK(moment(p, 0) == Approx(pi).epsilon(1e-9));
  CHECK(moment(p, -1) == Approx(pi).epsilon(1e-9));
  CHECK(moment(p, 1) == Approx(1.5 * pi).epsilon(1e-9));
  CHECK(moment(p, 2) == Approx(3.0 * pi).epsilon(1e-9));
  CHECK_THROWS_AS(moment(p, 3), Error);
}

TEST_CASE("kinetic integrals") {
  CHECK(kinetic(RadialProfile::exponential(wide())) == Approx(pi).epsilon(1e-8));
  const auto g = RadialGrid::logarithmic(4000, 80.0);
  CHECK(kinetic(RadialProfile::gaussian(g)) == Approx(1.5 * std::pow(pi, 1.5)).epsilon(1e-8));

  // Flat plateau with a smooth edge far out: the interior gradient vanishes.
  const auto plateau = RadialProfile::sample(g, [](double r) { return 1.0 / (1.0 + std::exp(4.0 * (r - 5.0))); });
  const auto d = g.derivative(plateau.values());
  for (std::size_t i = 0; g.node(i) < 1.0; ++i) CHECK(std::abs(d[i]) < 1e-6);
}

TEST_CASE("Newton potential") {
  const auto p = RadialProfile::exponential(wide());
  const auto phi = hartree_potential(p);
  const auto& g = p.grid();
  for (std::size_t i = 0; i < g.size(); i += 53) {
    const double r = g.node(i);
    if (r < 1e-2 || r > 30.0) continue;
    const double exact = pi * (1.0 / r - std::exp(-2.0 * r) * (1.0 / r + 1.0));
    CHECK(phi[i] == Approx(exact).epsilon(1e-8));
  }
  for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(phi[i] <= phi[i - 1] * (1.0 + 1e-14));
  CHECK(phi[g.size() - 1] * g.r_max() == Approx(mass(p)).epsilon(1e-6));

  // A narrow bump looks like a point mass from far away.
  const auto bump = RadialProfile::gaussian(RadialGrid::logarithmic(4000, 20.0), 400.0);
  const auto pb = hartree_potential(bump);
  const double m = mass(bump);
  for (std::size_t i = 0; i < pb.size(); i += 37)
    if (bump.grid().node(i) > 1.0) CHECK(pb[i] * bump.grid().node(i) == Approx(m).epsilon(1e-9));
}

TEST_CASE("Coulomb self-energy") {
  const auto e = RadialProfile::exponential(wide());
  CHECK(coulomb_self(e) == Approx(5.0 * pi * pi / 16.0).epsilon(1e-9));

  // Thin shell of mass 2 at radius 1: M^2/2 up to the shell thickness.
  const auto g = RadialGrid::logarithmic(4000, 20.0);
  const double sigma = 0.01;
  const auto shell = RadialProfile::sample(g, [&](double r) { return std::exp(-0.25 * std::pow((r - 1.0) / sigma, 2)) / r; });
  const auto shell2 = shell.scaled_values(std::sqrt(2.0 / mass(shell)));
  CHECK(mass(shell2) == Approx(2.0).epsilon(1e-12));
  CHECK(coulomb_self(shell2) == Approx(2.0).epsilon(2e-2));
  CHECK(coulomb_self(shell2) == Approx(self_energy_oracle(shell2)).epsilon(1e-4));

  // Mass-preserving dilation multiplies R by mu.
  const auto p = random_profile(RadialGrid::logarithmic(4000, 800.0), 7);
  CHECK(coulomb_self(p.rescaled(1.0, 3.0)) == Approx(3.0 * coulomb_self(p)).epsilon(1e-10));
}

TEST_CASE("self-energy agrees with an independent double sum") {
  const auto g = RadialGrid::logarithmic(1500, 800.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto p = random_profile(g, seed);
    CHECK(coulomb_self(p) == Approx(self_energy_oracle(p)).epsilon(1e-4));
  }
}

TEST_CASE("Coulomb uncertainty ratio") {
  CHECK(cup_ratio(RadialProfile::exponential(wide())) == Approx(1.0).epsilon(1e-9));
  CHECK(cup_ratio(RadialProfile::exponential(RadialGrid::logarithmic(4000, 100.0), 3.0, 0.4)) ==
        Approx(1.0).epsilon(1e-9));
  CHECK(cup_ratio(RadialProfile::gaussian(RadialGrid::logarithmic(4000, 80.0))) ==
        Approx(2.0 / (std::sqrt(pi) * std::sqrt(1.5))).epsilon(1e-9));
  const auto zero = RadialProfile(wide(), std::vector<double>(4000, 0.0));
  CHECK_THROWS_AS(cup_ratio(zero), Error);
  CHECK(mass(zero) == 0.0);
  CHECK(kinetic(zero) == 0.0);
}

TEST_CASE("Nam quadratic form and weighted kinetic energy") {
  const auto gg = RadialProfile::gaussian(RadialGrid::logarithmic(4000, 80.0));
  CHECK(nam_form_ratio(gg) == Approx(0.75).epsilon(1e-8));
  const auto e = RadialProfile::exponential(wide());
  CHECK(std::abs(nam_form_ratio(e)) < 1e-8);
  CHECK(weighted_kinetic(e) == Approx(pi / 2.0).epsilon(1e-8));
  CHECK(weighted_kinetic(gg) >= 0.0);
  // x^2 (-Delta) is dilation invariant as a ratio.
  const auto p = random_profile(RadialGrid::logarithmic(4000, 800.0), 11);
  CHECK(nam_form_ratio(p.rescaled(1.0, 2.5)) == Approx(nam_form_ratio(p)).epsilon(1e-10));
  CHECK_THROWS_AS(nam_form_ratio(RadialProfile(wide(), std::vector<double>(4000, 0.0))), Error);
}

TEST_CASE("minus Laplacian of e^{-r}") {
  const auto p = RadialProfile::exponential(wide());
  const auto lap = minus_laplacian(p);
  const auto& g = p.grid();
  for (std::size_t i = 10; i + 10 < g.size(); i += 41) {
    const double r = g.node(i);
    if (r > 40.0) break;
    CHECK(lap[i] == Approx((2.0 / r - 1.0) * std::exp(-r)).epsilon(1e-6).scale(1e-12));
  }
}

TEST_CASE("scaling covariance of the energy pieces") {
  const auto p = random_profile(RadialGrid::logarithmic(4000, 800.0), 3);
  const double lambda = 1.7, mu = 0.6, Z = 2.0;
  const auto a = energy_breakdown(p, Z);
  const auto b = energy_breakdown(p.rescaled(lambda, mu), Z);
  CHECK(b.K == Approx(lambda * mu * mu * a.K).epsilon(1e-8));
  CHECK(b.A == Approx(lambda * mu * a.A).epsilon(1e-8));
  CHECK(b.R == Approx(lambda * lambda * mu * a.R).epsilon(1e-8));
  CHECK(b.N == Approx(lambda * a.N).epsilon(1e-8));
  CHECK(a.E == a.K - a.A + a.R);
  CHECK(a.K >= 0.0);
  CHECK(a.R >= 0.0);
  CHECK(a.J >= 0.0);
}

TEST_CASE("inequality sweep over random profiles") {
  const auto g = RadialGrid::logarithmic(4000, 800.0);
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto p = random_profile(g, 1000 + s);
    CAPTURE(s);
    CHECK(cup_ratio(p) <= 1.0 + 1e-6);
    CHECK(nam_form_ratio(p) >= -0.75 - 1e-6);
    CHECK(weighted_kinetic(p) >= -1e-8 * (kinetic(p) + mass(p)));
    const double n = mass(p);
    CHECK(n * n <= moment(p, 1) * moment(p, -1) * (1.0 + 1e-10));
  }
}

TEST_CASE("tail criterion") {
  const auto short_grid = RadialGrid::logarithmic(4000, 20.0);
  const auto p = RadialProfile::exponential(short_grid);
  CHECK_THROWS_AS(moment(p, 0), Error);
  try {
    moment(p, 0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TailNotConverged);
  }
  CHECK_NOTHROW(moment(RadialProfile::exponential(wide()), 0));
}

TEST_CASE("profile text format round trip") {
  const auto p = random_profile(RadialGrid::logarithmic(500, 800.0), 5);
  std::stringstream s;
  write_profile(s, p);
  std::string header;
  std::getline(s, header);
  CHECK(header.rfind("# radial-profile v1 n=500 rmax=", 0) == 0);
  s.seekg(0);
  const auto q = read_profile(s);
  REQUIRE(q.size() == p.size());
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(q[i] == p[i]);
  CHECK(mass(q) == Approx(mass(p)).epsilon(1e-12));

  std::stringstream bad("# radial-profile v2 n=3 rmax=1\n");
  CHECK_THROWS_AS(read_profile(bad), Error);
}
