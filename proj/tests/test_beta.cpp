#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "excess/beta.hpp"
#include "excess/errors.hpp"

using namespace excess;
using doctest::Approx;

namespace {

// Direct trapezoid double sum of (1/2) \iint f f (r^2 + s^2)/max(r, s) over
// (\int f)(\int r f), plus shell terms, with f = 4 pi r^2 rho.
double beta_oracle(const std::function<double(double)>& f, double r_max, std::size_t n,
                   const std::vector<Shell>& shells = {}) {
  const double h = std::log(r_max / (1e-7 * r_max)) / static_cast<double>(n - 1);
  std::vector<double> r(n), w(n), fv(n);
  for (std::size_t i = 0; i < n; ++i) {
    r[i] = 1e-7 * r_max * std::exp(h * static_cast<double>(i));
    fv[i] = f(r[i]);
  }
  for (std::size_t i = 0; i < n; ++i) w[i] = r[i] * h * ((i == 0 || i + 1 == n) ? 0.5 : 1.0);
  auto k = [](double a, double b) { return (a * a + b * b) / std::max(a, b); };
  double num = 0.0, m = 0.0, first = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    m += w[i] * fv[i];
    first += w[i] * fv[i] * r[i];
    for (std::size_t j = 0; j < n; ++j) num += 0.5 * w[i] * w[j] * fv[i] * fv[j] * k(r[i], r[j]);
    for (const auto& s : shells) num += s.mass * w[i] * fv[i] * k(s.radius, r[i]);
  }
  for (const auto& a : shells) {
    m += a.mass;
    first += a.mass * a.radius;
    for (const auto& b : shells) num += 0.5 * a.mass * b.mass * k(a.radius, b.radius);
  }
  return num / (m * first);
}

TrialDensity continuum(double r_max, const std::function<double(double)>& rho) {
  return {RadialProfile::sample(RadialGrid::logarithmic(4000, r_max), rho), {}, {}};
}

// alpha_N quotient evaluated directly.
double alpha_oracle(const std::vector<Point3>& x) {
  double S = 0.0, T = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    T += std::hypot(x[i][0], x[i][1], x[i][2]);
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double ai = x[i][0] * x[i][0] + x[i][1] * x[i][1] + x[i][2] * x[i][2];
      const double aj = x[j][0] * x[j][0] + x[j][1] * x[j][1] + x[j][2] * x[j][2];
      S += (ai + aj) / std::hypot(x[i][0] - x[j][0], x[i][1] - x[j][1], x[i][2] - x[j][2]);
    }
  }
  return S / (static_cast<double>(x.size() - 1) * T);
}

}  // namespace

TEST_CASE("single shell gives one at any radius") {
  for (double t : {0.1, 1.0, 7.5}) CHECK(beta_functional({std::nullopt, {{t, 1.0}}, {}}) == Approx(1.0).epsilon(1e-14));
  CHECK(beta_functional({std::nullopt, {{2.0, 5.0}}, {}}) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exponential density against the double-sum oracle") {
  const auto rho = [](double r) { return std::exp(-2.0 * r); };
  const double lib = beta_functional(continuum(400.0, rho));
  const double ref = beta_oracle([&](double r) { return kFourPi * r * r * rho(r); }, 400.0, 2500);
  CHECK(lib == Approx(ref).epsilon(2e-5));
  // Frozen from the oracle at n = 2500.
  CHECK(lib == Approx(0.875).epsilon(1e-6));
  // Dilation invariance.
  CHECK(beta_functional(continuum(1600.0, [](double r) { return std::exp(-0.5 * r); })) == Approx(lib).epsilon(1e-9));
}

TEST_CASE("shell plus continuum against the oracle") {
  const auto rho = [](double r) { return r * std::exp(-r); };
  const std::vector<Shell> shells{{2.0, 3.0}, {0.5, 1.0}};
  auto t = continuum(800.0, rho);
  t.shells = shells;
  const double ref = beta_oracle([&](double r) { return kFourPi * r * r * rho(r); }, 800.0, 2500, shells);
  CHECK(beta_functional(t) == Approx(ref).epsilon(2e-5));
}

TEST_CASE("beta functional errors") {
  CHECK_THROWS_AS(beta_functional({}), Error);
  CHECK_THROWS_AS(beta_functional({std::nullopt, {{-1.0, 1.0}}, {}}), Error);
  CHECK_THROWS_AS(beta_functional(continuum(10.0, [](double r) { return std::exp(-r); })), Error);
  CHECK_THROWS_AS(beta_functional(continuum(400.0, [](double r) { return -std::exp(-r); })), Error);
  try {
    beta_functional({});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroDensity);
  }
}

TEST_CASE("families") {
  CHECK(parse_beta_family("rpow-exp") == BetaFamily::RPowExp);
  CHECK(parse_beta_family("shell") == BetaFamily::Shell);
  CHECK(parse_beta_family("soft-annulus") == BetaFamily::SoftAnnulus);
  CHECK_THROWS_AS(parse_beta_family("cube"), Error);
  CHECK(to_string(BetaFamily::SoftAnnulus) == "soft-annulus");
  CHECK_THROWS_AS(family_member(BetaFamily::RPowExp, {1.0, 2.0}), Error);
  CHECK(family_member(BetaFamily::RPowExp, {99.0}).parameters[0] == 40.0);

  const auto shell = optimize_beta_upper(BetaFamily::Shell, 50);
  CHECK(shell.beta_upper == Approx(1.0).epsilon(1e-12));

  const auto est = optimize_beta_upper(BetaFamily::RPowExp, 200);
  CHECK(est.parameter_names == std::vector<std::string>{"a"});
  CHECK(est.beta_upper >= kBetaLower);
  // The family minimum sits at the a = 0 end.
  CHECK(est.beta_upper == Approx(0.875).epsilon(1e-6));
  CHECK(est.best_parameters[0] < 1e-3);
  CHECK(!est.evaluations.empty());
  for (const auto& ev : est.evaluations) CHECK(ev.value >= kBetaLower - 1e-3);
  const auto again = optimize_beta_upper(BetaFamily::RPowExp, 200);
  CHECK(again.beta_upper == est.beta_upper);
  CHECK(beta_functional(family_member(BetaFamily::RPowExp, est.best_parameters)) == Approx(est.beta_upper).epsilon(1e-12));

  const auto ann = optimize_beta_upper(BetaFamily::SoftAnnulus, 100);
  CHECK(ann.best_parameters.size() == 3);
  for (const auto& ev : ann.evaluations) CHECK(ev.value >= kBetaLower - 1e-3);
  CHECK(ann.beta_upper < est.beta_upper);

  CHECK_THROWS_AS(optimize_beta_upper(BetaFamily::RPowExp, 0), Error);
}

TEST_CASE("alpha_N examples") {
  CHECK(alpha_n_value({{{1, 0, 0}, {-1, 0, 0}}}) == Approx(0.5).epsilon(1e-15));
  const double s = std::sqrt(3.0) / 2.0;
  const std::vector<Point3> tri{{1, 0, 0}, {-0.5, s, 0}, {-0.5, -s, 0}};
  CHECK(alpha_n_value({tri}) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(alpha_n_value({tri}) == Approx(alpha_oracle(tri)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<Point3> x(7);
  for (auto& p : x) p = {nd(rng), nd(rng), nd(rng)};
  const double v = alpha_n_value({x});
  CHECK(v == Approx(alpha_oracle(x)).epsilon(1e-13));

  auto scaled = x;
  for (auto& p : scaled)
    for (auto& c : p) c *= 4.2;
  CHECK(alpha_n_value({scaled}) == Approx(v).epsilon(1e-13));

  auto rotated = x;
  const double c = std::cos(0.7), sn = std::sin(0.7);
  for (auto& p : rotated) p = {c * p[0] - sn * p[1], sn * p[0] + c * p[1], p[2]};
  CHECK(alpha_n_value({rotated}) == Approx(v).epsilon(1e-13));

  auto permuted = x;
  std::reverse(permuted.begin(), permuted.end());
  CHECK(alpha_n_value({permuted}) == Approx(v).epsilon(1e-13));

  CHECK_THROWS_AS(alpha_n_value({{{1, 0, 0}, {1, 0, 0}}}), Error);
  CHECK_THROWS_AS(alpha_n_value({{{1, 0, 0}}}), Error);
}

TEST_CASE("alpha_N minimisation") {
  const auto two = minimize_alpha_n(2, 16);
  CHECK(two.value == Approx(0.5).epsilon(1e-8));
  double T = 0.0;
  for (const auto& p : two.best.points) T += std::hypot(p[0], p[1], p[2]);
  CHECK(T == Approx(2.0).epsilon(1e-12));

  // Brute-force scan over planar configurations: two points at unit radius,
  // angle +-theta, a third at (-t, 0, 0).
  double brute = INFINITY;
  for (int i = 1; i < 400; ++i)
    for (int j = 0; j <= 400; ++j) {
      const double th = kPi * i / 400.0, t = 2.0 * j / 400.0;
      brute = std::min(brute, alpha_oracle({{std::cos(th), std::sin(th), 0}, {std::cos(th), -std::sin(th), 0}, {-t, 0, 0}}));
    }
  const auto three = minimize_alpha_n(3, 32);
  CHECK(three.value <= brute + 1e-9);
  CHECK(three.value >= brute - 1e-4);
  CHECK(alpha_n_value(three.best) == Approx(three.value).epsilon(1e-12));

  const auto a = minimize_alpha_n(5, 8, 99);
  const auto b = minimize_alpha_n(5, 8, 99);
  CHECK(a.value == b.value);
  CHECK(a.best_seed == b.best_seed);
  CHECK(a.seed_values.size() == 8);
  CHECK(a.value == *std::min_element(a.seed_values.begin(), a.seed_values.end()));

  CHECK_THROWS_AS(minimize_alpha_n(1), Error);
}

TEST_CASE("alpha_N for fifty points") {
  const auto r = minimize_alpha_n(50, 4);
  MESSAGE("alpha_50 = " << r.value);
  CHECK(r.value > 0.5);
  CHECK(r.value < 1.0);
}
