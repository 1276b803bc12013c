#include "excess/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "excess/errors.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "bounds-engine";

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, kModule, std::string(what) + " must be positive");
}

}  // namespace

Constants Constants::with_gn(double cgn) const {
  Constants c = *this;
  c.c_gn = cgn;
  c.d_const = c.c_lo * cgn;
  return c;
}

void Constants::validate() const {
  auto bad = [](const std::string& m) { throw Error(ErrorKind::OutOfRange, kModule, m); };
  if (!(c_lo >= 1.0 && c_lo <= 2.0)) bad("c_lo must lie in [1, 2]");
  if (!(c_gn > 0.0 && c_gn <= 1.0)) bad("c_gn must lie in (0, 1]");
  if (!(d_const >= 0.0 && d_const <= 2.0)) bad("d_const must lie in [0, 2]");
  if (!(beta_lower > 0.0 && beta_lower <= 1.0)) bad("beta_lower must lie in (0, 1]");
  if (!(beta_lower <= beta_upper)) bad("beta_lower must not exceed beta_upper");
}

double lieb_bound(double Z) { return 2.0 * Z + 1.0; }

double nam_bound(double Z) { return 1.22 * Z + 3.0 * std::cbrt(Z); }

double hartree_bound(double Z, const Constants& c) { return hartree_bound_with_beta(Z, c.beta_lower); }

double hartree_bound_with_beta(double Z, double beta) {
  require_positive(beta, "beta");
  return 5.0 * Z / (4.0 * beta);
}

double h_of_z(double Z, const Constants& c) {
  require_positive(Z, "Z");
  const double D = c.d_const, b = c.beta_lower;
  return 3.0 * D / (8.0 * b) * std::cbrt(2.0 + 1.0 / Z) +
         9.0 * D * D / (32.0 * b) * std::pow(2.0 / Z + 1.0 / (Z * Z), 2.0 / 3.0);
}

double a_coeff(double N, double Z, const Constants& c) {
  require_positive(N, "N");
  require_positive(Z, "Z");
  const double D = c.d_const, b = c.beta_lower;
  return 3.0 * D / (8.0 * b) * std::cbrt(N / Z) + 9.0 * D * D / (32.0 * b) * std::pow(N / (Z * Z), 2.0 / 3.0);
}

DeltaU0 delta_u0(double N, double Z, const Constants& c) {
  require_positive(N, "N");
  require_positive(Z, "Z");
  DeltaU0 r;
  r.delta = 3.0 * c.d_const * std::cbrt(N) / Z;
  r.u0 = 0.5 * (r.delta + std::sqrt(r.delta * r.delta + 4.0));
  r.u0_upper = 1.0 + r.delta / 2.0 + r.delta * r.delta / 8.0;
  return r;
}

double main_bound(double Z, const Constants& c) {
  require_positive(Z, "Z");
  return kHartreeCoefficient * Z + 1.0 + std::cbrt(Z) * h_of_z(Z, c);
}

MainBoundDetail main_bound_detail(double Z, const Constants& c) {
  MainBoundDetail d;
  d.value = main_bound(Z, c);
  d.frozen_a_applies = Z >= 6.0;
  d.frozen_a_value = kHartreeCoefficient * Z + 1.0 + kFrozenA * std::cbrt(Z);
  d.recomputed_coefficient = 5.0 / (4.0 * c.beta_lower);
  d.recomputed_value = d.recomputed_coefficient * Z + 1.0 + std::cbrt(Z) * h_of_z(Z, c);
  return d;
}

long integer_cap(double bound) { return static_cast<long>(std::ceil(bound)) - 1; }

BoundReport bound_report(double Z, const Constants& c) {
  BoundReport r;
  r.Z = Z;
  r.lieb = lieb_bound(Z);
  r.nam = nam_bound(Z);
  r.hartree = hartree_bound(Z, c);
  r.main = main_bound(Z, c);
  r.a = a_coeff(r.main, Z, c);
  r.h_of_z = h_of_z(Z, c);
  r.lieb_cap = integer_cap(r.lieb);
  r.nam_cap = integer_cap(r.nam);
  r.hartree_cap = integer_cap(r.hartree);
  r.main_cap = integer_cap(r.main);

  struct Entry {
    const char* name;
    double value;
    long cap;
  };
  const Entry entries[] = {{"main", r.main, r.main_cap}, {"nam", r.nam, r.nam_cap}, {"lieb", r.lieb, r.lieb_cap}};
  double best = entries[0].value;
  long best_cap = entries[0].cap;
  r.best_real = entries[0].name;
  for (const auto& e : entries) {
    if (e.value < best) {
      best = e.value;
      r.best_real = e.name;
    }
    best_cap = std::min(best_cap, e.cap);
  }
  for (const auto& e : entries) {
    if (e.cap != best_cap) continue;
    if (!r.best_integer.empty()) r.best_integer += '+';
    r.best_integer += e.name;
  }
  return r;
}

std::vector<BoundReport> compare_table(int z_min, int z_max, const Constants& c) {
  if (z_min < 1 || z_max < z_min)
    throw Error(ErrorKind::InvalidArgument, kModule, "need 1 <= z_min <= z_max");
  std::vector<BoundReport> rows;
  rows.reserve(static_cast<std::size_t>(z_max - z_min + 1));
  for (int z = z_min; z <= z_max; ++z) rows.push_back(bound_report(z, c));
  return rows;
}

CrossoverReport crossover_vs_nam(const Constants& c, int scan_cap) {
  if (scan_cap < 1) throw Error(ErrorKind::InvalidArgument, kModule, "scan cap must be positive");
  CrossoverReport r;
  r.scan_cap = scan_cap;
  for (int z = 1; z <= scan_cap; ++z) {
    const double m = main_bound(z, c), n = nam_bound(z);
    if (m <= n) r.real_crossover = z;
    if (std::floor(m) <= std::floor(n)) r.integer_crossover = z;
  }
  return r;
}

}  // namespace excess
