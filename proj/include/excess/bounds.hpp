#pragma once

// Closed-form bounds on the maximal number N of particles bound by a nucleus
// of charge Z, and the error-term scaffolding behind the main bound
//   N < 1.5211 Z + 1 + a Z^{1/3}.

#include <string>
#include <vector>

namespace excess {

inline constexpr double kLiebOxford = 1.57;
inline constexpr double kGNPublished = 0.2793;
inline constexpr double kDPublished = 0.4403;
inline constexpr double kBetaLower = 0.8218;
inline constexpr double kBetaUpper = 0.8705;
inline constexpr double kHartreeCoefficient = 1.5211;  // 5 / (4 * 0.8218), as printed
inline constexpr double kFrozenA = 0.29363;            // h(6), used for Z >= 6

struct Constants {
  double c_lo = kLiebOxford;
  double c_gn = kGNPublished;
  double d_const = kDPublished;  // D = c_lo * c_gn, rounded up as published
  double beta_lower = kBetaLower;
  double beta_upper = kBetaUpper;

  /// Replace c_gn and recompute D = c_lo * c_gn.
  Constants with_gn(double cgn) const;
  void validate() const;
};

double lieb_bound(double Z);
double nam_bound(double Z);
double hartree_bound(double Z, const Constants& c = {});
double hartree_bound_with_beta(double Z, double beta);

/// h(Z) = (3D/8b)(2 + 1/Z)^{1/3} + (9D^2/32b)(2/Z + 1/Z^2)^{2/3}, b = beta_lower.
double h_of_z(double Z, const Constants& c = {});

/// a = (3D/8b)(N/Z)^{1/3} + (9D^2/32b)(N/Z^2)^{2/3}.
double a_coeff(double N, double Z, const Constants& c = {});

struct DeltaU0 {
  double delta = 0.0;  // 3 D N^{1/3} / Z
  double u0 = 1.0;     // (delta + sqrt(delta^2 + 4)) / 2
  double u0_upper = 1.0;  // 1 + delta/2 + delta^2/8
};
DeltaU0 delta_u0(double N, double Z, const Constants& c = {});

/// 1.5211 Z + 1 + Z^{1/3} h(Z).
double main_bound(double Z, const Constants& c = {});

struct MainBoundDetail {
  double value = 0.0;              // 1.5211 Z + 1 + Z^{1/3} h(Z)
  double frozen_a_value = 0.0;     // 1.5211 Z + 1 + 0.29363 Z^{1/3}, meaningful for Z >= 6
  bool frozen_a_applies = false;
  double recomputed_coefficient = 0.0;  // 5 / (4 beta_lower)
  double recomputed_value = 0.0;        // same bound with the recomputed coefficient
};
MainBoundDetail main_bound_detail(double Z, const Constants& c = {});

/// Largest integer strictly below a strict bound b: ceil(b) - 1.
long integer_cap(double bound);

struct BoundReport {
  double Z = 0.0;
  double lieb = 0.0;
  double nam = 0.0;
  double hartree = 0.0;
  double main = 0.0;
  double a = 0.0;       // a_coeff evaluated at N = main bound
  double h_of_z = 0.0;
  long lieb_cap = 0, nam_cap = 0, hartree_cap = 0, main_cap = 0;
  std::string best_real;     // among the many-body bounds lieb / nam / main
  std::string best_integer;  // ties joined with '+'
};

BoundReport bound_report(double Z, const Constants& c = {});
std::vector<BoundReport> compare_table(int z_min, int z_max, const Constants& c = {});

struct CrossoverReport {
  int integer_crossover = 0;  // largest Z with floor(main) <= floor(nam)
  int real_crossover = 0;     // largest Z with main <= nam
  int claimed = 26;           // value stated with the published bound
  int scan_cap = 0;
};

CrossoverReport crossover_vs_nam(const Constants& c = {}, int scan_cap = 10000);

}  // namespace excess
