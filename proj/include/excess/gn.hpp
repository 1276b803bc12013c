#pragma once

// Sharp constant of
//   \int psi^{8/3} <= C_GN (\int |grad psi|^2)^{1/2} (\int psi^2)^{5/6}
// from the positive ground state of -u'' - (2/r) u' + u = u^{5/3}, plus the
// analytic Nasibov bound built from the Babenko-Beckner constant.

#include <cstddef>

#include "excess/radial.hpp"

namespace excess {

inline constexpr double kGNReference = 0.279271;    // published numerical value
inline constexpr double kNasibovReference = 0.306658;

struct GNParams {
  double rho = 2.0 / 3.0;
  int d = 3;
  double alpha = 3.0 / 8.0;  // (d/2) rho / (rho + 2)

  /// Throws OutOfRange unless rho > 0, d >= 1 and rho < 4/(d-2) for d >= 3.
  static GNParams make(double rho, int d);
};

struct GNGroundState {
  RadialProfile u;
  double u0 = 0.0;            // u(0)
  double K = 0.0;             // \int |grad u|^2
  double M = 0.0;             // \int u^2
  double P = 0.0;             // \int u^{8/3}
  double cgn_ratio = 0.0;     // P / (K^{1/2} M^{5/6})
  double cgn_pohozaev = 0.0;  // (8/3) (3/5)^{5/6} K^{-1/3}
  double splice_radius = 0.0; // beyond it u = c e^{-r}/r
  int bisection_steps = 0;
};

struct GNConfig {
  double shoot_tol = 1e-12;  // absolute tolerance on u(0)
  std::size_t grid_size = RadialGrid::kDefaultSize;
  double r_max = 150.0;
};

/// Shooting on u(0) in [1.1, 50]; throws BracketFailed if the ends do not
/// straddle the ground state.
GNGroundState solve_ground_state(const GNConfig& cfg = {});

/// \int psi^{8/3} / [(\int |grad psi|^2)^{1/2} (\int psi^2)^{5/6}].
double gn_ratio(const RadialProfile& p);

double alpha_exponent(double rho, int d);

/// [(p/2pi)^{1/p} / (p'/2pi)^{1/p'}]^{d/2}, 1/p + 1/p' = 1.
double babenko_beckner(double p, int d);

/// Nasibov's upper bound k_N(rho, d) on the best constant of
/// ||u||_{rho+2} <= k ||grad u||_2^alpha ||u||_2^{1-alpha}.
double nasibov_kn(double rho, int d);

/// k_N(2/3, 3)^{8/3}, the analytic bound on C_GN.
double nasibov_bound();

}  // namespace excess
