#pragma once

// Mass-constrained Hartree model: minimise
//   E[psi] = \int |grad psi|^2 - Z \int psi^2/|x| + (1/2) \iint psi^2 psi^2 / |x-y|
// at fixed \int psi^2 = N. The minimiser solves -Delta psi = (phi - mu) psi with
// phi = Z/|x| - psi^2 * 1/|x|; the unconstrained minimiser is the mu = 0 end
// of the family and sits at the critical mass N_c(Z).

#include <optional>
#include <utility>

#include "excess/radial.hpp"

namespace excess {

struct SCFConfig {
  double mixing = 0.5;        // linear density mixing, in (0, 1]
  double tol_density = 1e-8;  // L1 change of the density, relative to N
  int max_iter = 500;
  double eig_tol = 1e-10;
  std::size_t grid_size = RadialGrid::kDefaultSize;
  double r_max = 0.0;  // 0: start at 60/Z and double until the tail criterion passes

  void validate() const;
};

struct HartreeSolution {
  RadialProfile psi;  // nonnegative, mass N
  RadialProfile phi;  // Z/r - Phi_psi
  double mu = 0.0;    // chemical potential, -(lowest eigenvalue of -Delta - phi)
  EnergyBreakdown breakdown;
  double Z = 0.0;
  int iterations = 0;
  bool converged = false;
  double density_residual = 0.0;  // L1 fixed-point residual relative to N
};

/// Converged Hartree state at mass N. Throws Unbound when the converged
/// chemical potential is not positive and NotConverged when max_iter is hit.
HartreeSolution solve(double Z, double N, const SCFConfig& cfg = {});

struct CriticalPoint {
  double N_c = 0.0;
  HartreeSolution solution;  // state at N_c (mu ~ 0)
};

/// Critical mass N_c(Z): root of mu(N) = 0 bracketed in [Z, 2Z].
CriticalPoint critical_point(double Z, const SCFConfig& cfg = {});
double critical_mass(double Z, const SCFConfig& cfg = {});

/// (2K - A + R)/K and (K - A + 2R)/K.
std::pair<double, double> virial_residuals(const HartreeSolution& sol);

struct LemmaReport {
  // Each ratio is (value / bound); the inequality holds when the flag is set.
  double a_ratio = 0.0;  // A / (N Z^2 / 3), holds if <= 1
  double e_ratio = 0.0;  // E / (-N Z^2 / 9), holds if <= 1
  double j_ratio = 0.0;  // J / (3 N / Z), holds if >= 1
  bool a_holds = false;
  bool e_holds = false;
  bool j_holds = false;
  bool all() const { return a_holds && e_holds && j_holds; }
};

LemmaReport lemma_checks(const HartreeSolution& sol);

struct KineticCertificate {
  double lhs = 0.0;  // K
  double rhs = 0.0;  // N Z^2/9 + D K^{1/2} N^{5/6}
  double sigma = 0.0;
  double u = 0.0;      // K^{1/2} / sigma
  double delta = 0.0;  // 3 D N^{1/3} / Z
  double u0 = 0.0;     // positive root of u^2 = 1 + delta u
  bool holds = false;
};

KineticCertificate kinetic_certificate(const HartreeSolution& sol, double D);

/// || -Delta psi - (phi - mu) psi ||_2 on the grid.
double equation_residual(const HartreeSolution& sol);

/// L1 distance (relative to N) between the density of the converged state and
/// the density built from the lowest eigenfunction of its own potential.
double fixed_point_residual(const HartreeSolution& sol, const SCFConfig& cfg = {});

}  // namespace excess
