#pragma once

#include <span>
#include <vector>

#include "excess/radial.hpp"

namespace excess {

struct SStateResult {
  double energy = 0.0;       // lowest eigenvalue of -Delta - phi (Dirichlet at r_max)
  std::vector<double> psi;   // radial eigenfunction, psi >= 0, unit mass
  int bisection_steps = 0;
};

/// Lowest l = 0 eigenpair of -Delta - phi(r) on the grid with psi(r_max) = 0.
///
/// Numerov shooting in x = ln r on v = sqrt(r) psi; the eigenvalue is
/// bracketed by node counting and bisected to `eig_tol`. The eigenfunction is
/// assembled from an outward and an inward sweep matched at the outermost
/// classical turning point. `phi` is the attractive potential (Z/r - Phi).
/// The bracket starts at [e_lower, 0] and is widened upward when the box
/// ground state lies above zero.
SStateResult lowest_s_state(const RadialGrid& grid, std::span<const double> phi, double eig_tol,
                            double e_lower);

/// Number of sign changes of the outward solution at trial energy `energy`.
int count_nodes(const RadialGrid& grid, std::span<const double> phi, double energy);

}  // namespace excess
