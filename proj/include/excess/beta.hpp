#pragma once

// Nam's continuum quantity
//   beta(rho) = [(1/2) \iint rho(x) rho(y) (|x|^2 + |y|^2) / |x - y|] / [(\int |x| rho)(\int rho)]
// on radial trial densities, and the discrete quotient alpha_N over point sets.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "excess/bounds.hpp"
#include "excess/radial.hpp"

namespace excess {

/// Uniform shell of total mass `mass` at `radius`.
struct Shell {
  double radius = 1.0;
  double mass = 1.0;
};

/// A radial density (the density itself, not its square root), optionally
/// with point shells. At least one part must carry mass.
struct TrialDensity {
  std::optional<RadialProfile> density;
  std::vector<Shell> shells;
  std::vector<double> parameters;  // family parameters that produced it
};

/// Radial reduction: the angular average of 1/|x-y| is 1/max(|x|,|y|).
/// Throws ZeroDensity, TailNotConverged, InvalidArgument (negative density).
double beta_functional(const TrialDensity& rho);

enum class BetaFamily {
  RPowExp,      // rho = r^a e^{-r}, a in [0, 40]
  Shell,        // single shell of radius t in [0.1, 10]
  SoftAnnulus,  // 4 pi r^2 rho = r^{-s} / ((1 + r^{-q}) (1 + (r/L)^q))
};

std::string to_string(BetaFamily f);
/// Accepts "rpow-exp", "shell", "soft-annulus"; throws InvalidArgument otherwise.
BetaFamily parse_beta_family(const std::string& name);

struct FamilyBox {
  std::vector<std::string> names;
  std::vector<double> lower, upper, start;
};
FamilyBox family_box(BetaFamily f);

/// Member of a family at the given parameters (clamped to the box).
TrialDensity family_member(BetaFamily f, const std::vector<double>& params,
                           std::size_t grid_size = RadialGrid::kDefaultSize);

struct BetaEvaluation {
  std::vector<double> parameters;
  double value = 0.0;
};

struct BetaEstimate {
  BetaFamily family = BetaFamily::RPowExp;
  double beta_lower = kBetaLower;
  double beta_upper = 0.0;  // best value found
  std::vector<double> best_parameters;
  std::vector<std::string> parameter_names;
  std::vector<BetaEvaluation> evaluations;
  int iterations = 0;
  bool converged = false;
  double reference_lower = kBetaLower;
  double reference_upper = kBetaUpper;
};

/// Minimises beta over a family within `budget` optimizer iterations.
/// Throws OptimizerStalled if no admissible member could be evaluated or the
/// optimizer cannot make progress from its start.
BetaEstimate optimize_beta_upper(BetaFamily family, int budget,
                                 std::size_t grid_size = RadialGrid::kDefaultSize);

// ---------------------------------------------------------------------------

using Point3 = std::array<double, 3>;

struct PointConfig {
  std::vector<Point3> points;
};

/// sum_{i<j} (|x_i|^2 + |x_j|^2)/|x_i - x_j| / ((N-1) sum |x_i|).
/// Throws CoincidentPoints, InvalidArgument for N < 2.
double alpha_n_value(const PointConfig& cfg);

struct AlphaResult {
  int N = 0;
  double value = 0.0;
  PointConfig best;  // gauge sum |x_i| = N
  int seeds = 0;
  int best_seed = -1;
  std::vector<double> seed_values;  // per seed, NaN when the descent failed
};

/// Multi-start quasi-Newton descent from random configurations, run in
/// parallel and reduced by minimum (ties go to the lowest seed index).
AlphaResult minimize_alpha_n(int N, int seeds = 64, std::uint64_t base_seed = 20240601);

}  // namespace excess
