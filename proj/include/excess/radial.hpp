#pragma once

// Radial grids, sampled profiles and the single-profile functionals.
//
// Units: hbar = 2m = e = 1, so -Delta - Z/|x| has ground energy -Z^2/4.
// Every integral below is a full three-dimensional integral of a radially
// symmetric function, i.e. it carries the 4 pi r^2 Jacobian.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace excess {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFourPi = 4.0 * kPi;

// Fraction of the integral allowed in the outermost decade [r_max/10, r_max].
inline constexpr double kTailTolerance = 1e-8;

/// Logarithmically spaced grid r_i = r_1 exp(i h) on [r_1, r_max].
///
/// Quadrature uses the four-point cubic interval rule in x = ln r, so the
/// weights and the running (cumulative) integrals come from the same scheme
/// and agree to rounding. Integrals from 0 to r_1 are added as a small cap
/// assuming a power-law integrand below the first node.
class RadialGrid {
 public:
  static constexpr std::size_t kDefaultSize = 4000;
  static constexpr double kDefaultFirstFraction = 1e-6;
  static constexpr std::size_t kMinSize = 100;

  static RadialGrid logarithmic(std::size_t n, double r_max,
                                double first_fraction = kDefaultFirstFraction);

  std::size_t size() const { return data_->nodes.size(); }
  std::span<const double> nodes() const { return data_->nodes; }
  std::span<const double> weights() const { return data_->weights; }
  double node(std::size_t i) const { return data_->nodes[i]; }
  double r_min() const { return data_->nodes.front(); }
  double r_max() const { return data_->nodes.back(); }
  double log_step() const { return data_->h; }
  double first_fraction() const { return r_min() / r_max(); }

  /// Same grid with every node multiplied by `factor`.
  RadialGrid scaled(double factor) const;

  /// \int_0^{r_max} f(r) dr, with f ~ r^leading_power below r_1.
  double integrate(std::span<const double> f, double leading_power = 2.0) const;

  /// Running integrals \int_0^{r_i} f(r) dr for every node.
  std::vector<double> cumulative(std::span<const double> f, double leading_power = 2.0) const;

  /// Running integrals \int_{r_i}^{r_max} f(r) dr for every node.
  std::vector<double> cumulative_from_outside(std::span<const double> f) const;

  /// d f / d ln r and d^2 f / d (ln r)^2, fourth-order stencils.
  std::vector<double> log_derivative(std::span<const double> f) const;
  std::vector<double> log_second_derivative(std::span<const double> f) const;

  /// d f / d r.
  std::vector<double> derivative(std::span<const double> f) const;

  /// Throws TailNotConverged when the last decade carries more than
  /// kTailTolerance of \int |f| dr. `what` names the quantity in the message.
  void check_tail(std::span<const double> f, const std::string& what) const;

  /// Fraction of \int |f| dr that lies in [r_max/10, r_max].
  double tail_fraction(std::span<const double> f) const;

  bool same_as(const RadialGrid& other) const { return data_ == other.data_; }

 private:
  struct Data {
    std::vector<double> nodes;
    std::vector<double> weights;
    double h = 0.0;
  };
  explicit RadialGrid(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::vector<double> interval_integrals(std::span<const double> f) const;

  std::shared_ptr<const Data> data_;
};

/// Closed-form tag carried by profiles built from analytic formulas.
struct ProfileTag {
  enum class Shape { Exponential, Gaussian };
  Shape shape;
  double amplitude = 1.0;
  double rate = 1.0;  // B e^{-rate r} or B e^{-rate r^2 / 2}
};

/// A radially symmetric real function sampled on a grid.
class RadialProfile {
 public:
  RadialProfile(RadialGrid grid, std::vector<double> values,
                std::optional<ProfileTag> tag = std::nullopt);

  static RadialProfile sample(const RadialGrid& grid, const std::function<double(double)>& fn);
  static RadialProfile exponential(const RadialGrid& grid, double rate = 1.0, double amplitude = 1.0);
  static RadialProfile gaussian(const RadialGrid& grid, double rate = 1.0, double amplitude = 1.0);

  const RadialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::optional<ProfileTag>& tag() const { return tag_; }

  /// psi_{lambda,mu}(r) = lambda^{1/2} mu^{3/2} psi(mu r), represented exactly
  /// on the grid scaled by 1/mu.
  RadialProfile rescaled(double lambda, double mu) const;

  RadialProfile scaled_values(double factor) const;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  std::optional<ProfileTag> tag_;
};

/// Energy pieces of the Hartree functional for one profile.
struct EnergyBreakdown {
  double K = 0.0;  // \int |grad psi|^2
  double A = 0.0;  // Z \int psi^2 / |x|
  double R = 0.0;  // (1/2) \iint psi^2 psi^2 / |x-y|
  double E = 0.0;  // K - A + R
  double N = 0.0;  // \int psi^2
  double J = 0.0;  // \int |x| psi^2
};

/// 4 pi \int r^{2+k} psi^2 dr for k in {-1, 0, 1, 2}.
double moment(const RadialProfile& p, int k);
inline double mass(const RadialProfile& p) { return moment(p, 0); }

/// 4 pi \int r^2 psi'(r)^2 dr.
double kinetic(const RadialProfile& p);

/// Newton potential Phi(r) = \int psi^2(y) / |x - y| dy.
RadialProfile hartree_potential(const RadialProfile& p);

/// Same as hartree_potential without the tail check (used inside iterations).
std::vector<double> hartree_potential_values(const RadialProfile& p);

/// (1/2) \iint psi^2(x) psi^2(y) / |x - y|.
double coulomb_self(const RadialProfile& p);

/// [\int psi^2/|x|] / (||grad psi|| ||psi||); at most 1, equal on B e^{-cr}.
double cup_ratio(const RadialProfile& p);

/// (x^2 psi, -Delta psi) / (psi, psi); bounded below by -3/4.
double nam_form_ratio(const RadialProfile& p);

/// \int -|x| psi Delta psi dx; nonnegative.
double weighted_kinetic(const RadialProfile& p);

/// -Delta psi on the grid.
std::vector<double> minus_laplacian(const RadialProfile& p);

EnergyBreakdown energy_breakdown(const RadialProfile& p, double Z);

// Text format: header "# radial-profile v1 n=<n> rmax=<r_max>" followed by
// one "r value" line per node.
void write_profile(std::ostream& out, const RadialProfile& p);
RadialProfile read_profile(std::istream& in);

}  // namespace excess
