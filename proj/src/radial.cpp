#include "excess/radial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "excess/errors.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "radial-core";

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, kModule, message);
}

double cap_integral(double f0, double r0, double leading_power) {
  // \int_0^{r0} f0 (r/r0)^p dr
  return leading_power > -1.0 ? f0 * r0 / (leading_power + 1.0) : 0.0;
}

}  // namespace

RadialGrid RadialGrid::logarithmic(std::size_t n, double r_max, double first_fraction) {
  require(n >= kMinSize, "grid needs at least 100 nodes");
  require(std::isfinite(r_max) && r_max > 0.0, "r_max must be positive");
  require(first_fraction > 0.0 && first_fraction <= 1e-5,
          "first node must lie below 1e-5 r_max");

  auto data = std::make_shared<Data>();
  data->h = -std::log(first_fraction) / static_cast<double>(n - 1);
  data->nodes.resize(n);
  const double r0 = r_max * first_fraction;
  for (std::size_t i = 0; i < n; ++i) data->nodes[i] = r0 * std::exp(data->h * static_cast<double>(i));
  data->nodes.back() = r_max;

  // Weights are the column sums of the interval rule (see interval_integrals).
  std::vector<double> c(n, 0.0);
  auto add = [&](std::size_t i, double v) { c[i] += v / 24.0; };
  add(0, 9); add(1, 19); add(2, -5); add(3, 1);
  for (std::size_t i = 1; i + 2 < n; ++i) {
    add(i - 1, -1); add(i, 13); add(i + 1, 13); add(i + 2, -1);
  }
  add(n - 4, 1); add(n - 3, -5); add(n - 2, 19); add(n - 1, 9);

  data->weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) data->weights[i] = c[i] * data->h * data->nodes[i];
  return RadialGrid(std::move(data));
}

RadialGrid RadialGrid::scaled(double factor) const {
  require(factor > 0.0 && std::isfinite(factor), "grid scale factor must be positive");
  auto data = std::make_shared<Data>(*data_);
  for (double& r : data->nodes) r *= factor;
  for (double& w : data->weights) w *= factor;
  return RadialGrid(std::move(data));
}

std::vector<double> RadialGrid::interval_integrals(std::span<const double> f) const {
  const std::size_t n = size();
  require(f.size() == n, "sample count does not match grid");
  const auto& r = data_->nodes;
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = f[i] * r[i];

  const double s = data_->h / 24.0;
  std::vector<double> out(n - 1);
  out[0] = s * (9 * g[0] + 19 * g[1] - 5 * g[2] + g[3]);
  for (std::size_t i = 1; i + 2 < n; ++i)
    out[i] = s * (-g[i - 1] + 13 * g[i] + 13 * g[i + 1] - g[i + 2]);
  out[n - 2] = s * (g[n - 4] - 5 * g[n - 3] + 19 * g[n - 2] + 9 * g[n - 1]);
  return out;
}

double RadialGrid::integrate(std::span<const double> f, double leading_power) const {
  require(f.size() == size(), "sample count does not match grid");
  const auto& w = data_->weights;
  double sum = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) sum += w[i] * f[i];
  return sum + cap_integral(f[0], r_min(), leading_power);
}

std::vector<double> RadialGrid::cumulative(std::span<const double> f, double leading_power) const {
  const auto pieces = interval_integrals(f);
  std::vector<double> out(size());
  out[0] = cap_integral(f[0], r_min(), leading_power);
  for (std::size_t i = 0; i < pieces.size(); ++i) out[i + 1] = out[i] + pieces[i];
  return out;
}

std::vector<double> RadialGrid::cumulative_from_outside(std::span<const double> f) const {
  const auto pieces = interval_integrals(f);
  std::vector<double> out(size(), 0.0);
  for (std::size_t i = pieces.size(); i-- > 0;) out[i] = out[i + 1] + pieces[i];
  return out;
}

std::vector<double> RadialGrid::log_derivative(std::span<const double> f) const {
  const std::size_t n = size();
  require(f.size() == n, "sample count does not match grid");
  const double s = 1.0 / (12.0 * data_->h);
  std::vector<double> d(n);
  d[0] = s * (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]);
  d[1] = s * (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = s * (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]);
  d[n - 2] = -s * (-3 * f[n - 1] - 10 * f[n - 2] + 18 * f[n - 3] - 6 * f[n - 4] + f[n - 5]);
  d[n - 1] = -s * (-25 * f[n - 1] + 48 * f[n - 2] - 36 * f[n - 3] + 16 * f[n - 4] - 3 * f[n - 5]);
  return d;
}

std::vector<double> RadialGrid::log_second_derivative(std::span<const double> f) const {
  const std::size_t n = size();
  require(f.size() == n, "sample count does not match grid");
  const double s = 1.0 / (12.0 * data_->h * data_->h);
  std::vector<double> d(n);
  d[0] = s * (45 * f[0] - 154 * f[1] + 214 * f[2] - 156 * f[3] + 61 * f[4] - 10 * f[5]);
  d[1] = s * (10 * f[0] - 15 * f[1] - 4 * f[2] + 14 * f[3] - 6 * f[4] + f[5]);
  for (std::size_t i = 2; i + 2 < n; ++i)
    d[i] = s * (-f[i - 2] + 16 * f[i - 1] - 30 * f[i] + 16 * f[i + 1] - f[i + 2]);
  d[n - 2] = s * (10 * f[n - 1] - 15 * f[n - 2] - 4 * f[n - 3] + 14 * f[n - 4] - 6 * f[n - 5] + f[n - 6]);
  d[n - 1] = s * (45 * f[n - 1] - 154 * f[n - 2] + 214 * f[n - 3] - 156 * f[n - 4] + 61 * f[n - 5] -
                  10 * f[n - 6]);
  return d;
}

std::vector<double> RadialGrid::derivative(std::span<const double> f) const {
  auto d = log_derivative(f);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] /= data_->nodes[i];
  return d;
}

double RadialGrid::tail_fraction(std::span<const double> f) const {
  require(f.size() == size(), "sample count does not match grid");
  const auto& w = data_->weights;
  const double edge = r_max() / 10.0;
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double c = w[i] * std::abs(f[i]);
    total += c;
    if (data_->nodes[i] >= edge) tail += c;
  }
  return total > 0.0 ? tail / total : 0.0;
}

void RadialGrid::check_tail(std::span<const double> f, const std::string& what) const {
  const double frac = tail_fraction(f);
  if (!(frac <= kTailTolerance)) {
    std::ostringstream msg;
    msg << what << ": last decade carries " << frac << " of the integral (tolerance "
        << kTailTolerance << ", r_max=" << r_max() << ")";
    throw Error(ErrorKind::TailNotConverged, kModule, msg.str());
  }
}

// ---------------------------------------------------------------------------

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values, std::optional<ProfileTag> tag)
    : grid_(std::move(grid)), values_(std::move(values)), tag_(tag) {
  require(values_.size() == grid_.size(), "profile length does not match grid");
  for (double v : values_) require(std::isfinite(v), "profile values must be finite");
}

RadialProfile RadialProfile::sample(const RadialGrid& grid, const std::function<double(double)>& fn) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.node(i));
  return RadialProfile(grid, std::move(v));
}

RadialProfile RadialProfile::exponential(const RadialGrid& grid, double rate, double amplitude) {
  auto p = sample(grid, [&](double r) { return amplitude * std::exp(-rate * r); });
  return RadialProfile(grid, std::vector<double>(p.values().begin(), p.values().end()),
                       ProfileTag{ProfileTag::Shape::Exponential, amplitude, rate});
}

RadialProfile RadialProfile::gaussian(const RadialGrid& grid, double rate, double amplitude) {
  auto p = sample(grid, [&](double r) { return amplitude * std::exp(-0.5 * rate * r * r); });
  return RadialProfile(grid, std::vector<double>(p.values().begin(), p.values().end()),
                       ProfileTag{ProfileTag::Shape::Gaussian, amplitude, rate});
}

RadialProfile RadialProfile::rescaled(double lambda, double mu) const {
  require(lambda > 0.0 && mu > 0.0, "scaling parameters must be positive");
  const double factor = std::sqrt(lambda) * std::pow(mu, 1.5);
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  std::optional<ProfileTag> tag;
  if (tag_) {
    tag = *tag_;
    tag->amplitude *= factor;
    tag->rate *= tag->shape == ProfileTag::Shape::Exponential ? mu : mu * mu;
  }
  return RadialProfile(grid_.scaled(1.0 / mu), std::move(v), tag);
}

RadialProfile RadialProfile::scaled_values(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  std::optional<ProfileTag> tag = tag_;
  if (tag) tag->amplitude *= factor;
  return RadialProfile(grid_, std::move(v), tag);
}

// ---------------------------------------------------------------------------

double moment(const RadialProfile& p, int k) {
  require(k >= -1 && k <= 2, "moment order must be in {-1, 0, 1, 2}");
  const auto& g = p.grid();
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g.node(i);
    f[i] = kFourPi * std::pow(r, 2 + k) * p[i] * p[i];
  }
  g.check_tail(f, "moment k=" + std::to_string(k));
  return g.integrate(f, 2.0 + k);
}

double kinetic(const RadialProfile& p) {
  const auto& g = p.grid();
  const auto d = g.derivative(p.values());
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g.node(i);
    f[i] = kFourPi * r * r * d[i] * d[i];
  }
  g.check_tail(f, "kinetic");
  return g.integrate(f, 2.0);
}

std::vector<double> hartree_potential_values(const RadialProfile& p) {
  const auto& g = p.grid();
  const std::size_t n = p.size();
  std::vector<double> inner(n), outer(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.node(i);
    const double rho = kFourPi * p[i] * p[i];
    inner[i] = rho * r * r;
    outer[i] = rho * r;
  }
  const auto enclosed = g.cumulative(inner, 2.0);
  const auto exterior = g.cumulative_from_outside(outer);
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) phi[i] = enclosed[i] / g.node(i) + exterior[i];
  return phi;
}

RadialProfile hartree_potential(const RadialProfile& p) {
  const auto& g = p.grid();
  std::vector<double> density(p.size());
  for (std::size_t i = 0; i < density.size(); ++i) {
    const double r = g.node(i);
    density[i] = kFourPi * r * r * p[i] * p[i];
  }
  g.check_tail(density, "Hartree potential source");
  return RadialProfile(g, hartree_potential_values(p));
}

double coulomb_self(const RadialProfile& p) {
  const auto& g = p.grid();
  const auto phi = hartree_potential_values(p);
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g.node(i);
    f[i] = 0.5 * kFourPi * r * r * p[i] * p[i] * phi[i];
  }
  g.check_tail(f, "Coulomb self-energy");
  return g.integrate(f, 2.0);
}

namespace {

// f_xx + f_x = r^2 Delta psi, evaluated in x = ln r.
std::vector<double> r2_laplacian(const RadialProfile& p) {
  const auto& g = p.grid();
  auto first = g.log_derivative(p.values());
  const auto second = g.log_second_derivative(p.values());
  for (std::size_t i = 0; i < first.size(); ++i) first[i] += second[i];
  return first;
}

double checked_mass(const RadialProfile& p) {
  const double m = moment(p, 0);
  if (!(m > 0.0)) throw Error(ErrorKind::ZeroProfile, kModule, "profile has zero mass");
  return m;
}

}  // namespace

double cup_ratio(const RadialProfile& p) {
  const double m = checked_mass(p);
  const double k = kinetic(p);
  if (!(k > 0.0)) throw Error(ErrorKind::ZeroProfile, kModule, "profile has zero gradient");
  return moment(p, -1) / std::sqrt(k * m);
}

double nam_form_ratio(const RadialProfile& p) {
  const double m = checked_mass(p);
  const auto& g = p.grid();
  const auto lap = r2_laplacian(p);
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double r = g.node(i);
    f[i] = -kFourPi * r * r * p[i] * lap[i];
  }
  g.check_tail(f, "quadratic form (x^2 psi, -Delta psi)");
  return g.integrate(f, 3.0) / m;
}

double weighted_kinetic(const RadialProfile& p) {
  checked_mass(p);
  const auto& g = p.grid();
  const auto lap = r2_laplacian(p);
  std::vector<double> f(p.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = -kFourPi * g.node(i) * p[i] * lap[i];
  g.check_tail(f, "weighted kinetic form");
  return g.integrate(f, 2.0);
}

std::vector<double> minus_laplacian(const RadialProfile& p) {
  auto lap = r2_laplacian(p);
  const auto& g = p.grid();
  for (std::size_t i = 0; i < lap.size(); ++i) {
    const double r = g.node(i);
    lap[i] = -lap[i] / (r * r);
  }
  return lap;
}

EnergyBreakdown energy_breakdown(const RadialProfile& p, double Z) {
  EnergyBreakdown e;
  e.K = kinetic(p);
  e.A = Z * moment(p, -1);
  e.R = coulomb_self(p);
  e.N = moment(p, 0);
  e.J = moment(p, 1);
  e.E = e.K - e.A + e.R;
  return e;
}

// ---------------------------------------------------------------------------

void write_profile(std::ostream& out, const RadialProfile& p) {
  const auto& g = p.grid();
  char buf[96];
  std::snprintf(buf, sizeof buf, "# radial-profile v1 n=%zu rmax=%.17g\n", g.size(), g.r_max());
  out << buf;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", g.node(i), p[i]);
    out << buf;
  }
}

RadialProfile read_profile(std::istream& in) {
  std::string header;
  std::getline(in, header);
  std::size_t n = 0;
  double r_max = 0.0;
  require(std::sscanf(header.c_str(), "# radial-profile v1 n=%zu rmax=%lf", &n, &r_max) == 2,
          "missing or malformed radial-profile header");
  require(n >= RadialGrid::kMinSize, "profile file has too few nodes");

  std::vector<double> r(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "profile file truncated");
    std::istringstream ls(line);
    require(static_cast<bool>(ls >> r[i] >> v[i]), "malformed profile line " + std::to_string(i + 2));
  }

  auto grid = RadialGrid::logarithmic(n, r_max, r.front() / r_max);
  for (std::size_t i = 0; i < n; ++i)
    require(std::abs(grid.node(i) - r[i]) <= 1e-9 * r[i], "profile nodes are not logarithmically spaced");
  return RadialProfile(grid, std::move(v));
}

}  // namespace excess
