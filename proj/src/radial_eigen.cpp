#include "excess/radial_eigen.hpp"

#include <cmath>

#include "excess/errors.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "hartree-scf";
constexpr double kRescaleAbove = 1e150;
constexpr double kStiff = 0.3;

// v'' = (a_i - E b_i) v in x = ln r, with a = 1/4 - r^2 phi and b = r^2.
struct NumerovSystem {
  std::vector<double> a, b, r;
  double h2_12 = 0.0;
  double start_slope = 0.0;  // u ~ r (1 - c r) near the origin

  NumerovSystem(const RadialGrid& grid, std::span<const double> phi) {
    const std::size_t n = grid.size();
    if (phi.size() != n) throw Error(ErrorKind::InvalidArgument, kModule, "potential length mismatch");
    a.resize(n);
    b.resize(n);
    r.assign(grid.nodes().begin(), grid.nodes().end());
    for (std::size_t i = 0; i < n; ++i) {
      b[i] = r[i] * r[i];
      a[i] = 0.25 - b[i] * phi[i];
    }
    const double h = grid.log_step();
    h2_12 = h * h / 12.0;
    start_slope = 0.5 * r[0] * phi[0];
  }

  double q(std::size_t i, double e) const { return 1.0 - h2_12 * (a[i] - e * b[i]); }

  // One past the last usable node: beyond it h^2 g / 12 stays above kStiff,
  // the solution is decaying by hundreds of e-folds per unit ln r and the
  // Numerov recurrence is no longer stable. Treated as the Dirichlet edge.
  std::size_t usable_end(double e) const {
    std::size_t end = r.size();
    while (end > 3 && h2_12 * (a[end - 1] - e * b[end - 1]) > kStiff) --end;
    return end;
  }
  double start(std::size_t i) const { return std::sqrt(r[i]) * (1.0 - start_slope * r[i]); }

  int nodes(double e) const {
    const std::size_t n = usable_end(e);
    double v0 = start(0), v1 = start(1);
    double q0 = q(0, e), q1 = q(1, e);
    int count = 0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double q2 = q(i + 1, e);
      double v2 = ((12.0 - 10.0 * q1) * v1 - q0 * v0) / q2;
      if ((v2 < 0.0) != (v1 < 0.0) && v2 != 0.0) ++count;
      if (std::abs(v2) > kRescaleAbove) {
        v1 /= kRescaleAbove;
        v2 /= kRescaleAbove;
      }
      v0 = v1;
      v1 = v2;
      q0 = q1;
      q1 = q2;
    }
    return count;
  }
};

}  // namespace

int count_nodes(const RadialGrid& grid, std::span<const double> phi, double energy) {
  return NumerovSystem(grid, phi).nodes(energy);
}

SStateResult lowest_s_state(const RadialGrid& grid, std::span<const double> phi, double eig_tol,
                            double e_lower) {
  const NumerovSystem sys(grid, phi);
  const std::size_t n_grid = grid.size();
  SStateResult out;

  double lo = e_lower;
  for (int k = 0; sys.nodes(lo) > 0; ++k) {
    if (k > 60) throw Error(ErrorKind::BracketFailed, kModule, "no nodeless energy below the spectrum");
    lo = 2.0 * lo - 1.0;
  }
  double hi = 0.0;
  if (sys.nodes(hi) == 0) {
    const double rm = grid.r_max();
    double step = 1.0 / (rm * rm);
    for (int k = 0;; ++k) {
      if (k > 200) throw Error(ErrorKind::BracketFailed, kModule, "box ground state not bracketed");
      lo = hi;
      hi = step;
      if (sys.nodes(hi) > 0) break;
      step *= 2.0;
    }
  }
  while (hi - lo > eig_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sys.nodes(mid) == 0 ? lo : hi) = mid;
    ++out.bisection_steps;
  }
  const double e = 0.5 * (lo + hi);
  out.energy = e;
  const std::size_t n = sys.usable_end(e);
  if (n < 8) throw Error(ErrorKind::NotConverged, kModule, "grid too coarse for the eigenfunction");

  // Matching point: outermost classically allowed node.
  std::size_t m = 0;
  for (std::size_t i = n; i-- > 0;) {
    if (sys.a[i] - e * sys.b[i] < 0.0) {
      m = i;
      break;
    }
  }
  if (m < 2) m = n / 2;
  if (m > n - 3) m = n - 3;

  std::vector<double> v(n_grid, 0.0);
  v[0] = sys.start(0);
  v[1] = sys.start(1);
  for (std::size_t i = 1; i < m; ++i) {
    v[i + 1] = ((12.0 - 10.0 * sys.q(i, e)) * v[i] - sys.q(i - 1, e) * v[i - 1]) / sys.q(i + 1, e);
  }

  std::vector<double> w(n_grid, 0.0);
  w[n - 1] = 0.0;
  w[n - 2] = 1e-30;
  for (std::size_t i = n - 2; i > m; --i) {
    w[i - 1] = ((12.0 - 10.0 * sys.q(i, e)) * w[i] - sys.q(i + 1, e) * w[i + 1]) / sys.q(i - 1, e);
    if (std::abs(w[i - 1]) > kRescaleAbove) {
      for (std::size_t j = i - 1; j < n; ++j) w[j] /= kRescaleAbove;
    }
  }
  if (w[m] == 0.0) throw Error(ErrorKind::NotConverged, kModule, "inward solution vanished at matching point");
  const double scale = v[m] / w[m];
  for (std::size_t i = m + 1; i < n; ++i) v[i] = w[i] * scale;

  std::vector<double> psi(n_grid, 0.0);
  const double sign = v[m] < 0.0 ? -1.0 : 1.0;
  for (std::size_t i = 0; i < n; ++i) psi[i] = std::max(0.0, sign * v[i] / std::sqrt(sys.r[i]));

  std::vector<double> dens(n_grid);
  for (std::size_t i = 0; i < n_grid; ++i) dens[i] = kFourPi * sys.b[i] * psi[i] * psi[i];
  const double norm = grid.integrate(dens, 2.0);
  if (!(norm > 0.0)) throw Error(ErrorKind::NotConverged, kModule, "eigenfunction has zero norm");
  const double f = 1.0 / std::sqrt(norm);
  for (double& x : psi) x *= f;
  out.psi = std::move(psi);
  return out;
}

}  // namespace excess
