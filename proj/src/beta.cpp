#include "excess/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "excess/errors.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "beta-estimator";
constexpr double kAnnulusSpan = 1000.0;       // r_max = 1000 L
constexpr double kAnnulusFirstFraction = 1e-9;

[[noreturn]] void fail(ErrorKind kind, const std::string& message) { throw Error(kind, kModule, message); }

double pair_kernel(double r, double s) { return (r * r + s * s) / std::max(r, s); }

}  // namespace

double beta_functional(const TrialDensity& rho) {
  double mass = 0.0, first = 0.0, numerator = 0.0;
  for (const auto& sh : rho.shells) {
    if (!(sh.radius > 0.0) || !(sh.mass >= 0.0)) fail(ErrorKind::InvalidArgument, "shells need radius > 0 and mass >= 0");
    mass += sh.mass;
    first += sh.mass * sh.radius;
  }
  for (const auto& a : rho.shells)
    for (const auto& b : rho.shells) numerator += 0.5 * a.mass * b.mass * pair_kernel(a.radius, b.radius);

  if (rho.density) {
    const auto& p = *rho.density;
    const auto& g = p.grid();
    const std::size_t n = g.size();
    std::vector<double> f(n), rf(n), r2f(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (p[i] < 0.0) fail(ErrorKind::InvalidArgument, "density must be nonnegative");
      const double r = g.node(i);
      f[i] = kFourPi * r * r * p[i];
      rf[i] = r * f[i];
      r2f[i] = r * rf[i];
    }
    g.check_tail(f, "density mass");
    g.check_tail(rf, "density first moment");

    // (1/2) \iint f f (r^2 + s^2)/max(r, s) = \int f(r) [r F0(r) + F2(r)/r] dr.
    const auto F0 = g.cumulative(f, 2.0);
    const auto F2 = g.cumulative(r2f, 4.0);
    std::vector<double> inner(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double r = g.node(i);
      inner[i] = f[i] * (r * F0[i] + F2[i] / r);
    }
    numerator += g.integrate(inner, 5.0);

    for (const auto& sh : rho.shells) {
      std::vector<double> cross(n);
      for (std::size_t i = 0; i < n; ++i) cross[i] = f[i] * pair_kernel(sh.radius, g.node(i));
      numerator += sh.mass * g.integrate(cross, 2.0);
    }
    mass += g.integrate(f, 2.0);
    first += g.integrate(rf, 3.0);
  }
  if (!(mass > 0.0) || !(first > 0.0)) fail(ErrorKind::ZeroDensity, "trial density carries no mass");
  return numerator / (first * mass);
}

std::string to_string(BetaFamily f) {
  switch (f) {
    case BetaFamily::RPowExp: return "rpow-exp";
    case BetaFamily::Shell: return "shell";
    case BetaFamily::SoftAnnulus: return "soft-annulus";
  }
  return "unknown";
}

BetaFamily parse_beta_family(const std::string& name) {
  for (auto f : {BetaFamily::RPowExp, BetaFamily::Shell, BetaFamily::SoftAnnulus})
    if (to_string(f) == name) return f;
  fail(ErrorKind::InvalidArgument, "unknown family '" + name + "' (rpow-exp, shell, soft-annulus)");
}

FamilyBox family_box(BetaFamily f) {
  switch (f) {
    case BetaFamily::RPowExp: return {{"a"}, {0.0}, {40.0}, {2.0}};
    case BetaFamily::Shell: return {{"radius"}, {0.1}, {10.0}, {1.0}};
    case BetaFamily::SoftAnnulus: return {{"s", "L", "q"}, {0.0, 1.5, 8.0}, {3.0, 60.0, 16.0}, {1.0, 5.0, 10.0}};
  }
  fail(ErrorKind::InvalidArgument, "unknown family");
}

TrialDensity family_member(BetaFamily f, const std::vector<double>& params, std::size_t grid_size) {
  const auto box = family_box(f);
  if (params.size() != box.names.size()) fail(ErrorKind::InvalidArgument, "wrong number of family parameters");
  std::vector<double> x(params);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::clamp(x[k], box.lower[k], box.upper[k]);

  TrialDensity t;
  t.parameters = x;
  switch (f) {
    case BetaFamily::RPowExp: {
      const double a = x[0];
      const auto grid = RadialGrid::logarithmic(grid_size, 10.0 * (a + 80.0));
      t.density = RadialProfile::sample(grid, [a](double r) { return std::exp(a * std::log(r) - r); });
      break;
    }
    case BetaFamily::Shell:
      t.shells.push_back({x[0], 1.0});
      break;
    case BetaFamily::SoftAnnulus: {
      const double s = x[0], L = x[1], q = x[2];
      const auto grid = RadialGrid::logarithmic(grid_size, kAnnulusSpan * L, kAnnulusFirstFraction);
      t.density = RadialProfile::sample(grid, [=](double r) {
        const double radial = std::pow(r, -s) / ((1.0 + std::pow(r, -q)) * (1.0 + std::pow(r / L, q)));
        return radial / (kFourPi * r * r);
      });
      break;
    }
  }
  return t;
}

namespace {

struct Objective {
  BetaFamily family;
  std::size_t grid_size;
  FamilyBox box;
  std::vector<BetaEvaluation>* log;

  // Clamped evaluation with a quadratic penalty outside the box; failed
  // evaluations return +inf.
  double operator()(const std::vector<double>& x) const {
    double penalty = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double c = std::clamp(x[k], box.lower[k], box.upper[k]);
      penalty += (x[k] - c) * (x[k] - c);
    }
    try {
      auto t = family_member(family, x, grid_size);
      const double v = beta_functional(t);
      log->push_back({t.parameters, v});
      return v + penalty;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::InvalidArgument) throw;
      return std::numeric_limits<double>::infinity();
    }
  }
};

double gsl_objective(const gsl_vector* v, void* params) {
  const auto* obj = static_cast<const Objective*>(params);
  std::vector<double> x(v->size);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = gsl_vector_get(v, k);
  const double f = (*obj)(x);
  return std::isfinite(f) ? f : GSL_POSINF;
}

}  // namespace

BetaEstimate optimize_beta_upper(BetaFamily family, int budget, std::size_t grid_size) {
  if (budget < 1) fail(ErrorKind::InvalidArgument, "budget must be at least 1");
  BetaEstimate est;
  est.family = family;
  const auto box = family_box(family);
  est.parameter_names = box.names;
  const Objective obj{family, grid_size, box, &est.evaluations};

  if (box.names.size() == 1) {
    // Brent on the bounded interval.
    std::uintmax_t iters = static_cast<std::uintmax_t>(budget);
    const auto [x, fx] = boost::math::tools::brent_find_minima(
        [&](double a) { return obj({a}); }, box.lower[0], box.upper[0], 40, iters);
    (void)fx;
    est.iterations = static_cast<int>(iters);
    est.converged = iters < static_cast<std::uintmax_t>(budget);
  } else {
    gsl_set_error_handler_off();
    const std::size_t n = box.names.size();
    gsl_vector* x = gsl_vector_alloc(n);
    gsl_vector* step = gsl_vector_alloc(n);
    for (std::size_t k = 0; k < n; ++k) {
      gsl_vector_set(x, k, box.start[k]);
      gsl_vector_set(step, k, 0.1 * (box.upper[k] - box.lower[k]));
    }
    gsl_multimin_function fn{&gsl_objective, n, const_cast<Objective*>(&obj)};
    gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    const double start_value = s->fval;
    bool stalled = false;
    for (int it = 0; it < budget; ++it) {
      est.iterations = it + 1;
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) {
        stalled = !(s->fval < start_value);
        break;
      }
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-7) == GSL_SUCCESS) {
        est.converged = true;
        break;
      }
    }
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(step);
    gsl_vector_free(x);
    if (stalled) fail(ErrorKind::OptimizerStalled, "simplex made no progress from the starting member");
  }

  if (est.evaluations.empty()) fail(ErrorKind::OptimizerStalled, "no family member could be evaluated");
  const auto best = std::min_element(est.evaluations.begin(), est.evaluations.end(),
                                     [](const auto& a, const auto& b) { return a.value < b.value; });
  est.beta_upper = best->value;
  est.best_parameters = best->parameters;
  return est;
}

}  // namespace excess
