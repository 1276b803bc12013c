#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <thread>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "excess/beta.hpp"
#include "excess/errors.hpp"

namespace excess {

namespace {

constexpr const char* kModule = "beta-estimator";
constexpr int kMaxIterations = 20000;
constexpr double kGradientTol = 1e-11;

double norm(const double* x) { return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }

// Quotient and its gradient for flat coordinates x[3 N].
double quotient(const double* x, std::size_t N, double* grad) {
  double S = 0.0, T = 0.0;
  if (grad) std::fill(grad, grad + 3 * N, 0.0);
  std::vector<double> gS(grad ? 3 * N : 0, 0.0);
  for (std::size_t i = 0; i < N; ++i) {
    const double* xi = x + 3 * i;
    const double ai = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    T += std::sqrt(ai);
    for (std::size_t j = i + 1; j < N; ++j) {
      const double* xj = x + 3 * j;
      const double aj = xj[0] * xj[0] + xj[1] * xj[1] + xj[2] * xj[2];
      double d[3] = {xi[0] - xj[0], xi[1] - xj[1], xi[2] - xj[2]};
      const double dist = norm(d);
      if (!(dist > 0.0)) return std::numeric_limits<double>::infinity();
      S += (ai + aj) / dist;
      if (grad) {
        const double c = (ai + aj) / (dist * dist * dist);
        for (int k = 0; k < 3; ++k) {
          gS[3 * i + k] += 2.0 * xi[k] / dist - c * d[k];
          gS[3 * j + k] += 2.0 * xj[k] / dist + c * d[k];
        }
      }
    }
  }
  const double scale = 1.0 / (static_cast<double>(N - 1) * T);
  if (grad) {
    for (std::size_t i = 0; i < N; ++i) {
      const double r = norm(x + 3 * i);
      for (int k = 0; k < 3; ++k) {
        const double gT = r > 0.0 ? x[3 * i + k] / r : 0.0;
        grad[3 * i + k] = scale * (gS[3 * i + k] - S * gT / T);
      }
    }
  }
  return S * scale;
}

double f_cb(const gsl_vector* v, void* p) {
  const double q = quotient(v->data, *static_cast<std::size_t*>(p), nullptr);
  return std::isfinite(q) ? q : GSL_POSINF;
}
void df_cb(const gsl_vector* v, void* p, gsl_vector* g) { quotient(v->data, *static_cast<std::size_t*>(p), g->data); }
void fdf_cb(const gsl_vector* v, void* p, double* f, gsl_vector* g) {
  *f = quotient(v->data, *static_cast<std::size_t*>(p), g->data);
}

PointConfig gauge(const std::vector<double>& x, std::size_t N) {
  double T = 0.0;
  for (std::size_t i = 0; i < N; ++i) T += norm(x.data() + 3 * i);
  const double s = static_cast<double>(N) / T;
  PointConfig c;
  c.points.resize(N);
  for (std::size_t i = 0; i < N; ++i)
    for (int k = 0; k < 3; ++k) c.points[i][k] = s * x[3 * i + k];
  return c;
}

struct SeedOutcome {
  double value = std::numeric_limits<double>::quiet_NaN();
  PointConfig config;
};

SeedOutcome descend(std::size_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x0(3 * N);
  for (double& v : x0) v = gauss(rng);

  gsl_vector* x = gsl_vector_alloc(3 * N);
  std::copy(x0.begin(), x0.end(), x->data);
  std::size_t n_points = N;
  gsl_multimin_function_fdf fn{&f_cb, &df_cb, &fdf_cb, 3 * N, &n_points};
  gsl_multimin_fdfminimizer* s = gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, 3 * N);
  gsl_multimin_fdfminimizer_set(s, &fn, x, 0.1, 0.1);
  for (int it = 0; it < kMaxIterations; ++it) {
    if (gsl_multimin_fdfminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_gradient(s->gradient, kGradientTol) == GSL_SUCCESS) break;
  }
  std::vector<double> xf(s->x->data, s->x->data + 3 * N);
  gsl_multimin_fdfminimizer_free(s);
  gsl_vector_free(x);

  SeedOutcome out;
  try {
    out.config = gauge(xf, N);
    out.value = alpha_n_value(out.config);
  } catch (const Error&) {
    out.value = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

}  // namespace

double alpha_n_value(const PointConfig& cfg) {
  const std::size_t N = cfg.points.size();
  if (N < 2) throw Error(ErrorKind::InvalidArgument, kModule, "alpha_N needs at least two points");
  double scale = 0.0;
  for (const auto& p : cfg.points) {
    for (double c : p)
      if (!std::isfinite(c)) throw Error(ErrorKind::InvalidArgument, kModule, "point coordinates must be finite");
    scale = std::max(scale, norm(p.data()));
  }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const double d[3] = {cfg.points[i][0] - cfg.points[j][0], cfg.points[i][1] - cfg.points[j][1],
                           cfg.points[i][2] - cfg.points[j][2]};
      if (!(norm(d) > 1e-12 * scale)) throw Error(ErrorKind::CoincidentPoints, kModule, "two points coincide");
    }
  std::vector<double> flat(3 * N);
  for (std::size_t i = 0; i < N; ++i)
    for (int k = 0; k < 3; ++k) flat[3 * i + k] = cfg.points[i][k];
  return quotient(flat.data(), N, nullptr);
}

AlphaResult minimize_alpha_n(int N, int seeds, std::uint64_t base_seed) {
  if (N < 2) throw Error(ErrorKind::InvalidArgument, kModule, "N must be at least 2");
  if (seeds < 1) throw Error(ErrorKind::InvalidArgument, kModule, "seeds must be at least 1");
  gsl_set_error_handler_off();

  const auto n = static_cast<std::size_t>(N);
  std::vector<SeedOutcome> outcomes(static_cast<std::size_t>(seeds));
  const int workers = std::max(1u, std::thread::hardware_concurrency());
  for (int first = 0; first < seeds; first += workers) {
    std::vector<std::future<SeedOutcome>> batch;
    const int last = std::min(seeds, first + workers);
    for (int k = first; k < last; ++k)
      batch.push_back(std::async(std::launch::async, descend, n, base_seed + static_cast<std::uint64_t>(k)));
    for (int k = first; k < last; ++k) outcomes[static_cast<std::size_t>(k)] = batch[static_cast<std::size_t>(k - first)].get();
  }

  AlphaResult res;
  res.N = N;
  res.seeds = seeds;
  res.value = std::numeric_limits<double>::infinity();
  for (int k = 0; k < seeds; ++k) {
    const auto& o = outcomes[static_cast<std::size_t>(k)];
    res.seed_values.push_back(o.value);
    if (std::isfinite(o.value) && o.value < res.value) {
      res.value = o.value;
      res.best = o.config;
      res.best_seed = k;
    }
  }
  if (res.best_seed < 0) throw Error(ErrorKind::OptimizerStalled, kModule, "every descent ended in a coincidence");
  return res;
}

}  // namespace excess
