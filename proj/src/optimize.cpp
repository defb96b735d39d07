#include "bimodal/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "bimodal/errors.hpp"
#include "bimodal/rng.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

void OptimizerConfig::validate() const {
  if (!(x_tol > 0.0) || !(f_tol > 0.0) || !(grad_tol > 0.0)) {
    throw DomainError("OptimizerConfig: tolerances must be strictly positive");
  }
  if (max_iters < 1) throw DomainError("OptimizerConfig: max_iters must be at least 1");
  if (n_starts < 1) throw DomainError("OptimizerConfig: n_starts must be at least 1");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class CountingFn {
 public:
  explicit CountingFn(const VectorFn& f) : f_(f) {}
  double operator()(const Vector& x) {
    ++count_;
    const double v = f_(x);
    return std::isfinite(v) ? v : kInf;
  }
  int count() const { return count_; }

 private:
  const VectorFn& f_;
  int count_ = 0;
};

struct SimplexRun {
  Vector x;
  double f = kInf;
  int iterations = 0;
  bool converged = false;
};

SimplexRun nelder_mead_once(CountingFn& f, const Vector& x0, const OptimizerConfig& cfg,
                            int max_iters) {
  const std::size_t n = x0.size();
  const double dn = static_cast<double>(n);
  // Dimension-adaptive coefficients (Gao & Han, 2012).
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / dn;
  const double rho = 0.75 - 0.5 / dn;
  const double shrink = 1.0 - 1.0 / dn;

  std::vector<Vector> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  vals[0] = f(x0);
  for (std::size_t i = 0; i < n; ++i) {
    const double step = 0.1 * std::max(std::fabs(x0[i]), 1.0);
    pts[i + 1][i] += step;
    vals[i + 1] = f(pts[i + 1]);
  }

  std::vector<std::size_t> order(n + 1);
  SimplexRun run;
  Vector centroid(n), xr(n), xe(n), xc(n);
  for (int it = 0; it < max_iters; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    const std::size_t best = order[0];
    const std::size_t worst = order[n];
    const std::size_t second = order[n - 1];
    run.iterations = it;

    double xspread = 0.0;
    double xscale = 1.0;
    for (std::size_t i = 0; i < n; ++i) xscale = std::max(xscale, std::fabs(pts[best][i]));
    for (std::size_t j = 0; j <= n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        xspread = std::max(xspread, std::fabs(pts[j][i] - pts[best][i]));
      }
    }
    const double fspread = vals[worst] - vals[best];
    if (std::isfinite(vals[best]) && fspread <= cfg.f_tol * std::max(1.0, std::fabs(vals[best])) &&
        xspread <= cfg.x_tol * xscale) {
      run.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) centroid[i] += pts[order[j]][i] / dn;
    }
    for (std::size_t i = 0; i < n; ++i) xr[i] = centroid[i] + alpha * (centroid[i] - pts[worst][i]);
    const double fr = f(xr);

    if (fr < vals[best]) {
      for (std::size_t i = 0; i < n; ++i) xe[i] = centroid[i] + gamma * (xr[i] - centroid[i]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[worst] = xe;
        vals[worst] = fe;
      } else {
        pts[worst] = xr;
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = xr;
      vals[worst] = fr;
      continue;
    }
    bool accepted = false;
    if (fr < vals[worst]) {
      for (std::size_t i = 0; i < n; ++i) xc[i] = centroid[i] + rho * (xr[i] - centroid[i]);
      const double fc = f(xc);
      if (fc <= fr) {
        pts[worst] = xc;
        vals[worst] = fc;
        accepted = true;
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) xc[i] = centroid[i] + rho * (pts[worst][i] - centroid[i]);
      const double fc = f(xc);
      if (fc < vals[worst]) {
        pts[worst] = xc;
        vals[worst] = fc;
        accepted = true;
      }
    }
    if (!accepted) {
      for (std::size_t j = 0; j <= n; ++j) {
        if (j == best) continue;
        for (std::size_t i = 0; i < n; ++i) {
          pts[j][i] = pts[best][i] + shrink * (pts[j][i] - pts[best][i]);
        }
        vals[j] = f(pts[j]);
      }
    }
  }
  const auto best_it = std::min_element(vals.begin(), vals.end());
  run.x = pts[static_cast<std::size_t>(best_it - vals.begin())];
  run.f = *best_it;
  return run;
}

// Restart the simplex from the incumbent until a restart stops improving.
SimplexRun nelder_mead(CountingFn& f, const Vector& x0, const OptimizerConfig& cfg,
                       int* restarts) {
  int budget = cfg.max_iters;
  SimplexRun best = nelder_mead_once(f, x0, cfg, budget);
  budget -= best.iterations;
  *restarts = 0;
  while (budget > 0 && *restarts < 25 && std::isfinite(best.f)) {
    SimplexRun again = nelder_mead_once(f, best.x, cfg, budget);
    budget -= std::max(again.iterations, 1);
    ++*restarts;
    const double gain = best.f - again.f;
    if (again.f < best.f) {
      const int iterations = best.iterations + again.iterations;
      best = again;
      best.iterations = iterations;
    }
    if (gain <= cfg.f_tol * std::max(1.0, std::fabs(best.f))) break;
  }
  return best;
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// BFGS over the coordinates with active[i] true; the rest stay fixed.
bool bfgs_polish(CountingFn& f, const GradientFn& grad, Vector& x, double& fx,
                 const std::vector<bool>& active, const OptimizerConfig& cfg, int* iterations) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (active[i]) idx.push_back(i);
  }
  const std::size_t m = idx.size();
  if (m == 0) return false;

  auto sub_grad = [&](const Vector& full) {
    const Vector g = grad(full);
    Vector out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = g[idx[j]];
    return out;
  };

  std::vector<double> h(m * m, 0.0);
  for (std::size_t j = 0; j < m; ++j) h[j * m + j] = 1.0;
  Vector g = sub_grad(x);
  bool improved = false;
  bool scaled = false;
  *iterations = 0;
  for (int it = 0; it < 200; ++it) {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::fabs(v));
    if (!std::isfinite(gmax)) break;
    if (gmax <= cfg.grad_tol * std::max(1.0, std::fabs(fx))) break;

    Vector d(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) d[r] -= h[r * m + c] * g[c];
    }
    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      std::fill(h.begin(), h.end(), 0.0);
      for (std::size_t j = 0; j < m; ++j) h[j * m + j] = 1.0;
      for (std::size_t j = 0; j < m; ++j) d[j] = -g[j];
      slope = dot(g, d);
    }
    double t = 1.0;
    Vector trial = x;
    double ft = kInf;
    bool found = false;
    for (int ls = 0; ls < 60; ++ls) {
      trial = x;
      for (std::size_t j = 0; j < m; ++j) trial[idx[j]] += t * d[j];
      ft = f(trial);
      if (ft <= fx + 1e-4 * t * slope) {
        found = true;
        break;
      }
      t *= 0.5;
    }
    if (!found) break;
    const Vector g_new = sub_grad(trial);
    Vector s(m), y(m);
    for (std::size_t j = 0; j < m; ++j) {
      s[j] = t * d[j];
      y[j] = g_new[j] - g[j];
    }
    const double sy = dot(s, y);
    x = trial;
    const double gain = fx - ft;
    fx = ft;
    g = g_new;
    improved = true;
    *iterations = it + 1;
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (!scaled) {
        const double gamma = sy / dot(y, y);
        for (std::size_t j = 0; j < m; ++j) h[j * m + j] = gamma;
        scaled = true;
      }
      Vector hy(m, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) hy[r] += h[r * m + c] * y[c];
      }
      const double yhy = dot(y, hy);
      for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
          h[r * m + c] += ((sy + yhy) * s[r] * s[c]) / (sy * sy) - (hy[r] * s[c] + s[r] * hy[c]) / sy;
        }
      }
    }
    if (gain <= 1e-15 * std::max(1.0, std::fabs(fx))) break;
  }
  return improved;
}

}  // namespace

MinimizeResult minimize(const Objective& objective, const Vector& x0, const OptimizerConfig& cfg) {
  cfg.validate();
  if (!objective.value) throw OptimizationError("minimize: objective has no value function");
  if (x0.empty()) throw OptimizationError("minimize: empty starting point");

  CountingFn f(objective.value);
  const RngStream root(cfg.seed);
  MinimizeResult best;
  best.f = kInf;
  for (int s = 0; s < cfg.n_starts; ++s) {
    Vector start = x0;
    if (s > 0) {
      RngStream sub = root.split(static_cast<std::uint64_t>(s));
      for (double& v : start) v += 0.5 * std::max(std::fabs(v), 1.0) * norm_quantile(sub.uniform());
    }
    int restarts = 0;
    SimplexRun run = nelder_mead(f, start, cfg, &restarts);

    MinimizeResult candidate;
    candidate.x = run.x;
    candidate.f = run.f;
    candidate.diagnostics.simplex_iterations = run.iterations;
    candidate.diagnostics.simplex_restarts = restarts;
    candidate.diagnostics.simplex_converged = run.converged;
    candidate.diagnostics.best_start = s;

    if (objective.gradient && std::isfinite(run.f)) {
      std::vector<bool> active(run.x.size(), true);
      if (objective.kinks) {
        const std::vector<bool> kinked = objective.kinks(run.x);
        for (std::size_t i = 0; i < active.size() && i < kinked.size(); ++i) active[i] = !kinked[i];
      }
      Vector x = run.x;
      double fx = run.f;
      int iters = 0;
      if (bfgs_polish(f, objective.gradient, x, fx, active, cfg, &iters) && fx <= run.f) {
        candidate.x = x;
        candidate.f = fx;
        candidate.diagnostics.polished = true;
        candidate.diagnostics.polish_iterations = iters;
      }
    }
    if (candidate.f < best.f) best = candidate;
  }
  best.diagnostics.evaluations = f.count();
  if (!std::isfinite(best.f)) {
    throw OptimizationError("minimize: objective was non-finite at every sampled point");
  }
  return best;
}

MinimizeResult minimize(const VectorFn& f, const std::optional<GradientFn>& grad,
                        const Vector& x0, const OptimizerConfig& cfg) {
  Objective obj;
  obj.value = f;
  if (grad) obj.gradient = *grad;
  return minimize(obj, x0, cfg);
}

Vector numeric_gradient(const VectorFn& f, const Vector& x) {
  Vector g(x.size());
  Vector xp = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = std::max(1e-6, 1e-7 * std::fabs(x[i]));
    xp[i] = x[i] + h;
    const double fp = f(xp);
    xp[i] = x[i] - h;
    const double fm = f(xp);
    xp[i] = x[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

}  // namespace bimodal
