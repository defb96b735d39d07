#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bimodal {

struct OptimizerConfig {
  double x_tol = 1e-10;
  double f_tol = 1e-12;
  double grad_tol = 1e-8;
  int max_iters = 20000;
  int n_starts = 1;
  std::uint64_t seed = 42;

  void validate() const;
};

using Vector = std::vector<double>;
using VectorFn = std::function<double(const Vector&)>;
using GradientFn = std::function<Vector(const Vector&)>;
/// Marks coordinates at which the objective is non-differentiable at x.
using KinkMaskFn = std::function<std::vector<bool>(const Vector&)>;

struct Objective {
  VectorFn value;
  GradientFn gradient;  // optional
  KinkMaskFn kinks;     // optional
};

struct OptimizerDiagnostics {
  int evaluations = 0;
  int simplex_iterations = 0;
  int simplex_restarts = 0;
  int polish_iterations = 0;
  bool simplex_converged = false;
  bool polished = false;
  int best_start = 0;
  std::string message;
};

struct MinimizeResult {
  Vector x;
  double f = 0.0;
  OptimizerDiagnostics diagnostics;
};

/// Nelder-Mead with restarts from the incumbent, followed by a BFGS polish
/// over the smooth coordinates when a gradient is supplied. Runs
/// cfg.n_starts starts (the first at x0, the rest jittered from x0 with
/// substreams of cfg.seed) and keeps the best. Throws OptimizationError if
/// no start produced a finite value.
MinimizeResult minimize(const Objective& objective, const Vector& x0,
                        const OptimizerConfig& cfg = {});

MinimizeResult minimize(const VectorFn& f, const std::optional<GradientFn>& grad,
                        const Vector& x0, const OptimizerConfig& cfg = {});

/// Central differences with h_i = max(1e-6, 1e-7*|x_i|).
Vector numeric_gradient(const VectorFn& f, const Vector& x);

}  // namespace bimodal
