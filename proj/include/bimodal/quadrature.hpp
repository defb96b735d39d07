#pragma once

#include <functional>
#include <vector>

namespace bimodal {

struct Quadrature {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;

  /// Throws DomainError on non-positive tolerances or max_subdivisions < 1.
  void validate() const;
};

/// Where an integrand lives on the real line. Breakpoints mark kinks or
/// discontinuities; center/scale set the compactifying map x = c + s*tan(u)
/// used on infinite pieces.
struct RealLineHint {
  double center = 0.0;
  double scale = 1.0;
  std::vector<double> breakpoints;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
};

using ScalarFn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (10/21) quadrature over [lo, hi]. Either
/// limit may be infinite. Throws IntegrationError carrying the partial
/// estimate when max_subdivisions is exhausted.
QuadratureResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                                    const Quadrature& q = {}, const RealLineHint& hint = {});

double integrate(const ScalarFn& f, double lo, double hi, const Quadrature& q = {},
                 const RealLineHint& hint = {});

/// Integral over the whole real line.
double integrate_real_line(const ScalarFn& f, const Quadrature& q = {},
                           const RealLineHint& hint = {});

}  // namespace bimodal
