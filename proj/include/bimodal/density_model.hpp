#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "bimodal/quadrature.hpp"
#include "bimodal/rng.hpp"

namespace bimodal {

struct Support {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

/// Common contract for every univariate distribution in the library.
class DensityModel {
 public:
  virtual ~DensityModel() = default;

  virtual std::string name() const = 0;
  virtual double log_pdf(double x) const = 0;
  virtual double pdf(double x) const;
  virtual double cdf(double x) const = 0;
  /// Throws DomainError unless 0 < p < 1.
  virtual double quantile(double p) const = 0;
  /// Default: inverse-CDF draws, one uniform per value.
  virtual std::vector<double> sample(std::size_t n, RngStream& rng) const;
  virtual Support support() const { return {}; }
  /// Center, scale and kink locations for quadrature over the support.
  virtual RealLineHint integration_hint() const { return {}; }
};

/// Inverts a continuous nondecreasing cdf by expanding a bracket around
/// `center` in steps of `scale` and refining with find_root.
double invert_cdf(const std::function<double(double)>& cdf, double p, double center, double scale);

/// Throws DomainError unless 0 < p < 1.
void require_probability(double p, const char* fn);

}  // namespace bimodal
