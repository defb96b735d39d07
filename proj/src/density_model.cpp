#include "bimodal/density_model.hpp"

#include <cmath>
#include <string>

#include "bimodal/errors.hpp"
#include "bimodal/roots.hpp"

namespace bimodal {

double DensityModel::pdf(double x) const { return std::exp(log_pdf(x)); }

std::vector<double> DensityModel::sample(std::size_t n, RngStream& rng) const {
  std::vector<double> out(n);
  for (double& v : out) v = quantile(rng.uniform());
  return out;
}

void require_probability(double p, const char* fn) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError(std::string(fn) + ": probability must lie in (0,1), got " + std::to_string(p));
  }
}

double invert_cdf(const std::function<double(double)>& cdf, double p, double center,
                  double scale) {
  require_probability(p, "invert_cdf");
  double lo = center - scale;
  double hi = center + scale;
  double step = scale;
  for (int i = 0; i < 2000 && cdf(lo) > p; ++i) {
    hi = lo;
    step *= 2.0;
    lo = center - step;
  }
  step = scale;
  for (int i = 0; i < 2000 && cdf(hi) < p; ++i) {
    lo = hi;
    step *= 2.0;
    hi = center + step;
  }
  return find_root([&](double x) { return cdf(x) - p; }, lo, hi);
}

}  // namespace bimodal
