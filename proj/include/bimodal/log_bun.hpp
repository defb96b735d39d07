#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bimodal/bun.hpp"

namespace bimodal {

/// T = exp(X) with X ~ BUN(mu, sigma, k, a).
using LogBunParams = BunParams;

/// bun_pdf(log t)/t; throws DomainError for t <= 0.
double logbun_pdf(double t, const LogBunParams& theta);
double logbun_log_pdf(double t, const LogBunParams& theta);
/// bun_cdf(log t); 0 for t <= 0.
double logbun_cdf(double t, const LogBunParams& theta);
double logbun_quantile(double p, const LogBunParams& theta);
/// E(T^r) = E(e^{rX}) = e^{r mu} M_Z(r sigma); r = 0 gives 1.
double logbun_moment(int r, const LogBunParams& theta);
/// pdf/(1 - cdf). When the survival underflows to zero, throws
/// HazardOverflowError carrying the hazard at the largest t that still has
/// positive survival.
double logbun_hazard(double t, const LogBunParams& theta);

double logbun_loglik(std::span<const double> data, const LogBunParams& theta);

class LogBunModel : public DensityModel {
 public:
  explicit LogBunModel(const LogBunParams& theta);

  std::string name() const override { return "logbun"; }
  double log_pdf(double t) const override;
  double cdf(double t) const override { return logbun_cdf(t, theta_); }
  double quantile(double p) const override { return logbun_quantile(p, theta_); }
  std::vector<double> sample(std::size_t n, RngStream& rng) const override;
  Support support() const override { return {0.0, std::numeric_limits<double>::infinity()}; }
  RealLineHint integration_hint() const override;
  const LogBunParams& params() const { return theta_; }

 private:
  LogBunParams theta_;
};

}  // namespace bimodal
