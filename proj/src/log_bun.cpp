#include "bimodal/log_bun.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "bimodal/errors.hpp"

namespace bimodal {

double logbun_log_pdf(double t, const LogBunParams& theta) {
  if (!(t > 0.0)) throw DomainError("logbun_pdf: t must be positive, got " + std::to_string(t));
  const double x = std::log(t);
  return bun_log_pdf(x, theta) - x;
}

double logbun_pdf(double t, const LogBunParams& theta) {
  if (!(t > 0.0)) throw DomainError("logbun_pdf: t must be positive, got " + std::to_string(t));
  return bun_pdf(std::log(t), theta) / t;
}

double logbun_cdf(double t, const LogBunParams& theta) {
  theta.validate();
  if (!(t > 0.0)) return 0.0;
  return bun_cdf(std::log(t), theta);
}

double logbun_quantile(double p, const LogBunParams& theta) {
  return std::exp(bun_quantile(p, theta));
}

double logbun_moment(int r, const LogBunParams& theta) {
  if (r < 0) throw DomainError("logbun_moment: r must be non-negative, got " + std::to_string(r));
  if (r == 0) return 1.0;
  const BunParams standard{0.0, 1.0, theta.k, theta.a / theta.sigma};
  return std::exp(r * theta.mu) * bun_mgf(r * theta.sigma, standard);
}

double logbun_hazard(double t, const LogBunParams& theta) {
  if (!(t > 0.0)) throw DomainError("logbun_hazard: t must be positive, got " + std::to_string(t));
  auto hazard_at = [&](double x) { return std::exp(bun_log_pdf(x, theta) - x - std::log(bun_ccdf(x, theta))); };
  const double x = std::log(t);
  if (bun_ccdf(x, theta) > 0.0) return hazard_at(x);
  // Bisect in log t for the edge of representable survival.
  double lo = theta.mu + theta.a;
  while (!(bun_ccdf(lo, theta) > 0.0)) lo -= theta.sigma;
  double hi = x;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(hi)); ++i) {
    const double mid = 0.5 * (lo + hi);
    (bun_ccdf(mid, theta) > 0.0 ? lo : hi) = mid;
  }
  throw HazardOverflowError("logbun_hazard: survival underflows at t = " + std::to_string(t) +
                                "; last representable t = " + std::to_string(std::exp(lo)),
                            hazard_at(lo));
}

double logbun_loglik(std::span<const double> data, const LogBunParams& theta) {
  double log_sum = 0.0;  // Jacobian of t = e^x
  std::vector<double> logs;
  logs.reserve(data.size());
  for (double t : data) {
    if (!(t > 0.0)) throw DomainError("logbun_loglik: observations must be positive");
    logs.push_back(std::log(t));
    log_sum += logs.back();
  }
  return bun_loglik(logs, theta) - log_sum;
}

LogBunModel::LogBunModel(const LogBunParams& theta) : theta_(theta) { theta_.validate(); }

double LogBunModel::log_pdf(double t) const {
  if (!(t > 0.0)) return -std::numeric_limits<double>::infinity();
  return logbun_log_pdf(t, theta_);
}

std::vector<double> LogBunModel::sample(std::size_t n, RngStream& rng) const {
  std::vector<double> out = bun_sample(n, theta_, rng);
  for (double& v : out) v = std::exp(v);
  return out;
}

RealLineHint LogBunModel::integration_hint() const {
  RealLineHint h;
  h.center = std::exp(theta_.mu);
  h.scale = std::exp(theta_.mu) * theta_.sigma;
  h.breakpoints = {std::exp(theta_.mu)};
  return h;
}

}  // namespace bimodal
