#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bimodal/density_model.hpp"
#include "bimodal/rng.hpp"

namespace bimodal {

/// Bimodal-unimodal normal. With z = (x - mu)/sigma and b = a/sigma the
/// density is proportional to exp(k|z|) phi(z - b).
struct BunParams {
  double mu = 0.0;
  double sigma = 1.0;
  double k = 0.0;
  double a = 0.0;

  /// Throws DomainError unless sigma > 0 and all fields are finite.
  void validate() const;
};

/// Quantities shared by the normalizer, moments and score. delta is kept
/// both directly and as log_delta; the direct values may overflow for
/// extreme k*a/sigma while the log form does not.
struct BunAux {
  double b = 0.0;       // a / sigma
  double p_t = 0.0;     // e^{kb} Phi(k + b)
  double n_t = 0.0;     // e^{-kb} Phi(k - b)
  double delta = 0.0;   // p_t + n_t
  double log_delta = 0.0;
  double p_k = 0.0;     // k + b
  double n_k = 0.0;     // k - b
  double n_d = 0.0;     // e^{-kb} phi(k - b)
  double p = 0.0;       // weight of the left (z < 0) component, n_t / delta
  double s = 0.0;       // (p_t - n_t) / delta
  double rho = 0.0;     // 2 e^{kb} phi(k + b) / delta
};

BunAux bun_aux(const BunParams& theta);

double bun_log_pdf(double x, const BunParams& theta);
double bun_pdf(double x, const BunParams& theta);
double bun_cdf(double x, const BunParams& theta);
/// 1 - cdf, evaluated directly so the upper tail keeps relative accuracy.
double bun_ccdf(double x, const BunParams& theta);
/// Bracketed root of bun_cdf - p. Throws DomainError unless 0 < p < 1.
double bun_quantile(double p, const BunParams& theta);

/// Normal(mean, sd) restricted to (lower, upper).
struct TruncatedNormal {
  double mean = 0.0;
  double sd = 1.0;
  double lower = 0.0;
  double upper = 0.0;

  double pdf(double z) const;
};

/// Two-piece representation of the standardized variable Z: with
/// probability p a N(b-k, 1) truncated to z < 0, otherwise a N(b+k, 1)
/// truncated to z > 0.
struct BunMixture {
  double p = 0.5;
  TruncatedNormal left;
  TruncatedNormal right;

  double pdf_z(double z) const;
};

BunMixture bun_mixture(const BunParams& theta);

/// Draws by component choice and inverse-CDF of the truncated normal; each
/// draw consumes two uniforms.
std::vector<double> bun_sample(std::size_t n, const BunParams& theta, RngStream& rng);

/// Moment generating function of Z = (X - mu)/sigma.
double bun_mgf(double t, const BunParams& theta);

struct BunMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

/// E(Z), ..., E(Z^4) for the standardized variable.
BunMoments bun_moments(const BunParams& theta);

/// Local maxima of the density in x, ascending.
std::vector<double> bun_modes(const BunParams& theta);

double bun_loglik(std::span<const double> data, const BunParams& theta);
/// d loglik / d(mu, sigma, k, a), with sign(0) = 0 at data points equal to mu.
std::array<double, 4> bun_score(std::span<const double> data, const BunParams& theta);

class BunModel : public DensityModel {
 public:
  explicit BunModel(const BunParams& theta);

  std::string name() const override { return "bun"; }
  double log_pdf(double x) const override { return bun_log_pdf(x, theta_); }
  double cdf(double x) const override { return bun_cdf(x, theta_); }
  double quantile(double p) const override { return bun_quantile(p, theta_); }
  std::vector<double> sample(std::size_t n, RngStream& rng) const override {
    return bun_sample(n, theta_, rng);
  }
  RealLineHint integration_hint() const override;
  const BunParams& params() const { return theta_; }

 private:
  BunParams theta_;
};

}  // namespace bimodal
