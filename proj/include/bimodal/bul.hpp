#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bimodal/density_model.hpp"
#include "bimodal/rng.hpp"

namespace bimodal {

/// Bimodal-unimodal Laplace. With u = (x - mu)/sigma and b = a/sigma,
/// f(x) = k / (sigma c) (1 + (u - b)^2) exp(-k|u|), c = 2(1 + b^2 + 2/k^2).
struct BulParams {
  double mu = 0.0;
  double sigma = 1.0;
  double k = 1.0;
  double a = 0.0;

  /// Throws DomainError unless all fields are finite, sigma > 0 and k > 0.
  void validate() const;
};

struct BulAux {
  double b = 0.0;
  double c = 0.0;
};

BulAux bul_aux(const BulParams& theta);

double bul_log_pdf(double x, const BulParams& theta);
double bul_pdf(double x, const BulParams& theta);
/// Piecewise antiderivative of the density:
///   u <= 0: F = (k/c) e^{ku} [(1+(u-b)^2)/k - 2(u-b)/k^2 + 2/k^3]
///   u > 0:  1 - F = (k/c) e^{-ku} [(1+(u-b)^2)/k + 2(u-b)/k^2 + 2/k^3]
double bul_cdf(double x, const BulParams& theta);
double bul_ccdf(double x, const BulParams& theta);
double bul_quantile(double p, const BulParams& theta);

/// The published two-branch cdf exactly as printed, with its first
/// expression applied for x >= mu and its second for x < mu. Kept only for
/// the comparison test; see bul_cdf for the form in use.
double bul_cdf_printed(double x, const BulParams& theta);

/// E(Z^r) for Z = (X - mu)/sigma, r in 1..6, by expansion over the moments
/// of a Laplace(0, 1/k) variable W: E W^s = s!/k^s for even s, 0 for odd s.
double bul_moment(int r, const BulParams& theta);

/// Local maxima of the density, ascending. Closed form for a = 0, numeric
/// search otherwise.
std::vector<double> bul_modes(const BulParams& theta);

/// Inverse-cdf draws, one uniform per draw.
std::vector<double> bul_sample(std::size_t n, const BulParams& theta, RngStream& rng);

double bul_loglik(std::span<const double> data, const BulParams& theta);
/// d loglik / d(mu, sigma, k, a) with sign(0) = 0.
std::array<double, 4> bul_score(std::span<const double> data, const BulParams& theta);

class BulModel : public DensityModel {
 public:
  explicit BulModel(const BulParams& theta);

  std::string name() const override { return "bul"; }
  double log_pdf(double x) const override { return bul_log_pdf(x, theta_); }
  double cdf(double x) const override { return bul_cdf(x, theta_); }
  double quantile(double p) const override { return bul_quantile(p, theta_); }
  RealLineHint integration_hint() const override;
  const BulParams& params() const { return theta_; }

 private:
  BulParams theta_;
};

}  // namespace bimodal
