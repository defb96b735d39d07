#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bimodal/density_model.hpp"
#include "bimodal/rng.hpp"

namespace bimodal {

/// Bimodal-unimodal Student t. Unlike BunParams, k and a are both in data
/// units here: the right branch (x >= mu) is centered at mu + a + k and the
/// left branch at mu + a - k.
struct BustParams {
  double mu = 0.0;
  double sigma = 1.0;
  double k = 0.0;
  double a = 0.0;
  double nu = 5.0;

  double s_minus() const { return sigma * sigma - 2.0 * a * k / nu; }
  double s_plus() const { return sigma * sigma + 2.0 * a * k / nu; }

  /// Throws DomainError unless every field is finite, sigma > 0, nu > 0 and
  /// nu sigma^2 > 2|a k| (both branch scales positive).
  void validate() const;
};

struct BustAux {
  double s_minus = 0.0;
  double s_plus = 0.0;
  double P = 0.0;        // (a + k) / sqrt(s_minus)
  double Q = 0.0;        // (k - a) / sqrt(s_plus)
  double D_minus = 0.0;  // D_nu(P)
  double D_plus = 0.0;   // D_nu(Q)
  double d_minus = 0.0;  // d_nu(P)
  double d_plus = 0.0;   // d_nu(Q)
  double log_D_minus = 0.0;
  double log_D_plus = 0.0;
  double log_delta = 0.0;
  double R_minus = 0.0;  // weight of the right component X1
  double R_plus = 0.0;   // weight of the left component X2
  double log_c = 0.0;    // log of the Student t constant
};

BustAux bust_aux(const BustParams& theta);

double bust_log_pdf(double x, const BustParams& theta);
double bust_pdf(double x, const BustParams& theta);
double bust_cdf(double x, const BustParams& theta);
double bust_quantile(double p, const BustParams& theta);

/// The a = 0 density written with a standardized shape k12:
/// d_nu(|x - mu|/sigma - k12) / (2 sigma D_nu(k12)). It equals bust_pdf with
/// k = sigma * k12.
double bust_symmetric_pdf(double x, double mu, double sigma, double k12, double nu);

/// Student t with location, scale and dof, restricted to (lower, upper).
struct TruncatedT {
  double center = 0.0;
  double scale = 1.0;
  double nu = 1.0;
  double lower = 0.0;
  double upper = 0.0;

  double pdf(double x) const;
};

struct BustMixture {
  double R_minus = 0.5;
  double R_plus = 0.5;
  TruncatedT right;  // X1 on (mu, inf)
  TruncatedT left;   // X2 on (-inf, mu)

  double pdf(double x) const;
};

BustMixture bust_mixture(const BustParams& theta);
std::vector<double> bust_sample(std::size_t n, const BustParams& theta, RngStream& rng);

/// E(X^r) = R_minus E(X1^r) + R_plus E(X2^r), with the truncated-t power
/// moments from the recursion in truncation point c:
///   M_j = [(j-1) nu M_{j-2} + c^{j-1} (nu + c^2) d_nu(c)] / (nu - j).
/// Throws MomentUndefinedError when nu <= r, DomainError when r < 1.
double bust_moment(int r, const BustParams& theta);

/// E(T^j | T > c) for T ~ t_nu and j = 0..4; entries with j >= nu are NaN.
std::array<double, 5> truncated_t_moments(double c, double nu);

/// The published closed forms, kept for comparison against bust_moment.
/// eta/lambda hold the printed eta_1..4 and lambda_1..4; display is the
/// printed cross-product sum over R_minus^i R_plus^{r-i} E(X1^i) E(X2^{r-i})
/// with the component moments built exactly as printed.
struct BustPrintedMoments {
  std::array<double, 4> eta{};
  std::array<double, 4> lambda{};
  double display = 0.0;
};

BustPrintedMoments bust_moment_printed(int r, const BustParams& theta);

/// Local maxima of the density, ascending.
std::vector<double> bust_modes(const BustParams& theta);

/// sup over a fixed probe grid of |bust_pdf(nu = nu_large) - bun_pdf| with the
/// BUN shape k/sigma (k is standardized in BUN). Requires nu_large >= 1e3.
double bust_limit_check(const BustParams& theta, double nu_large);

double bust_loglik(std::span<const double> data, const BustParams& theta);
/// d loglik / d(mu, sigma, k, a, nu). Observations with x == mu use the
/// right branch, which is also the branch whose derivative is reported.
std::array<double, 5> bust_score(std::span<const double> data, const BustParams& theta);

class BustModel : public DensityModel {
 public:
  explicit BustModel(const BustParams& theta);

  std::string name() const override { return "bust"; }
  double log_pdf(double x) const override { return bust_log_pdf(x, theta_); }
  double cdf(double x) const override { return bust_cdf(x, theta_); }
  double quantile(double p) const override { return bust_quantile(p, theta_); }
  std::vector<double> sample(std::size_t n, RngStream& rng) const override {
    return bust_sample(n, theta_, rng);
  }
  RealLineHint integration_hint() const override;
  const BustParams& params() const { return theta_; }

 private:
  BustParams theta_;
};

}  // namespace bimodal
