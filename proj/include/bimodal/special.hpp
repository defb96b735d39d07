#pragma once

// Scalar special functions shared by every family: standard normal,
// Student-t, log-gamma and digamma.

namespace bimodal {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kSqrt2 = 1.414213562373095048801688724209698079;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;
inline constexpr double kLogSqrt2Pi = 0.918938533204672741780329736405617640;

double norm_pdf(double x);
double norm_log_pdf(double x);
double norm_cdf(double x);
/// log Phi(x), accurate far into the lower tail.
double norm_log_cdf(double x);
/// Throws DomainError unless 0 < p < 1.
double norm_quantile(double p);

double t_pdf(double x, double nu);
double t_log_pdf(double x, double nu);
/// Regularized incomplete beta based; throws DomainError for nu <= 0.
double t_cdf(double x, double nu);
/// log t_cdf, finite far into the lower tail where t_cdf underflows.
double t_log_cdf(double x, double nu);
double t_quantile(double p, double nu);
/// d/dnu of t_cdf(x, nu) at fixed x.
double t_cdf_dnu(double x, double nu);

double log_gamma(double x);
double digamma(double x);

/// log(exp(a) + exp(b)) without overflow.
double log_sum_exp(double a, double b);

/// Sign with sign(0) = 0.
inline double sign0(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

}  // namespace bimodal
