#include "bimodal/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "bimodal/errors.hpp"
#include "bimodal/quadrature.hpp"

namespace bimodal {

namespace {

void require_dof(double nu, const char* fn) {
  if (!(nu > 0.0) || std::isnan(nu)) {
    throw DomainError(std::string(fn) + ": degrees of freedom must be positive, got " +
                      std::to_string(nu));
  }
}

// log Phi(x) for x << 0 from the Mills-ratio asymptotic series.
double norm_log_cdf_asymptotic(double x) {
  const double x2 = x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    term *= -static_cast<double>(2 * k - 1) / x2;
    sum += term;
  }
  return norm_log_pdf(x) - std::log(-x) + std::log(sum);
}

}  // namespace

double norm_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double norm_log_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

double norm_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double norm_log_cdf(double x) {
  if (x > -30.0) {
    if (x > 5.0) return std::log1p(-0.5 * std::erfc(x / kSqrt2));
    return std::log(0.5 * std::erfc(-x / kSqrt2));
  }
  return norm_log_cdf_asymptotic(x);
}

double norm_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("norm_quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  return -kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double t_log_pdf(double x, double nu) {
  require_dof(nu, "t_log_pdf");
  return log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) - 0.5 * std::log(nu * kPi) -
         0.5 * (nu + 1.0) * std::log1p(x * x / nu);
}

double t_pdf(double x, double nu) { return std::exp(t_log_pdf(x, nu)); }

double t_cdf(double x, double nu) {
  require_dof(nu, "t_cdf");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return x > 0 ? 1.0 : 0.0;
  const double x2 = x * x;
  // Lower-tail mass P(T < -|x|) = I_{nu/(nu+x^2)}(nu/2, 1/2) / 2, evaluated
  // through whichever incomplete-beta argument keeps precision.
  double tail;
  if (nu < 2.0 * x2) {
    tail = 0.5 * boost::math::ibeta(0.5 * nu, 0.5, nu / (nu + x2));
  } else {
    tail = 0.5 * boost::math::ibetac(0.5, 0.5 * nu, x2 / (nu + x2));
  }
  return x < 0.0 ? tail : 1.0 - tail;
}

double t_quantile(double p, double nu) {
  require_dof(nu, "t_quantile");
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("t_quantile: p must lie in (0,1), got " + std::to_string(p));
  }
  return boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
}

double t_log_cdf(double x, double nu) {
  require_dof(nu, "t_log_cdf");
  if (x >= 0.0) return std::log1p(-t_cdf(-x, nu));
  const double p = t_cdf(x, nu);
  if (p > 1e-250) return std::log(p);
  // Deep lower tail: P(T < x) = I_z(nu/2, 1/2)/2 with z = nu/(nu + x^2),
  // summed as z^a (1-z)^b / (a B(a,b)) * 2F1(a+b, 1; a+1; z) in logs.
  const double a = 0.5 * nu;
  const double b = 0.5;
  const double log_ax = std::log(std::fabs(x));
  const double log_s = 2.0 * log_ax + std::log1p(nu / x / x);  // log(nu + x^2)
  const double z = std::exp(std::log(nu) - log_s);
  const double log_pre = a * (std::log(nu) - log_s) + b * (2.0 * log_ax - log_s) -
                         std::log(a) - (log_gamma(a) + log_gamma(b) - log_gamma(a + b));
  double term = 1.0;
  double sum = 1.0;
  for (int j = 0; j < 1000000 && term > 1e-17 * sum; ++j) {
    term *= (a + b + j) / (a + 1.0 + j) * z;
    sum += term;
  }
  return std::log(0.5) + log_pre + std::log(sum);
}

double t_cdf_dnu(double x, double nu) {
  require_dof(nu, "t_cdf_dnu");
  if (x == 0.0 || std::isinf(x)) return 0.0;
  // D_nu(0) = 1/2 for every nu, so the derivative is the integral of
  // d/dnu d_nu(t) over [0, x].
  const double c0 =
      0.5 * (digamma(0.5 * (nu + 1.0)) - digamma(0.5 * nu)) - 0.5 / nu;
  const double log_norm = log_gamma(0.5 * (nu + 1.0)) - log_gamma(0.5 * nu) -
                          0.5 * std::log(nu * kPi);
  auto integrand = [&](double t) {
    const double t2 = t * t;
    const double log_d = log_norm - 0.5 * (nu + 1.0) * std::log1p(t2 / nu);
    const double score = c0 - 0.5 * std::log1p(t2 / nu) + 0.5 * (nu + 1.0) * t2 / (nu * (nu + t2));
    return std::exp(log_d) * score;
  };
  Quadrature q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  return integrate(integrand, 0.0, x, q);
}

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("log_gamma: argument must be positive, got " + std::to_string(x));
  }
  return boost::math::lgamma(x);
}

double digamma(double x) {
  if (!(x > 0.0)) {
    throw DomainError("digamma: argument must be positive, got " + std::to_string(x));
  }
  return boost::math::digamma(x);
}

double log_sum_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = a > b ? a : b;
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

}  // namespace bimodal
