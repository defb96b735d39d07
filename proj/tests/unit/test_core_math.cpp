#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bimodal/errors.hpp"
#include "bimodal/optimize.hpp"
#include "bimodal/quadrature.hpp"
#include "bimodal/rng.hpp"
#include "bimodal/roots.hpp"
#include "bimodal/special.hpp"
#include "doctest.h"

using namespace bimodal;

namespace {

// Maclaurin series for erf in long double; converges fast for |x| <= 3.
long double erf_series(long double x) {
  long double term = x;
  long double sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    sum += term / (2 * n + 1);
  }
  return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * sum;
}

// psi(1) from the recurrence psi(x) = psi(x + N) - sum 1/(x + j) and the
// asymptotic expansion at x + N.
long double digamma_oracle(long double x) {
  const int shift = 40;
  long double acc = 0.0L;
  for (int j = 0; j < shift; ++j) acc += 1.0L / (x + j);
  const long double z = x + shift;
  const long double z2 = 1.0L / (z * z);
  const long double tail = std::log(z) - 0.5L / z -
                           z2 * (1.0L / 12 - z2 * (1.0L / 120 - z2 * (1.0L / 252 - z2 / 240)));
  return tail - acc;
}

}  // namespace

TEST_CASE("normal distribution functions") {
  CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-16));
  CHECK(norm_pdf(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
  CHECK(std::fabs(norm_cdf(1.0) - 0.8413447460685429) < 1e-15);

  const double oracle = static_cast<double>(0.5L + 0.5L * erf_series(1.0L / std::sqrt(2.0L)));
  CHECK(std::fabs(norm_cdf(1.0) - oracle) < 1e-15);
  const double quad = 0.5 + boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                [](double t) { return norm_pdf(t); }, 0.0, 1.0, 15, 1e-15);
  CHECK(std::fabs(norm_cdf(1.0) - quad) < 1e-14);

  for (double p : {1e-12, 1e-6, 0.01, 0.3, 0.5, 0.77, 0.99, 1 - 1e-9}) {
    CHECK(std::fabs(norm_cdf(norm_quantile(p)) - p) < 1e-14);
  }
  CHECK_THROWS_AS(norm_quantile(0.0), DomainError);
  CHECK_THROWS_AS(norm_quantile(1.0), DomainError);
  CHECK_THROWS_AS(norm_quantile(std::nan("")), DomainError);

  for (double x = -8.0; x <= 8.0; x += 0.125) {
    CHECK(std::fabs(norm_cdf(x) + norm_cdf(-x) - 1.0) < 1e-15);
  }
  double prev = 0.0;
  for (double x = -10.0; x <= 10.0; x += 0.01) {
    const double c = norm_cdf(x);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("log normal cdf stays finite and continuous in the far tail") {
  CHECK(norm_log_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(std::fabs(norm_log_cdf(-10.0) - std::log(norm_cdf(-10.0))) < 1e-12);
  CHECK(std::fabs(norm_log_cdf(-29.999) - norm_log_cdf(-30.001)) < 0.1);
  const double below = norm_log_cdf(-30.0000001);
  const double above = norm_log_cdf(-29.9999999);
  CHECK(std::fabs(below - above) < 1e-5);
  CHECK(std::isfinite(norm_log_cdf(-1e3)));
  CHECK(norm_log_cdf(10.0) < 0.0);
  CHECK(norm_log_cdf(10.0) == doctest::Approx(-7.619853024160527e-24).epsilon(1e-10));
}

TEST_CASE("student t distribution functions") {
  CHECK(t_cdf(0.0, 5.0) == 0.5);
  CHECK(t_pdf(0.0, 1.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(t_cdf(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(t_pdf(1.0, -1.0), DomainError);
  CHECK_THROWS_AS(t_quantile(0.5, 0.0), DomainError);

  for (double nu : {0.7, 1.0, 2.5, 10.0, 300.0}) {
    for (double p : {1e-6, 0.02, 0.5, 0.9, 0.999}) {
      const double q = t_quantile(p, nu);
      CHECK(std::fabs(t_cdf(q, nu) - p) < 1e-12 * std::max(1.0, p / 1e-3));
    }
    // cdf against quadrature of pdf
    for (double x : {-3.0, -0.4, 1.2, 6.0}) {
      const double quad = integrate([&](double t) { return t_pdf(t, nu); }, 0.0, x);
      CHECK(std::fabs(t_cdf(x, nu) - 0.5 - quad) < 1e-10);
    }
  }

  double sup = 0.0;
  for (double x = -6.0; x <= 6.0; x += 0.01) {
    sup = std::max(sup, std::fabs(t_cdf(x, 1e6) - norm_cdf(x)));
  }
  CHECK(sup < 1e-5);
}

TEST_CASE("log t cdf in the deep lower tail") {
  for (double nu : {0.7, 3.0, 40.0}) {
    for (double x : {-5.0, -0.2, 0.0, 2.0}) CHECK(t_log_cdf(x, nu) == doctest::Approx(std::log(t_cdf(x, nu))).epsilon(1e-13));
  }
  // Cauchy: P(T < x) = 1/2 + atan(x)/pi ~ 1/(pi |x|) far out.
  CHECK(t_log_cdf(-1e260, 1.0) == doctest::Approx(-std::log(kPi) - 260.0 * std::log(10.0)).epsilon(1e-14));
  // nu = 2: P(T < x) = (1 - |x|/sqrt(2 + x^2))/2 ~ 1/(2 x^2).
  CHECK(t_log_cdf(-1e130, 2.0) == doctest::Approx(-std::log(2.0) - 260.0 * std::log(10.0)).epsilon(1e-14));
  // Slope of log T equals t_pdf/t_cdf on both sides of the underflow switch.
  for (double nu : {50.0, 700.0}) {
    for (double x : {-40.0, -75.0, -200.0}) {
      const double h = 1e-5 * std::fabs(x);
      const double fd = (t_log_cdf(x + h, nu) - t_log_cdf(x - h, nu)) / (2 * h);
      const double exact = std::exp(t_log_pdf(x, nu) - t_log_cdf(x, nu));
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(std::isfinite(t_log_cdf(x, nu)));
      CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}

TEST_CASE("derivative of the t cdf in nu matches finite differences") {
  for (double nu : {1.5, 4.0, 30.0}) {
    for (double x : {-2.0, 0.3, 1.7}) {
      const double h = 1e-5 * nu;
      const double fd = (t_cdf(x, nu + h) - t_cdf(x, nu - h)) / (2 * h);
      CHECK(std::fabs(t_cdf_dnu(x, nu) - fd) < 1e-8);
    }
  }
  CHECK(t_cdf_dnu(0.0, 3.0) == 0.0);
}

TEST_CASE("log gamma and digamma") {
  CHECK(std::fabs(log_gamma(1.0)) < 1e-15);
  CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-14));
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-14));
  CHECK(std::fabs(digamma(1.0) - static_cast<double>(digamma_oracle(1.0L))) < 1e-14);
  CHECK(std::fabs(digamma(3.7) - static_cast<double>(digamma_oracle(3.7L))) < 1e-14);
  for (double x = 0.5; x < 40.0; x *= 1.7) {
    const double h = 1e-5;
    const double fd = (log_gamma(x + h) - log_gamma(x - h)) / (2 * h);
    CHECK(std::fabs(digamma(x) - fd) < 1e-6);
  }
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(digamma(-1.0), DomainError);
}

TEST_CASE("log_sum_exp") {
  CHECK(log_sum_exp(0.0, 0.0) == doctest::Approx(std::log(2.0)));
  CHECK(log_sum_exp(1000.0, 1000.0) == doctest::Approx(1000.0 + std::log(2.0)));
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(ninf, 3.0) == 3.0);
  CHECK(log_sum_exp(ninf, ninf) == ninf);
}

TEST_CASE("real-line quadrature") {
  CHECK(std::fabs(integrate_real_line([](double x) { return norm_pdf(x); }) - 1.0) < 1e-10);
  CHECK(std::fabs(integrate_real_line([](double x) { return x * norm_pdf(x); })) < 1e-10);
  CHECK(std::fabs(integrate_real_line([](double x) { return x * x * norm_pdf(x); }) - 1.0) < 1e-8);
  // Cauchy tails
  CHECK(std::fabs(integrate_real_line([](double x) { return t_pdf(x, 1.0); }) - 1.0) < 1e-9);
  // kinked integrand with breakpoint
  RealLineHint hint;
  hint.breakpoints = {0.0};
  CHECK(std::fabs(integrate_real_line([](double x) { return 0.5 * std::exp(-std::fabs(x)); },
                                      Quadrature{}, hint) -
                  1.0) < 1e-10);
  // reversed limits
  CHECK(integrate([](double x) { return x; }, 1.0, 0.0) == doctest::Approx(-0.5));

  Quadrature tight;
  tight.max_subdivisions = 2;
  tight.abs_tol = 1e-15;
  tight.rel_tol = 1e-15;
  try {
    integrate([](double x) { return std::sqrt(std::fabs(std::sin(40 * x))); }, 0.0, 10.0, tight);
    FAIL("expected IntegrationError");
  } catch (const IntegrationError& e) {
    CHECK(std::isfinite(e.partial_estimate()));
    CHECK(e.partial_estimate() > 0.0);
  }
  Quadrature bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = Quadrature{};
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("root finding") {
  CHECK(find_root([](double x) { return x - 2.0; }, 0.0, 5.0) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(std::fabs(find_root([](double x) { return norm_cdf(x) - 0.5; }, -5.0, 5.0)) < 1e-13);
  CHECK(find_root([](double x) { return t_cdf(x, 1.0) - 0.75; }, 0.0, 10.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketError);

  const double m = argmax_on_interval([](double x) { return -(x - 0.3) * (x - 0.3); }, -2.0, 2.0);
  CHECK(m == doctest::Approx(0.3).epsilon(1e-7));
  const auto peaks = grid_local_maxima(
      [](double x) { return norm_pdf(x - 1.0) + norm_pdf(x + 1.0) * 0.9 + 0.0 * x; }, -6.0, 6.0);
  // Two components one unit apart from zero merge into a single mode.
  CHECK(peaks.size() == 1);
  const auto two = grid_local_maxima([](double x) { return norm_pdf(x - 2.0) + norm_pdf(x + 2.0); },
                                     -6.0, 6.0);
  REQUIRE(two.size() == 2);
  // Stationary point of the mixture: (x-2)phi(x-2) + (x+2)phi(x+2) = 0.
  const double stationary = find_root(
      [](double x) { return (x - 2.0) * norm_pdf(x - 2.0) + (x + 2.0) * norm_pdf(x + 2.0); }, 1.5,
      2.5);
  CHECK(std::fabs(two[1] - stationary) < 1e-7);
  CHECK(std::fabs(two[0] + two[1]) < 1e-7);
}

TEST_CASE("rng streams") {
  RngStream a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.uniform() != c.uniform());
  const RngStream root(7);
  RngStream s1 = root.split(1), s1b = root.split(1), s2 = root.split(2);
  const double x = s1.uniform();
  CHECK(x == s1b.uniform());
  CHECK(x != s2.uniform());
}

TEST_CASE("minimize") {
  OptimizerConfig cfg;
  auto quad = minimize([](const Vector& x) { return (x[0] - 3.0) * (x[0] - 3.0); }, std::nullopt,
                       {0.0}, cfg);
  CHECK(std::fabs(quad.x[0] - 3.0) < 1e-6);

  auto rosen = [](const Vector& x) {
    return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2);
  };
  auto r = minimize(rosen, std::nullopt, {-1.2, 1.0}, cfg);
  CHECK(std::fabs(r.x[0] - 1.0) < 1e-4);
  CHECK(std::fabs(r.x[1] - 1.0) < 1e-4);

  GradientFn g = [&](const Vector& x) { return numeric_gradient(rosen, x); };
  OptimizerConfig multi = cfg;
  multi.n_starts = 4;
  auto r1 = minimize(rosen, g, {-1.2, 1.0}, multi);
  auto r2 = minimize(rosen, g, {-1.2, 1.0}, multi);
  CHECK(r1.x == r2.x);
  CHECK(r1.f == r2.f);
  CHECK(std::fabs(r1.x[0] - 1.0) < 1e-6);

  CHECK_THROWS_AS(
      minimize([](const Vector&) { return std::nan(""); }, std::nullopt, {0.0, 0.0}, cfg),
      OptimizationError);
  OptimizerConfig bad;
  bad.n_starts = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = OptimizerConfig{};
  bad.x_tol = -1;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("numeric gradient") {
  CHECK(numeric_gradient([](const Vector& x) { return x[0] * x[0]; }, {3.0})[0] ==
        doctest::Approx(6.0).epsilon(1e-7));
  const Vector g = numeric_gradient([](const Vector& x) { return x[0] * x[1]; }, {2.0, 5.0});
  CHECK(std::fabs(g[0] - 5.0) < 1e-6);
  CHECK(std::fabs(g[1] - 2.0) < 1e-6);
}
