#include <cmath>
#include <limits>
#include <vector>

#include "bimodal/errors.hpp"
#include "bimodal/log_bun.hpp"
#include "bimodal/special.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace bimodal;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integrals over (0, inf) are taken in x = log t so the oracle sees the
// BUN-shaped integrand; the Jacobian e^x is applied explicitly.
double over_t(const std::function<double(double)>& g, const LogBunParams& th, double upper_log = kInf) {
  auto in_x = [&](double x) {
    const double t = std::exp(x);
    return t > 0.0 && t < kInf ? g(t) * t : 0.0;
  };
  return oracle::integral(in_x, -kInf, upper_log, {th.mu, th.mu + th.a});
}

std::vector<LogBunParams> grid() {
  return {{0.0, 0.5, 1.0, 0.0}, {1.0, 1.0, 1.0, 0.0}, {0.3, 0.4, -0.5, 0.2}, {-0.5, 0.3, 2.0, -0.3},
          {2.0, 0.6, 0.5, 0.4}};
}

}  // namespace

TEST_CASE("density") {
  for (const LogBunParams& th : grid()) {
    CHECK(std::fabs(over_t([&](double t) { return logbun_pdf(t, th); }, th) - 1.0) < 1e-8);
    for (double t : {0.2, 1.0, 3.7}) {
      CHECK(logbun_pdf(t, th) == doctest::Approx(bun_pdf(std::log(t), th) / t).epsilon(1e-15));
      CHECK(logbun_log_pdf(t, th) == doctest::Approx(std::log(logbun_pdf(t, th))).epsilon(1e-13));
    }
  }
  const LogBunParams ln{0.4, 0.8, 0.0, 0.0};
  for (double t : {0.1, 1.0, 5.0}) {
    const double lognormal = norm_pdf((std::log(t) - 0.4) / 0.8) / (0.8 * t);
    CHECK(logbun_pdf(t, ln) == doctest::Approx(lognormal).epsilon(1e-14));
  }
  CHECK_THROWS_AS(logbun_pdf(0.0, ln), DomainError);
  CHECK_THROWS_AS(logbun_pdf(-1.0, ln), DomainError);
}

TEST_CASE("cdf") {
  CHECK(logbun_cdf(std::exp(1.5), LogBunParams{1.5, 0.7, 1.2, 0.0}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(logbun_cdf(0.0, LogBunParams{}) == 0.0);
  CHECK(logbun_cdf(-2.0, LogBunParams{}) == 0.0);
  for (const LogBunParams& th : grid()) {
    for (double t : {0.3, 1.0, 2.5, 9.0}) {
      const double ref = over_t([&](double s) { return logbun_pdf(s, th); }, th, std::log(t));
      CHECK(std::fabs(logbun_cdf(t, th) - ref) < 1e-8);
    }
    double prev = 0.0;
    for (int i = 1; i <= 200; ++i) {
      const double f = logbun_cdf(0.05 * i, th);
      CHECK(f >= prev);
      prev = f;
    }
    for (double p : {0.05, 0.5, 0.95}) CHECK(logbun_cdf(logbun_quantile(p, th), th) == doctest::Approx(p).epsilon(1e-11));
  }
}

TEST_CASE("moments use e^{r mu} M_Z(r sigma)") {
  CHECK(logbun_moment(0, LogBunParams{0.3, 0.5, 1, 0}) == 1.0);
  CHECK(logbun_moment(1, LogBunParams{0.3, 0.5, 0, 0}) == doctest::Approx(std::exp(0.3 + 0.125)).epsilon(1e-14));
  for (const LogBunParams& th : grid()) {
    for (int r : {1, 2}) {
      const double ref = over_t([&](double t) { return std::pow(t, r) * logbun_pdf(t, th); }, th);
      CAPTURE(r);
      CHECK(std::fabs(logbun_moment(r, th) - ref) < 1e-6 * std::max(1.0, ref));
    }
  }
  // The published form exp(-r mu/sigma) M_Z(r/sigma) differs once mu != 0 or
  // sigma != 1.
  const LogBunParams th{0.0, 0.5, 1.0, 0.0};
  const double printed = bun_mgf(1.0 / th.sigma, BunParams{0, 1, th.k, 0});
  CHECK(std::fabs(printed - logbun_moment(1, th)) > 0.1);
}

TEST_CASE("hazard") {
  const LogBunParams th{1.0, 1.0, 1.0, 0.0};
  const double surv = over_t([&](double s) { return logbun_pdf(s, th); }, th) -
                      over_t([&](double s) { return logbun_pdf(s, th); }, th, 0.0);
  CHECK(logbun_hazard(1.0, th) == doctest::Approx(logbun_pdf(1.0, th) / surv).epsilon(1e-8));
  for (const LogBunParams& g : grid()) {
    for (int i = 1; i <= 100; ++i) CHECK(logbun_hazard(0.1 * i, g) >= 0.0);
  }
  // Lognormal hazard rises then falls.
  const LogBunParams ln{0.0, 1.0, 0.0, 0.0};
  CHECK(logbun_hazard(0.5, ln) > logbun_hazard(0.05, ln));
  CHECK(logbun_hazard(20.0, ln) < logbun_hazard(0.6, ln));

  const LogBunParams steep{0.0, 0.05, 4.0, 0.0};
  try {
    logbun_hazard(1e6, steep);
    FAIL("expected HazardOverflowError");
  } catch (const HazardOverflowError& e) {
    CHECK(std::isfinite(e.last_finite()));
    CHECK(e.last_finite() > 0.0);
  }
  CHECK_THROWS_AS(logbun_hazard(0.0, th), DomainError);
}

TEST_CASE("model wrapper") {
  const LogBunModel m(LogBunParams{0.5, 0.4, 1.0, 0.1});
  CHECK(m.support().lower == 0.0);
  CHECK(m.log_pdf(-1.0) == -kInf);
  RngStream rng(1);
  for (double v : m.sample(1000, rng)) CHECK(v > 0.0);
  const std::vector<double> data{0.8, 1.3, 2.2};
  double direct = 0.0;
  for (double t : data) direct += std::log(logbun_pdf(t, m.params()));
  CHECK(logbun_loglik(data, m.params()) == doctest::Approx(direct).epsilon(1e-13));
}
