#include "bimodal/bul.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bimodal/constructors.hpp"
#include "bimodal/errors.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

void BulParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(k) || !std::isfinite(a)) {
    throw DomainError("BUL parameters must be finite");
  }
  if (!(sigma > 0.0)) throw DomainError("BUL sigma must be positive, got " + std::to_string(sigma));
  if (!(k > 0.0)) throw DomainError("BUL k must be positive, got " + std::to_string(k));
}

BulAux bul_aux(const BulParams& t) {
  t.validate();
  const double b = t.a / t.sigma;
  return {b, 2.0 * (1.0 + b * b + 2.0 / (t.k * t.k))};
}

double bul_log_pdf(double x, const BulParams& t) {
  const BulAux aux = bul_aux(t);
  const double u = (x - t.mu) / t.sigma;
  const double w = u - aux.b;
  return std::log(t.k) - std::log(t.sigma) - std::log(aux.c) + std::log1p(w * w) - t.k * std::fabs(u);
}

double bul_pdf(double x, const BulParams& t) { return std::exp(bul_log_pdf(x, t)); }

namespace {

// Tail mass on the side of u that lies away from zero.
double tail_mass(double u, const BulParams& t, const BulAux& aux) {
  const double k = t.k;
  const double w = u - aux.b;
  const double s = u <= 0.0 ? -1.0 : 1.0;
  const double bracket = (1.0 + w * w) / k + s * 2.0 * w / (k * k) + 2.0 / (k * k * k);
  return k / aux.c * std::exp(-k * std::fabs(u)) * bracket;
}

}  // namespace

double bul_cdf(double x, const BulParams& t) {
  const BulAux aux = bul_aux(t);
  const double u = (x - t.mu) / t.sigma;
  return u <= 0.0 ? tail_mass(u, t, aux) : 1.0 - tail_mass(u, t, aux);
}

double bul_ccdf(double x, const BulParams& t) {
  const BulAux aux = bul_aux(t);
  const double u = (x - t.mu) / t.sigma;
  return u > 0.0 ? tail_mass(u, t, aux) : 1.0 - tail_mass(u, t, aux);
}

double bul_quantile(double p, const BulParams& t) {
  require_probability(p, "bul_quantile");
  t.validate();
  return invert_cdf([&](double x) { return bul_cdf(x, t); }, p, t.mu, t.sigma * std::max(1.0, 1.0 / t.k));
}

double bul_cdf_printed(double x, const BulParams& t) {
  const BulAux aux = bul_aux(t);
  const double k = t.k;
  const double b = aux.b;
  const double c = aux.c;
  const double u = (x - t.mu) / t.sigma;
  const double q = b * b / k + 1.0 / k;
  if (x >= t.mu) {
    return k / c * (u * u / k - 2.0 / k * (b + 1.0 / k) * (u - 1.0 / k) + q) * std::exp(k * u);
  }
  const double e = std::exp(-k * u);
  return k / c * (2.0 / (k * k) * (b + 1.0 / k) + q) + k / c * (q * (1.0 - e) - u * u / k * e) -
         2.0 * k / c * (b - 1.0 / k) * (1.0 - e - k * u * e) / (k * k);
}

double bul_moment(int r, const BulParams& t) {
  if (r < 1 || r > 6) throw DomainError("bul_moment: r must be in 1..6, got " + std::to_string(r));
  const BulAux aux = bul_aux(t);
  auto w_moment = [&](int s) {
    if (s % 2 != 0) return 0.0;
    return std::tgamma(s + 1.0) / std::pow(t.k, s);
  };
  return 2.0 / aux.c *
         ((1.0 + aux.b * aux.b) * w_moment(r) - 2.0 * aux.b * w_moment(r + 1) + w_moment(r + 2));
}

std::vector<double> bul_modes(const BulParams& t) {
  const BulAux aux = bul_aux(t);
  if (t.a == 0.0) {
    // Stationary points on u > 0 solve k u^2 - 2u + k = 0; the larger root
    // is a maximum, the smaller a minimum, and the kink at u = 0 stays a
    // local maximum only while those roots exist.
    if (t.k >= 1.0) return {t.mu};
    const double u = (1.0 + std::sqrt(1.0 - t.k * t.k)) / t.k;
    return {t.mu - t.sigma * u, t.mu, t.mu + t.sigma * u};
  }
  const double reach = 2.0 / t.k + 2.0;
  const double lo = t.mu + t.sigma * (std::min(0.0, aux.b) - reach);
  const double hi = t.mu + t.sigma * (std::max(0.0, aux.b) + reach);
  auto log_f = [&](double x) { return bul_log_pdf(x, t); };
  std::vector<double> found = numeric_modes(log_f, lo, hi, t.mu, t.sigma);
  // The kink at mu is a maximum when k > 2|b|/(1+b^2); snap grid hits to it.
  for (double& m : found) {
    if (std::fabs(m - t.mu) < 1e-7 * t.sigma) m = t.mu;
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<double> bul_sample(std::size_t n, const BulParams& t, RngStream& rng) {
  t.validate();
  std::vector<double> out(n);
  for (double& v : out) v = bul_quantile(rng.uniform(), t);
  return out;
}

double bul_loglik(std::span<const double> data, const BulParams& t) {
  const BulAux aux = bul_aux(t);
  const double n = static_cast<double>(data.size());
  double abs_sum = 0.0;
  double log_sum = 0.0;
  for (double x : data) {
    abs_sum += std::fabs((x - t.mu) / t.sigma);
    const double r = (x - t.mu - t.a) / t.sigma;
    log_sum += std::log1p(r * r);
  }
  return n * std::log(t.k / (2.0 * t.sigma)) - n * std::log(0.5 * aux.c) - t.k * abs_sum + log_sum;
}

std::array<double, 4> bul_score(std::span<const double> data, const BulParams& t) {
  const BulAux aux = bul_aux(t);
  const double n = static_cast<double>(data.size());
  const double sigma = t.sigma;
  const double k = t.k;
  const double C = 0.5 * aux.c;
  double sign_sum = 0.0;
  double abs_sum = 0.0;
  double r_term = 0.0;
  double r2_term = 0.0;
  for (double x : data) {
    sign_sum += sign0(x - t.mu);
    abs_sum += std::fabs(x - t.mu);
    const double r = (x - t.mu - t.a) / sigma;
    r_term += r / (1.0 + r * r);
    r2_term += r * r / (1.0 + r * r);
  }
  std::array<double, 4> g{};
  g[0] = k / sigma * sign_sum - 2.0 / sigma * r_term;
  g[1] = -n / sigma + 2.0 * n * t.a * t.a / (sigma * sigma * sigma * C) + k / (sigma * sigma) * abs_sum -
         2.0 / sigma * r2_term;
  g[2] = n / k + 4.0 * n / (k * k * k * C) - abs_sum / sigma;
  g[3] = -2.0 * n * t.a / (sigma * sigma * C) - 2.0 / sigma * r_term;
  return g;
}

BulModel::BulModel(const BulParams& theta) : theta_(theta) { theta_.validate(); }

RealLineHint BulModel::integration_hint() const {
  RealLineHint h;
  h.center = theta_.mu;
  h.scale = theta_.sigma / std::min(1.0, theta_.k);
  h.breakpoints = {theta_.mu};
  return h;
}

}  // namespace bimodal
