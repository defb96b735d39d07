#include "bimodal/bun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bimodal/errors.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

void BunParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(k) || !std::isfinite(a)) {
    throw DomainError("BUN parameters must be finite");
  }
  if (!(sigma > 0.0)) throw DomainError("BUN sigma must be positive, got " + std::to_string(sigma));
}

BunAux bun_aux(const BunParams& theta) {
  theta.validate();
  BunAux x;
  const double k = theta.k;
  const double b = theta.a / theta.sigma;
  x.b = b;
  x.p_k = k + b;
  x.n_k = k - b;
  const double log_pt = k * b + norm_log_cdf(k + b);
  const double log_nt = -k * b + norm_log_cdf(k - b);
  x.log_delta = log_sum_exp(log_pt, log_nt);
  x.p_t = std::exp(log_pt);
  x.n_t = std::exp(log_nt);
  x.delta = std::exp(x.log_delta);
  x.n_d = std::exp(-k * b + norm_log_pdf(k - b));
  x.p = std::exp(log_nt - x.log_delta);
  x.s = std::exp(log_pt - x.log_delta) - x.p;
  x.rho = 2.0 * std::exp(k * b + norm_log_pdf(k + b) - x.log_delta);
  return x;
}

namespace {

double log_pdf_with(double x, const BunParams& t, const BunAux& aux) {
  const double z = (x - t.mu) / t.sigma;
  return -0.5 * t.k * t.k - aux.log_delta + t.k * std::fabs(z) - std::log(t.sigma) +
         norm_log_pdf(z - aux.b);
}

}  // namespace

double bun_log_pdf(double x, const BunParams& theta) {
  return log_pdf_with(x, theta, bun_aux(theta));
}

double bun_pdf(double x, const BunParams& theta) { return std::exp(bun_log_pdf(x, theta)); }

double bun_cdf(double x, const BunParams& theta) {
  const BunAux aux = bun_aux(theta);
  const double z = (x - theta.mu) / theta.sigma;
  const double k = theta.k;
  if (z <= 0.0) return std::exp(-k * aux.b + norm_log_cdf(z + k - aux.b) - aux.log_delta);
  return 1.0 - std::exp(k * aux.b + norm_log_cdf(k + aux.b - z) - aux.log_delta);
}

double bun_ccdf(double x, const BunParams& theta) {
  const BunAux aux = bun_aux(theta);
  const double z = (x - theta.mu) / theta.sigma;
  const double k = theta.k;
  if (z > 0.0) return std::exp(k * aux.b + norm_log_cdf(k + aux.b - z) - aux.log_delta);
  return 1.0 - std::exp(-k * aux.b + norm_log_cdf(z + k - aux.b) - aux.log_delta);
}

double bun_quantile(double p, const BunParams& theta) {
  require_probability(p, "bun_quantile");
  theta.validate();
  const double scale = theta.sigma * std::max(1.0, std::fabs(theta.k));
  return invert_cdf([&](double x) { return bun_cdf(x, theta); }, p, theta.mu + theta.a, scale);
}

double TruncatedNormal::pdf(double z) const {
  if (z < lower || z > upper) return 0.0;
  const double hi = (upper - mean) / sd;
  const double lo = (lower - mean) / sd;
  double log_mass;
  if (std::isinf(lo)) {
    log_mass = norm_log_cdf(hi);
  } else if (std::isinf(hi)) {
    log_mass = norm_log_cdf(-lo);
  } else if (lo > 0.0) {
    log_mass = std::log(norm_cdf(-lo) - norm_cdf(-hi));
  } else {
    log_mass = std::log(norm_cdf(hi) - norm_cdf(lo));
  }
  return std::exp(norm_log_pdf((z - mean) / sd) - log_mass) / sd;
}

double BunMixture::pdf_z(double z) const {
  return z <= 0.0 ? p * left.pdf(z) : (1.0 - p) * right.pdf(z);
}

BunMixture bun_mixture(const BunParams& theta) {
  const BunAux aux = bun_aux(theta);
  const double inf = std::numeric_limits<double>::infinity();
  BunMixture m;
  m.p = aux.p;
  m.left = TruncatedNormal{aux.b - theta.k, 1.0, -inf, 0.0};
  m.right = TruncatedNormal{aux.b + theta.k, 1.0, 0.0, inf};
  return m;
}

std::vector<double> bun_sample(std::size_t n, const BunParams& theta, RngStream& rng) {
  const BunAux aux = bun_aux(theta);
  const double left_mass = norm_cdf(theta.k - aux.b);
  const double right_mass = norm_cdf(theta.k + aux.b);
  std::vector<double> out(n);
  for (double& v : out) {
    const double pick = rng.uniform();
    const double u = rng.uniform();
    double z;
    if (pick < aux.p) {
      // Inverse cdf of N(b-k,1) restricted to z < 0.
      z = (aux.b - theta.k) + norm_quantile(u * left_mass);
      z = std::min(z, 0.0);
    } else {
      z = (aux.b + theta.k) - norm_quantile(u * right_mass);
      z = std::max(z, 0.0);
    }
    v = theta.mu + theta.sigma * z;
  }
  return out;
}

double bun_mgf(double t, const BunParams& theta) {
  const BunAux aux = bun_aux(theta);
  const double k = theta.k;
  const double b = aux.b;
  const double log_num = log_sum_exp((k + t) * b + 0.5 * (k + t) * (k + t) + norm_log_cdf(k + b + t),
                                     -(k - t) * b + 0.5 * (k - t) * (k - t) + norm_log_cdf(k - b - t));
  return std::exp(log_num - 0.5 * k * k - aux.log_delta);
}

BunMoments bun_moments(const BunParams& theta) {
  const BunAux x = bun_aux(theta);
  const double k = theta.k;
  const double b = x.b;
  const double pk = x.p_k;
  const double nk = x.n_k;
  // Each term is divided by delta through the weights below so that large
  // |kb| does not overflow p_t or n_t.
  const double wp = 1.0 - x.p;
  const double wn = x.p;
  const double wd = std::exp(-k * b + norm_log_pdf(k - b) - x.log_delta);
  BunMoments m;
  m.m1 = pk * wp - nk * wn;
  m.m2 = (1.0 + pk * pk) * wp + (1.0 + nk * nk) * wn + 2.0 * k * wd;
  m.m3 = (3.0 * pk + pk * pk * pk) * wp - (3.0 * nk + nk * nk * nk) * wn + 4.0 * k * b * wd;
  m.m4 = (3.0 + 6.0 * pk * pk + std::pow(pk, 4)) * wp + (3.0 + 6.0 * nk * nk + std::pow(nk, 4)) * wn +
         (2.0 * k * k * k + 10.0 * k + 6.0 * b * b * k) * wd;
  return m;
}

std::vector<double> bun_modes(const BunParams& theta) {
  theta.validate();
  const double k = theta.k;
  const double b = theta.a / theta.sigma;
  std::vector<double> z;
  if (b - k < 0.0) z.push_back(b - k);
  if (k <= -std::fabs(b)) z.push_back(0.0);
  if (b + k > 0.0) z.push_back(b + k);
  std::vector<double> out;
  for (double v : z) out.push_back(theta.mu + theta.sigma * v);
  std::sort(out.begin(), out.end());
  return out;
}

double bun_loglik(std::span<const double> data, const BunParams& theta) {
  const BunAux aux = bun_aux(theta);
  const double n = static_cast<double>(data.size());
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  for (double x : data) {
    abs_sum += std::fabs(x - theta.mu);
    const double r = (x - theta.mu - theta.a) / theta.sigma;
    sq_sum += r * r;
  }
  return -0.5 * n * theta.k * theta.k - n * std::log(theta.sigma) - n * aux.log_delta -
         n * kLogSqrt2Pi + theta.k / theta.sigma * abs_sum - 0.5 * sq_sum;
}

std::array<double, 4> bun_score(std::span<const double> data, const BunParams& theta) {
  const BunAux aux = bun_aux(theta);
  const double n = static_cast<double>(data.size());
  const double sigma = theta.sigma;
  const double k = theta.k;
  const double a = theta.a;
  double sign_sum = 0.0;
  double abs_sum = 0.0;
  double r_sum = 0.0;
  double r2_sum = 0.0;
  for (double x : data) {
    sign_sum += sign0(x - theta.mu);
    abs_sum += std::fabs(x - theta.mu);
    const double r = (x - theta.mu - a) / sigma;
    r_sum += r;
    r2_sum += r * r;
  }
  std::array<double, 4> g{};
  g[0] = -k / sigma * sign_sum + r_sum / sigma;
  g[1] = -n / sigma + n * k * a * aux.s / (sigma * sigma) - k / (sigma * sigma) * abs_sum + r2_sum / sigma;
  g[2] = -n * k - n * a * aux.s / sigma - n * aux.rho + abs_sum / sigma;
  g[3] = -n * k * aux.s / sigma + r_sum / sigma;
  return g;
}

BunModel::BunModel(const BunParams& theta) : theta_(theta) { theta_.validate(); }

RealLineHint BunModel::integration_hint() const {
  RealLineHint h;
  h.center = theta_.mu;
  h.scale = theta_.sigma;
  h.breakpoints = {theta_.mu};
  return h;
}

}  // namespace bimodal
