#include "bimodal/bust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "bimodal/bun.hpp"
#include "bimodal/errors.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binom(int n, int j) {
  double c = 1.0;
  for (int i = 1; i <= j; ++i) c = c * (n - j + i) / i;
  return c;
}

}  // namespace

void BustParams::validate() const {
  if (!std::isfinite(mu) || !std::isfinite(sigma) || !std::isfinite(k) || !std::isfinite(a) ||
      !std::isfinite(nu)) {
    throw DomainError("BUSt parameters must be finite");
  }
  if (!(sigma > 0.0)) throw DomainError("BUSt sigma must be positive, got " + std::to_string(sigma));
  if (!(nu > 0.0)) throw DomainError("BUSt nu must be positive, got " + std::to_string(nu));
  if (!(nu * sigma * sigma > 2.0 * std::fabs(a * k))) {
    throw DomainError("BUSt requires nu*sigma^2 > 2|a*k| (negative branch scale)");
  }
}

BustAux bust_aux(const BustParams& t) {
  t.validate();
  BustAux x;
  x.s_minus = t.s_minus();
  x.s_plus = t.s_plus();
  x.P = (t.a + t.k) / std::sqrt(x.s_minus);
  x.Q = (t.k - t.a) / std::sqrt(x.s_plus);
  x.D_minus = t_cdf(x.P, t.nu);
  x.D_plus = t_cdf(x.Q, t.nu);
  x.d_minus = t_pdf(x.P, t.nu);
  x.d_plus = t_pdf(x.Q, t.nu);
  x.log_D_minus = t_log_cdf(x.P, t.nu);
  x.log_D_plus = t_log_cdf(x.Q, t.nu);
  const double l_minus = -0.5 * t.nu * std::log(x.s_minus) + x.log_D_minus;
  const double l_plus = -0.5 * t.nu * std::log(x.s_plus) + x.log_D_plus;
  x.log_delta = log_sum_exp(l_minus, l_plus);
  x.R_minus = std::exp(l_minus - x.log_delta);
  x.R_plus = std::exp(l_plus - x.log_delta);
  x.log_c = log_gamma(0.5 * (t.nu + 1.0)) - log_gamma(0.5 * t.nu) - 0.5 * std::log(t.nu * kPi);
  return x;
}

namespace {

// Log density given precomputed aux; A = s + u^2/nu on the active branch.
double log_pdf_with(double x, const BustParams& t, const BustAux& aux) {
  double A;
  if (x >= t.mu) {
    const double u = x - t.mu - t.a - t.k;
    A = aux.s_minus + u * u / t.nu;
  } else {
    const double u = x - t.mu - t.a + t.k;
    A = aux.s_plus + u * u / t.nu;
  }
  return aux.log_c - 0.5 * (t.nu + 1.0) * std::log(A) - aux.log_delta;
}

}  // namespace

double bust_log_pdf(double x, const BustParams& theta) {
  return log_pdf_with(x, theta, bust_aux(theta));
}

double bust_pdf(double x, const BustParams& theta) { return std::exp(bust_log_pdf(x, theta)); }

double bust_cdf(double x, const BustParams& t) {
  const BustAux aux = bust_aux(t);
  if (x <= t.mu) {
    const double w = (x - t.mu - t.a + t.k) / std::sqrt(aux.s_plus);
    return std::exp(-0.5 * t.nu * std::log(aux.s_plus) - aux.log_delta + t_log_cdf(w, t.nu));
  }
  const double v = (x - t.mu - t.a - t.k) / std::sqrt(aux.s_minus);
  return 1.0 - std::exp(-0.5 * t.nu * std::log(aux.s_minus) - aux.log_delta + t_log_cdf(-v, t.nu));
}

double bust_quantile(double p, const BustParams& t) {
  require_probability(p, "bust_quantile");
  t.validate();
  return invert_cdf([&](double x) { return bust_cdf(x, t); }, p, t.mu + t.a, t.sigma + std::fabs(t.k));
}

double bust_symmetric_pdf(double x, double mu, double sigma, double k12, double nu) {
  if (!(sigma > 0.0) || !(nu > 0.0)) throw DomainError("bust_symmetric_pdf: sigma and nu must be positive");
  return t_pdf(std::fabs(x - mu) / sigma - k12, nu) / (2.0 * sigma * t_cdf(k12, nu));
}

double TruncatedT::pdf(double x) const {
  if (x < lower || x > upper) return 0.0;
  const double hi = (upper - center) / scale;
  const double lo = (lower - center) / scale;
  double mass;
  if (std::isinf(lo)) {
    mass = t_cdf(hi, nu);
  } else if (std::isinf(hi)) {
    mass = t_cdf(-lo, nu);
  } else {
    mass = t_cdf(hi, nu) - t_cdf(lo, nu);
  }
  return t_pdf((x - center) / scale, nu) / (scale * mass);
}

double BustMixture::pdf(double x) const {
  return x >= right.lower ? R_minus * right.pdf(x) : R_plus * left.pdf(x);
}

BustMixture bust_mixture(const BustParams& t) {
  const BustAux aux = bust_aux(t);
  const double inf = std::numeric_limits<double>::infinity();
  BustMixture m;
  m.R_minus = aux.R_minus;
  m.R_plus = aux.R_plus;
  m.right = TruncatedT{t.mu + t.a + t.k, std::sqrt(aux.s_minus), t.nu, t.mu, inf};
  m.left = TruncatedT{t.mu + t.a - t.k, std::sqrt(aux.s_plus), t.nu, -inf, t.mu};
  return m;
}

std::vector<double> bust_sample(std::size_t n, const BustParams& t, RngStream& rng) {
  const BustAux aux = bust_aux(t);
  const double sm = std::sqrt(aux.s_minus);
  const double sp = std::sqrt(aux.s_plus);
  std::vector<double> out(n);
  for (double& v : out) {
    const double pick = rng.uniform();
    const double u = rng.uniform();
    if (pick < aux.R_minus) {
      v = std::max(t.mu, t.mu + t.a + t.k - sm * t_quantile(u * aux.D_minus, t.nu));
    } else {
      v = std::min(t.mu, t.mu + t.a - t.k + sp * t_quantile(u * aux.D_plus, t.nu));
    }
  }
  return out;
}

std::array<double, 5> truncated_t_moments(double c, double nu) {
  if (!(nu > 0.0)) throw DomainError("truncated_t_moments: nu must be positive");
  std::array<double, 5> M{};
  const double tail = (nu + c * c) * t_pdf(c, nu);
  M[0] = t_cdf(-c, nu);
  M[1] = nu > 1.0 ? tail / (nu - 1.0) : kNaN;
  for (int j = 2; j <= 4; ++j) {
    M[j] = nu > j ? ((j - 1) * nu * M[j - 2] + std::pow(c, j - 1) * tail) / (nu - j) : kNaN;
  }
  std::array<double, 5> eta{};
  for (int j = 0; j <= 4; ++j) eta[j] = M[j] / M[0];
  return eta;
}

double bust_moment(int r, const BustParams& t) {
  if (r < 1 || r > 4) throw DomainError("bust_moment: r must be in 1..4, got " + std::to_string(r));
  if (!(t.nu > r)) {
    throw MomentUndefinedError("bust_moment: E(X^" + std::to_string(r) + ") needs nu > " +
                               std::to_string(r));
  }
  const BustAux aux = bust_aux(t);
  // T1 > -P for the right component, T2 < Q for the left; the latter is
  // -T' with T' > -Q.
  const auto eta = truncated_t_moments(-aux.P, t.nu);
  const auto lam_ref = truncated_t_moments(-aux.Q, t.nu);
  const double c1 = t.mu + t.a + t.k;
  const double c2 = t.mu + t.a - t.k;
  double e1 = 0.0;
  double e2 = 0.0;
  for (int j = 0; j <= r; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    e1 += binom(r, j) * std::pow(c1, r - j) * std::pow(aux.s_minus, 0.5 * j) * eta[j];
    e2 += binom(r, j) * std::pow(c2, r - j) * std::pow(aux.s_plus, 0.5 * j) * sign * lam_ref[j];
  }
  return aux.R_minus * e1 + aux.R_plus * e2;
}

BustPrintedMoments bust_moment_printed(int r, const BustParams& t) {
  if (r < 1 || r > 4) throw DomainError("bust_moment_printed: r must be in 1..4");
  if (!(t.nu > 4.0)) throw MomentUndefinedError("bust_moment_printed: the printed forms need nu > 4");
  const BustAux aux = bust_aux(t);
  const double nu = t.nu;
  auto G = [&](double s, double D) {
    return std::exp(log_gamma(0.5 * (nu - s)) + 0.5 * nu * std::log(nu) - std::log(2.0 * D) -
                    log_gamma(0.5 * nu) - log_gamma(0.5));
  };
  const double P = aux.P;
  const double q = nu + P * P;
  const double g1 = G(1, aux.D_minus) * std::pow(q, -0.5 * (nu - 1.0));
  const double g3 = G(3, aux.D_minus) * std::pow(q, -0.5 * (nu - 3.0));
  const double v2 = nu / (nu - 2.0);
  const double v4 = nu * nu / ((nu - 2.0) * (nu - 4.0));
  BustPrintedMoments out;
  out.eta = {g1, v2 - P * g1, g3 + P * P * g1, 3.0 * (v4 - 0.5 * g3 * P) - P * P * P * g1};

  const double Pp = (t.a - t.k) / std::sqrt(aux.s_plus);
  const double qp = nu + Pp * Pp;
  const double h1 = G(1, aux.D_plus) * std::pow(qp, -0.5 * (nu - 1.0));
  const double h3 = G(3, aux.D_plus) * std::pow(qp, -0.5 * (nu - 3.0));
  out.lambda = {-h1, v2 + Pp * h1, -h3 - Pp * Pp * h1, 3.0 * (v4 + 0.5 * h3 * Pp) + Pp * Pp * Pp * h1};

  // Component moments as printed: the j-sum multiplies eta_m (not eta_j).
  auto component = [&](int m, double center, double s, const std::array<double, 4>& coef) {
    if (m == 0) return 1.0;
    double sum = 0.0;
    for (int j = 0; j <= m; ++j) sum += binom(m, j) * std::pow(center, m - j) * std::pow(s, 0.5 * j);
    return sum * coef[m - 1];
  };
  for (int i = 0; i <= r; ++i) {
    out.display += binom(r, i) * std::pow(aux.R_minus, i) * std::pow(aux.R_plus, r - i) *
                   component(i, t.mu + t.a + t.k, aux.s_minus, out.eta) *
                   component(r - i, t.mu + t.a - t.k, aux.s_plus, out.lambda);
  }
  return out;
}

std::vector<double> bust_modes(const BustParams& t) {
  t.validate();
  std::vector<double> out;
  if (t.a - t.k < 0.0) out.push_back(t.mu + t.a - t.k);
  if (t.k <= -std::fabs(t.a)) out.push_back(t.mu);
  if (t.a + t.k > 0.0) out.push_back(t.mu + t.a + t.k);
  std::sort(out.begin(), out.end());
  return out;
}

double bust_limit_check(const BustParams& theta, double nu_large) {
  if (!(nu_large >= 1e3)) throw DomainError("bust_limit_check: nu_large must be at least 1e3");
  BustParams t = theta;
  t.nu = nu_large;
  const BunParams limit{t.mu, t.sigma, t.k / t.sigma, t.a};
  const double span = 6.0 * t.sigma + 2.0 * (std::fabs(t.k) + std::fabs(t.a));
  double sup = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double x = t.mu - span + 2.0 * span * i / 400.0;
    sup = std::max(sup, std::fabs(bust_pdf(x, t) - bun_pdf(x, limit)));
  }
  return sup;
}

double bust_loglik(std::span<const double> data, const BustParams& t) {
  const BustAux aux = bust_aux(t);
  double sum = 0.0;
  for (double x : data) sum += log_pdf_with(x, t, aux);
  return sum;
}

std::array<double, 5> bust_score(std::span<const double> data, const BustParams& t) {
  const BustAux aux = bust_aux(t);
  const double n = static_cast<double>(data.size());
  const double nu = t.nu;
  const double a = t.a;
  const double k = t.k;
  const double sigma = t.sigma;

  // Sums of (dA/dtheta)/A over the data, plus sum of log A for the nu term.
  std::array<double, 5> dA{};
  double log_a_sum = 0.0;
  for (double x : data) {
    const bool right = x >= t.mu;
    const double u = right ? x - t.mu - a - k : x - t.mu - a + k;
    const double A = (right ? aux.s_minus : aux.s_plus) + u * u / nu;
    const double sgn = right ? -1.0 : 1.0;
    dA[0] += (-2.0 * u / nu) / A;
    dA[1] += (2.0 * sigma) / A;
    dA[2] += sgn * (2.0 * a + 2.0 * u) / nu / A;
    dA[3] += (sgn * 2.0 * k - 2.0 * u) / nu / A;
    dA[4] += (-sgn * 2.0 * a * k - u * u) / (nu * nu) / A;
    log_a_sum += std::log(A);
  }

  // d log delta: each branch weighted by its mixture share. Branch "minus"
  // has s = s_minus, argument P = (a + k)/sqrt(s); "plus" has s_plus and
  // Q = (k - a)/sqrt(s).
  struct Branch {
    double s, arg, D, log_D, R;
    std::array<double, 5> ds, dnum;  // d s/d theta and d(numerator of arg)/d theta
  };
  const Branch branches[2] = {
      {aux.s_minus, aux.P, aux.D_minus, aux.log_D_minus, aux.R_minus,
       {0.0, 2.0 * sigma, -2.0 * a / nu, -2.0 * k / nu, 2.0 * a * k / (nu * nu)},
       {0.0, 0.0, 1.0, 1.0, 0.0}},
      {aux.s_plus, aux.Q, aux.D_plus, aux.log_D_plus, aux.R_plus,
       {0.0, 2.0 * sigma, 2.0 * a / nu, 2.0 * k / nu, -2.0 * a * k / (nu * nu)},
       {0.0, 0.0, 1.0, -1.0, 0.0}},
  };
  std::array<double, 5> dlog_delta{};
  for (const Branch& b : branches) {
    const double root = std::sqrt(b.s);
    const double num = b.arg * root;
    const double hazard = std::exp(t_log_pdf(b.arg, nu) - b.log_D);
    // d log D / d nu; the direct integral loses relative accuracy once D is
    // tiny, so fall back to differencing log D there.
    double dlog_D_dnu = 0.0;
    if (b.D > 1e-8) {
      dlog_D_dnu = t_cdf_dnu(b.arg, nu) / b.D;
    } else {
      const double h = 1e-5 * nu;
      dlog_D_dnu = (t_log_cdf(b.arg, nu + h) - t_log_cdf(b.arg, nu - h)) / (2.0 * h);
    }
    for (int j = 0; j < 5; ++j) {
      const double darg = b.dnum[j] / root - 0.5 * num * b.ds[j] / (b.s * root);
      double term = -0.5 * nu * b.ds[j] / b.s + hazard * darg;
      if (j == 4) term += -0.5 * std::log(b.s) + dlog_D_dnu;
      dlog_delta[j] += b.R * term;
    }
  }

  std::array<double, 5> g{};
  for (int j = 0; j < 5; ++j) g[j] = -0.5 * (nu + 1.0) * dA[j] - n * dlog_delta[j];
  const double dlog_c = 0.5 * digamma(0.5 * (nu + 1.0)) - 0.5 * digamma(0.5 * nu) - 0.5 / nu;
  g[4] += n * dlog_c - 0.5 * log_a_sum;
  return g;
}

BustModel::BustModel(const BustParams& theta) : theta_(theta) { theta_.validate(); }

RealLineHint BustModel::integration_hint() const {
  RealLineHint h;
  h.center = theta_.mu + theta_.a;
  h.scale = theta_.sigma;
  h.breakpoints = {theta_.mu};
  return h;
}

}  // namespace bimodal
