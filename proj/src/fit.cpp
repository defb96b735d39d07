#include "bimodal/fit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <tuple>

#include "bimodal/bul.hpp"
#include "bimodal/bun.hpp"
#include "bimodal/bust.hpp"
#include "bimodal/errors.hpp"
#include "bimodal/log_bun.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNuCap = 1e4;
constexpr double kScoreTol = 1e-3;
constexpr int kScreenIters = 300;
constexpr int kRandomStarts = 8;

enum class Family { kBun, kBust, kBul };

// Positions of each parameter inside the free vector; -1 when absent.
struct Layout {
  Family family;
  int size;
  int a;
  int nu;
  bool log_k;
  bool log_data;
};

Layout layout(ModelKind kind) {
  switch (kind) {
    case ModelKind::kBun: return {Family::kBun, 4, 3, -1, false, false};
    case ModelKind::kBunSym: return {Family::kBun, 3, -1, -1, false, false};
    case ModelKind::kBust: return {Family::kBust, 5, 3, 4, false, false};
    case ModelKind::kBustSym: return {Family::kBust, 4, -1, 3, false, false};
    case ModelKind::kBul: return {Family::kBul, 4, 3, -1, true, false};
    case ModelKind::kBulSym: return {Family::kBul, 3, -1, -1, true, false};
    case ModelKind::kLogBun: return {Family::kBun, 4, 3, -1, false, true};
  }
  throw DomainError("unknown model kind");
}

double a_of(const Layout& L, const Vector& p) { return L.a >= 0 ? p[L.a] : 0.0; }

BunParams as_bun(const Layout& L, const Vector& p) { return {p[0], p[1], p[2], a_of(L, p)}; }
BustParams as_bust(const Layout& L, const Vector& p) { return {p[0], p[1], p[2], a_of(L, p), p[L.nu]}; }
BulParams as_bul(const Layout& L, const Vector& p) { return {p[0], p[1], p[2], a_of(L, p)}; }

// Log-likelihood on the working sample (logs for Log-BUN), without the
// Jacobian term.
double working_loglik(const Layout& L, std::span<const double> x, const Vector& p) {
  switch (L.family) {
    case Family::kBun: return bun_loglik(x, as_bun(L, p));
    case Family::kBust: return bust_loglik(x, as_bust(L, p));
    case Family::kBul: return bul_loglik(x, as_bul(L, p));
  }
  return -kInf;
}

Vector working_score(const Layout& L, std::span<const double> x, const Vector& p) {
  Vector full;
  switch (L.family) {
    case Family::kBun: {
      const auto g = bun_score(x, as_bun(L, p));
      full.assign(g.begin(), g.end());
      break;
    }
    case Family::kBust: {
      const auto g = bust_score(x, as_bust(L, p));
      full.assign(g.begin(), g.end());
      break;
    }
    case Family::kBul: {
      const auto g = bul_score(x, as_bul(L, p));
      full.assign(g.begin(), g.end());
      break;
    }
  }
  Vector out{full[0], full[1], full[2]};
  if (L.a >= 0) out.push_back(full[3]);
  if (L.nu >= 0) out.push_back(full[4]);
  return out;
}

bool is_log_coord(const Layout& L, int i) { return i == 1 || i == L.nu || (i == 2 && L.log_k); }

Vector to_natural(const Layout& L, const Vector& z) {
  Vector p = z;
  for (int i = 0; i < L.size; ++i) {
    if (is_log_coord(L, i)) p[i] = std::exp(z[i]);
  }
  return p;
}

Vector to_working(const Layout& L, const Vector& p) {
  Vector z = p;
  for (int i = 0; i < L.size; ++i) {
    if (is_log_coord(L, i)) z[i] = std::log(p[i]);
  }
  return z;
}

double nearest_gap(const std::vector<double>& sorted, double mu) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), mu);
  double gap = kInf;
  if (it != sorted.end()) gap = *it - mu;
  if (it != sorted.begin()) gap = std::min(gap, mu - *std::prev(it));
  return gap;
}

double nearest_point(const std::vector<double>& sorted, double mu) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), mu);
  if (it == sorted.end()) return sorted.back();
  if (it == sorted.begin()) return *it;
  return (*it - mu) < (mu - *std::prev(it)) ? *it : *std::prev(it);
}

// Negative log-likelihood in working coordinates with the nu cap penalty.
class Problem {
 public:
  Problem(ModelKind kind, const Dataset& data) : L_(layout(kind)) {
    if (L_.log_data) {
      for (double t : data.values()) {
        work_.push_back(std::log(t));
        jacobian_ -= work_.back();
      }
    } else {
      work_ = data.values();
    }
    sorted_ = work_;
    std::sort(sorted_.begin(), sorted_.end());
  }

  const Layout& shape() const { return L_; }
  const std::vector<double>& sorted() const { return sorted_; }

  double loglik(const Vector& p) const {
    try {
      const double v = working_loglik(L_, work_, p) + jacobian_;
      return std::isfinite(v) ? v : -kInf;
    } catch (const DomainError&) {
      return -kInf;
    }
  }

  double penalty(const Vector& z) const {
    if (L_.nu < 0) return 0.0;
    const double excess = z[L_.nu] - std::log(kNuCap);
    return excess > 0.0 ? static_cast<double>(work_.size()) * excess * excess : 0.0;
  }

  double value(const Vector& z) const {
    const double ll = loglik(to_natural(L_, z));
    return std::isfinite(ll) ? -ll + penalty(z) : kInf;
  }

  Vector score(const Vector& p) const { return working_score(L_, work_, p); }

  Vector gradient(const Vector& z) const {
    const Vector p = to_natural(L_, z);
    Vector g(z.size(), 0.0);
    Vector s;
    try {
      s = score(p);
    } catch (const DomainError&) {
      return g;
    }
    for (int i = 0; i < L_.size; ++i) g[i] = -s[i] * (is_log_coord(L_, i) ? p[i] : 1.0);
    if (L_.nu >= 0) {
      const double excess = z[L_.nu] - std::log(kNuCap);
      if (excess > 0.0) g[L_.nu] += 2.0 * static_cast<double>(work_.size()) * excess;
    }
    return g;
  }

  std::vector<bool> kinks(const Vector& z) const {
    std::vector<bool> mask(z.size(), false);
    const double sigma = std::exp(z[1]);
    mask[0] = nearest_gap(sorted_, z[0]) <= 1e-8 * std::max(std::fabs(z[0]), sigma);
    return mask;
  }

  Objective objective() const {
    Objective obj;
    obj.value = [this](const Vector& z) { return value(z); };
    obj.gradient = [this](const Vector& z) { return gradient(z); };
    obj.kinks = [this](const Vector& z) { return kinks(z); };
    return obj;
  }

  // Same objective with mu pinned; z excludes mu.
  Objective pinned(double mu) const {
    auto expand = [mu](const Vector& rest) {
      Vector z(rest.size() + 1);
      z[0] = mu;
      std::copy(rest.begin(), rest.end(), z.begin() + 1);
      return z;
    };
    Objective obj;
    obj.value = [this, expand](const Vector& rest) { return value(expand(rest)); };
    obj.gradient = [this, expand](const Vector& rest) {
      const Vector g = gradient(expand(rest));
      return Vector(g.begin() + 1, g.end());
    };
    return obj;
  }

 private:
  Layout L_;
  std::vector<double> work_;
  std::vector<double> sorted_;
  double jacobian_ = 0.0;
};

double quantile_sorted(const std::vector<double>& s, double q) {
  const double pos = q * static_cast<double>(s.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, s.size() - 1);
  return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
}

// Centers of the two most populated local-maximum bins.
std::vector<double> histogram_peaks(const std::vector<double>& s) {
  const std::size_t n = s.size();
  const int bins = std::clamp(static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))), 5, 50);
  const double lo = s.front();
  const double width = (s.back() - lo) / bins;
  std::vector<int> counts(bins, 0);
  for (double v : s) counts[std::min(bins - 1, static_cast<int>((v - lo) / width))]++;
  std::vector<std::pair<int, int>> peaks;  // (-count, bin)
  for (int i = 0; i < bins; ++i) {
    const int left = i > 0 ? counts[i - 1] : -1;
    const int right = i + 1 < bins ? counts[i + 1] : -1;
    if (counts[i] > 0 && counts[i] >= left && counts[i] > right) peaks.emplace_back(-counts[i], i);
  }
  std::sort(peaks.begin(), peaks.end());
  std::vector<double> out;
  for (std::size_t j = 0; j < peaks.size() && j < 2; ++j) out.push_back(lo + (peaks[j].second + 0.5) * width);
  return out;
}

std::vector<Vector> start_points(const Layout& L, const std::vector<double>& s, RngStream& rng) {
  const std::size_t n = s.size();
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double median = quantile_sorted(s, 0.5);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::fabs(s[i] - median);
  std::sort(dev.begin(), dev.end());
  double mad = 1.4826 * quantile_sorted(dev, 0.5);
  if (!(mad > 0.0)) mad = sd;

  std::vector<double> mus{median};
  for (double m : histogram_peaks(s)) mus.push_back(m);
  const std::vector<double> sigmas{mad, sd};
  std::vector<double> ks;
  if (L.family == Family::kBul) {
    ks = {0.5, 2.0};
  } else {
    ks = {-2.0, -0.5, 0.5, 2.0};
  }
  const std::vector<double> nus = L.nu >= 0 ? std::vector<double>{3.0, 15.0} : std::vector<double>{0.0};

  std::vector<Vector> out;
  for (double mu : mus) {
    for (double sigma : sigmas) {
      for (double k : ks) {
        for (double a_frac : L.a >= 0 ? std::vector<double>{0.0, -0.5, 0.5} : std::vector<double>{0.0}) {
          for (double nu : nus) {
            Vector p(L.size);
            p[0] = mu;
            p[1] = sigma;
            p[2] = L.family == Family::kBust ? k * sigma : k;
            if (L.a >= 0) p[L.a] = a_frac * sigma;
            if (L.nu >= 0) p[L.nu] = nu;
            out.push_back(p);
          }
        }
      }
    }
  }
  for (int r = 0; r < kRandomStarts; ++r) {
    Vector p(L.size);
    p[0] = quantile_sorted(s, 0.1 + 0.8 * rng.uniform());
    p[1] = mad * std::exp(0.7 * norm_quantile(rng.uniform()));
    const double u = rng.uniform();
    if (L.family == Family::kBul) {
      p[2] = std::exp(std::log(0.2) + u * std::log(15.0));
    } else {
      p[2] = (6.0 * u - 3.0) * (L.family == Family::kBust ? p[1] : 1.0);
    }
    const double ua = rng.uniform();
    if (L.a >= 0) p[L.a] = (2.0 * ua - 1.0) * p[1];
    const double un = rng.uniform();
    if (L.nu >= 0) p[L.nu] = std::exp(std::log(2.0) + un * std::log(25.0));
    out.push_back(p);
  }
  return out;
}

FitReport failure(ModelKind kind, std::size_t n, const std::string& why,
                  std::chrono::steady_clock::time_point t0) {
  FitReport r;
  r.model = model_name(kind);
  r.n = n;
  r.failed = true;
  r.aic = kInf;
  r.bic = kInf;
  r.loglik = -kInf;
  r.ks_stat = 1.0;
  r.ks_pvalue = 0.0;
  r.message = why;
  r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kBun: return "bun";
    case ModelKind::kBunSym: return "bun-sym";
    case ModelKind::kBust: return "bust";
    case ModelKind::kBustSym: return "bust-sym";
    case ModelKind::kBul: return "bul";
    case ModelKind::kBulSym: return "bul-sym";
    case ModelKind::kLogBun: return "logbun";
  }
  return "unknown";
}

const std::vector<ModelKind>& all_models() {
  static const std::vector<ModelKind> kinds{ModelKind::kBun,  ModelKind::kBunSym, ModelKind::kBust,
                                            ModelKind::kBustSym, ModelKind::kBul, ModelKind::kBulSym,
                                            ModelKind::kLogBun};
  return kinds;
}

ModelKind parse_model(const std::string& name) {
  std::string key = lower(name);
  std::replace(key.begin(), key.end(), '_', '-');
  if (key == "log-bun") key = "logbun";
  const std::string suffix = "-symmetric";
  if (key.size() > suffix.size() && key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0) {
    key = key.substr(0, key.size() - suffix.size()) + "-sym";
  }
  std::string valid;
  for (ModelKind k : all_models()) {
    if (model_name(k) == key) return k;
    valid += (valid.empty() ? "" : ", ") + model_name(k);
  }
  throw DomainError("unknown model '" + name + "'; expected one of: " + valid);
}

const std::vector<std::string>& parameter_names(ModelKind kind) {
  static const std::vector<std::string> four{"mu", "sigma", "k", "a"};
  static const std::vector<std::string> three{"mu", "sigma", "k"};
  static const std::vector<std::string> five{"mu", "sigma", "k", "a", "nu"};
  static const std::vector<std::string> bust_sym{"mu", "sigma", "k", "nu"};
  switch (kind) {
    case ModelKind::kBun:
    case ModelKind::kBul:
    case ModelKind::kLogBun: return four;
    case ModelKind::kBunSym:
    case ModelKind::kBulSym: return three;
    case ModelKind::kBust: return five;
    case ModelKind::kBustSym: return bust_sym;
  }
  throw DomainError("unknown model kind");
}

std::unique_ptr<DensityModel> make_model(ModelKind kind, const std::vector<double>& params) {
  const Layout L = layout(kind);
  if (static_cast<int>(params.size()) != L.size) {
    throw DomainError(model_name(kind) + " takes " + std::to_string(L.size) + " parameters, got " +
                      std::to_string(params.size()));
  }
  if (kind == ModelKind::kLogBun) return std::make_unique<LogBunModel>(as_bun(L, params));
  switch (L.family) {
    case Family::kBun: return std::make_unique<BunModel>(as_bun(L, params));
    case Family::kBust: return std::make_unique<BustModel>(as_bust(L, params));
    case Family::kBul: return std::make_unique<BulModel>(as_bul(L, params));
  }
  throw DomainError("unknown model kind");
}

std::unique_ptr<DensityModel> make_model(ModelKind kind, const NamedValues& params) {
  const auto& names = parameter_names(kind);
  std::vector<double> values(names.size());
  std::vector<bool> seen(names.size(), false);
  for (const auto& [name, value] : params) {
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw DomainError("unknown parameter '" + name + "' for model " + model_name(kind));
    const auto i = static_cast<std::size_t>(it - names.begin());
    if (seen[i]) throw DomainError("parameter '" + name + "' given twice");
    seen[i] = true;
    values[i] = value;
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!seen[i]) throw DomainError("missing parameter '" + names[i] + "' for model " + model_name(kind));
  }
  return make_model(kind, values);
}

Dataset::Dataset(std::vector<double> values, std::string name, std::string source)
    : values_(std::move(values)), name_(std::move(name)), source_(std::move(source)) {
  if (values_.empty()) throw DomainError("dataset is empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DomainError("dataset value " + std::to_string(i + 1) + " is not finite");
    }
  }
  sorted_ = values_;
  std::sort(sorted_.begin(), sorted_.end());
}

double FitReport::estimate(const std::string& name) const {
  for (const auto& [key, value] : estimates) {
    if (key == name) return value;
  }
  throw std::out_of_range("no estimate named '" + name + "'");
}

std::vector<double> FitReport::estimate_vector() const {
  std::vector<double> out;
  for (const auto& kv : estimates) out.push_back(kv.second);
  return out;
}

AicBic aic_bic(double loglik, int p, std::size_t n) {
  if (n < 1) throw DomainError("aic_bic: n must be at least 1");
  if (p < 1) throw DomainError("aic_bic: p must be at least 1");
  return {-2.0 * loglik + 2.0 * p, -2.0 * loglik + p * std::log(static_cast<double>(n))};
}

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // Jacobi theta form converges fast for small lambda.
    const double pi2 = M_PI * M_PI;
    double sum = 0.0;
    for (int j = 1; j <= 20; ++j) {
      const double m = 2.0 * j - 1.0;
      sum += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(const Dataset& data, const std::function<double(double)>& cdf) {
  const auto& s = data.sorted();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double root = std::sqrt(n);
  return {d, kolmogorov_sf((root + 0.12 + 0.11 / root) * d)};
}

OptimizerConfig default_fit_config() {
  OptimizerConfig cfg;
  cfg.n_starts = 5;
  // The BFGS polish finishes the job; a long simplex only creeps along the
  // flat large-nu ridge of BUSt.
  cfg.max_iters = 3000;
  cfg.x_tol = 1e-8;
  return cfg;
}

FitReport fit_ml(const Dataset& data, ModelKind kind, const OptimizerConfig& cfg, RngStream& rng) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = data.size();
  if (n < kMinFitSize) {
    return failure(kind, n, "need at least " + std::to_string(kMinFitSize) + " observations, got " + std::to_string(n), t0);
  }
  if (data.sorted().front() == data.sorted().back()) {
    return failure(kind, n, "all observations are equal; the likelihood is unbounded as sigma -> 0", t0);
  }
  if (kind == ModelKind::kLogBun && !(data.sorted().front() > 0.0)) {
    return failure(kind, n, "logbun needs strictly positive observations", t0);
  }
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    return failure(kind, n, e.what(), t0);
  }

  const Problem problem(kind, data);
  const Layout& L = problem.shape();
  const Objective full = problem.objective();

  // Screening: a short simplex from every start.
  OptimizerConfig screen = cfg;
  screen.n_starts = 1;
  screen.max_iters = kScreenIters;
  screen.x_tol = 1e-6;
  screen.f_tol = 1e-9;
  Objective value_only;
  value_only.value = full.value;
  std::vector<std::tuple<double, std::size_t, Vector>> screened;
  const std::vector<Vector> starts = start_points(L, problem.sorted(), rng);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const Vector z0 = to_working(L, starts[i]);
    if (!std::isfinite(problem.value(z0))) continue;
    try {
      MinimizeResult r = minimize(value_only, z0, screen);
      screened.emplace_back(r.f, i, std::move(r.x));
    } catch (const OptimizationError&) {
    }
  }
  if (screened.empty()) return failure(kind, n, "no start gave a finite likelihood", t0);
  std::sort(screened.begin(), screened.end(),
            [](const auto& x, const auto& y) { return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y)); });

  // Refinement of the best distinct screened points.
  OptimizerConfig refine = cfg;
  refine.n_starts = 1;
  std::vector<Vector> chosen;
  MinimizeResult best;
  best.f = kInf;
  int refined = 0;
  for (const auto& [f, idx, z] : screened) {
    if (refined >= cfg.n_starts) break;
    bool duplicate = false;
    for (const Vector& c : chosen) {
      double dist = 0.0;
      for (std::size_t j = 0; j < z.size(); ++j) dist = std::max(dist, std::fabs(z[j] - c[j]));
      duplicate = duplicate || dist < 1e-4;
    }
    if (duplicate) continue;
    chosen.push_back(z);
    ++refined;
    try {
      MinimizeResult r = minimize(full, z, refine);
      if (r.f < best.f) best = std::move(r);
    } catch (const OptimizationError&) {
    }
  }
  if (!std::isfinite(best.f)) return failure(kind, n, "every refined start diverged", t0);

  // Kink snap: an optimum sitting on an observation is only reached
  // approximately by the simplex, so try mu exactly at the nearest one.
  Vector z = best.x;
  double fz = best.f;
  {
    const double sigma = std::exp(z[1]);
    const double target = nearest_point(problem.sorted(), z[0]);
    if (target != z[0] && std::fabs(target - z[0]) <= 1e-3 * sigma) {
      const Vector rest0(z.begin() + 1, z.end());
      try {
        const MinimizeResult r = minimize(problem.pinned(target), rest0, refine);
        if (r.f <= fz + 1e-10 * std::max(1.0, std::fabs(fz))) {
          z[0] = target;
          std::copy(r.x.begin(), r.x.end(), z.begin() + 1);
          fz = r.f;
        }
      } catch (const OptimizationError&) {
      }
    }
  }

  const Vector p = to_natural(L, z);
  FitReport report;
  report.model = model_name(kind);
  report.n = n;
  const auto& names = parameter_names(kind);
  for (int i = 0; i < L.size; ++i) report.estimates.emplace_back(names[i], p[i]);
  report.loglik = problem.loglik(p);
  const AicBic ic = aic_bic(report.loglik, L.size, n);
  report.aic = ic.aic;
  report.bic = ic.bic;
  report.n_starts_used = static_cast<int>(screened.size());

  // Convergence: small score on smooth coordinates; at a kink, mu must be a
  // one-sided maximum.
  const double gap = nearest_gap(problem.sorted(), z[0]);
  report.mu_at_kink = gap == 0.0;
  const bool kink_adjacent = gap <= 1e-6 * p[1];
  Vector score;
  try {
    score = problem.score(p);
  } catch (const DomainError&) {
    score.assign(L.size, kInf);
  }
  double worst = 0.0;
  for (int i = kink_adjacent ? 1 : 0; i < L.size; ++i) worst = std::max(worst, std::fabs(score[i]));
  bool mu_ok = true;
  if (kink_adjacent) {
    const double h = 1e-6 * p[1];
    Vector lo = p, hi = p;
    lo[0] -= h;
    hi[0] += h;
    const double slack = 1e-12 * std::max(1.0, std::fabs(report.loglik));
    mu_ok = problem.loglik(lo) <= report.loglik + slack && problem.loglik(hi) <= report.loglik + slack;
  }
  report.max_abs_score = worst;
  report.converged = std::isfinite(worst) && worst < kScoreTol && mu_ok;

  try {
    const auto model = make_model(kind, p);
    const KsResult ks = ks_test(data, [&](double x) { return model->cdf(x); });
    report.ks_stat = ks.D;
    report.ks_pvalue = ks.pvalue;
  } catch (const std::exception& e) {
    return failure(kind, n, std::string("fitted parameters unusable: ") + e.what(), t0);
  }

  report.message = "screened " + std::to_string(screened.size()) + " starts, refined " + std::to_string(refined);
  if (!report.converged) {
    report.message += "; max |score| = " + std::to_string(worst) + (mu_ok ? "" : "; mu is not a local max");
  }
  if (L.nu >= 0 && p[L.nu] >= kNuCap) {
    // The likelihood still rises toward the BUN limit; no interior maximum.
    report.converged = false;
    report.message += "; nu reached the 1e4 cap";
  }
  report.runtime_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::vector<FitReport> compare(const Dataset& data, const std::vector<ModelKind>& kinds,
                               const OptimizerConfig& cfg, RngStream& rng) {
  if (kinds.size() < 2) throw DomainError("compare needs at least two models");
  std::vector<FitReport> out;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    RngStream sub = rng.split(i);
    out.push_back(fit_ml(data, kinds[i], cfg, sub));
  }
  std::stable_sort(out.begin(), out.end(), [](const FitReport& x, const FitReport& y) {
    return std::make_tuple(x.failed, x.aic, x.bic, x.model) < std::make_tuple(y.failed, y.aic, y.bic, y.model);
  });
  return out;
}

}  // namespace bimodal
