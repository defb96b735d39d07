#include "bimodal/constructors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bimodal/errors.hpp"
#include "bimodal/roots.hpp"
#include "bimodal/special.hpp"

namespace bimodal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kCheckSeed = 0x5eedc0de;
constexpr int kCheckPoints = 256;
constexpr int kTableNodes = 255;

void require_scale(double scale, const char* fn) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError(std::string(fn) + ": scale must be positive and finite");
  }
}

bool close_rel(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Offsets spread over +-10 scale units, fixed across runs.
std::vector<double> check_offsets(double scale) {
  RngStream rng(kCheckSeed);
  std::vector<double> out(kCheckPoints);
  for (double& d : out) d = scale * 10.0 * (2.0 * rng.uniform() - 1.0);
  return out;
}

}  // namespace

double SymmetricBase::pdf(double x) const { return std::exp(log_pdf(x)); }

void SymmetricBase::check() const {
  for (double d : check_offsets(scale)) {
    const double lp = log_pdf(center + d);
    const double lm = log_pdf(center - d);
    if (!std::isfinite(lp) || !std::isfinite(lm)) {
      throw ConstructionError(name + ": density is not strictly positive at offset " +
                              std::to_string(d));
    }
    if (!close_rel(std::exp(lp), std::exp(lm), 1e-12)) {
      throw ConstructionError(name + ": density is not symmetric about " + std::to_string(center));
    }
  }
}

SymmetricBase normal_base(double location, double scale) {
  require_scale(scale, "normal_base");
  SymmetricBase b;
  b.name = "normal";
  b.center = location;
  b.scale = scale;
  const double log_s = std::log(scale);
  b.log_pdf = [=](double x) { return norm_log_pdf((x - location) / scale) - log_s; };
  b.cdf = [=](double x) { return norm_cdf((x - location) / scale); };
  b.quantile = [=](double p) { return location + scale * norm_quantile(p); };
  return b;
}

SymmetricBase logistic_base(double location, double scale) {
  require_scale(scale, "logistic_base");
  SymmetricBase b;
  b.name = "logistic";
  b.center = location;
  b.scale = scale;
  const double log_s = std::log(scale);
  b.log_pdf = [=](double x) {
    const double y = std::fabs((x - location) / scale);
    return -y - 2.0 * std::log1p(std::exp(-y)) - log_s;
  };
  b.cdf = [=](double x) { return 1.0 / (1.0 + std::exp(-(x - location) / scale)); };
  b.quantile = [=](double p) {
    require_probability(p, "logistic quantile");
    return location + scale * std::log(p / (1.0 - p));
  };
  return b;
}

SymmetricBase cauchy_base(double location, double scale) {
  require_scale(scale, "cauchy_base");
  SymmetricBase b;
  b.name = "cauchy";
  b.center = location;
  b.scale = scale;
  const double log_s = std::log(scale);
  b.log_pdf = [=](double x) {
    const double y = (x - location) / scale;
    return -std::log(kPi) - std::log1p(y * y) - log_s;
  };
  b.cdf = [=](double x) { return 0.5 + std::atan((x - location) / scale) / kPi; };
  b.quantile = [=](double p) {
    require_probability(p, "cauchy quantile");
    return location + scale * std::tan(kPi * (p - 0.5));
  };
  return b;
}

SymmetricBase hyperbolic_secant_base(double location, double scale) {
  require_scale(scale, "hyperbolic_secant_base");
  SymmetricBase b;
  b.name = "hyperbolic-secant";
  b.center = location;
  b.scale = scale;
  const double log_s = std::log(scale);
  b.log_pdf = [=](double x) {
    // log sech(y) = log 2 - |y| - log(1 + e^{-2|y|})
    const double y = std::fabs((x - location) / scale);
    return std::log(2.0) - y - std::log1p(std::exp(-2.0 * y)) - std::log(kPi) - log_s;
  };
  b.cdf = [=](double x) { return 2.0 / kPi * std::atan(std::exp((x - location) / scale)); };
  b.quantile = [=](double p) {
    require_probability(p, "hyperbolic secant quantile");
    return location + scale * std::log(std::tan(0.5 * kPi * p));
  };
  return b;
}

SymmetricBase laplace_base(double location, double scale) {
  require_scale(scale, "laplace_base");
  SymmetricBase b;
  b.name = "laplace";
  b.center = location;
  b.scale = scale;
  const double log_s = std::log(scale);
  b.log_pdf = [=](double x) { return -std::fabs((x - location) / scale) - std::log(2.0) - log_s; };
  b.cdf = [=](double x) {
    const double y = (x - location) / scale;
    return y < 0.0 ? 0.5 * std::exp(y) : 1.0 - 0.5 * std::exp(-y);
  };
  b.quantile = [=](double p) {
    require_probability(p, "laplace quantile");
    return p < 0.5 ? location + scale * std::log(2.0 * p) : location - scale * std::log(2.0 - 2.0 * p);
  };
  return b;
}

void WeightFn::check(double center, double scale) const {
  const std::vector<double> pts = check_offsets(scale);
  for (double d : pts) {
    const double v = w(center + d);
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConstructionError("weight is not strictly positive at x = " + std::to_string(center + d));
    }
  }
  if (convexity != Convexity::kConvex) return;
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const double x = center + pts[i];
    const double y = center + pts[i + 1];
    const double mid = w(0.5 * (x + y));
    const double chord = 0.5 * (w(x) + w(y));
    if (mid > chord * (1.0 + 1e-12)) {
      throw ConstructionError("weight declared convex fails the midpoint test between " +
                              std::to_string(x) + " and " + std::to_string(y));
    }
  }
}

void FoldTransform::check(double scale) const {
  const std::vector<double> pts = check_offsets(scale);
  for (double t : pts) {
    if (!close_rel(h(symmetry_point + t), h(symmetry_point - t), 1e-12)) {
      throw ConstructionError("fold transform is not symmetric about " +
                              std::to_string(symmetry_point));
    }
  }
  // |x| is convex but only weakly so on each side of the kink; the midpoint
  // test is therefore the non-strict one.
  for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
    const double x = symmetry_point + pts[i];
    const double y = symmetry_point + pts[i + 1];
    const double mid = h(0.5 * (x + y));
    const double chord = 0.5 * (h(x) + h(y));
    if (mid > chord + 1e-12 * std::max(1.0, std::fabs(chord))) {
      throw ConstructionError("fold transform fails the midpoint convexity test");
    }
  }
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kTilted:
      return "tilted";
    case FamilyKind::kExpCdfTilted:
      return "exp-cdf-tilted";
    case FamilyKind::kPowCdfTilted:
      return "pow-cdf-tilted";
    case FamilyKind::kFolded:
      return "folded";
    case FamilyKind::kFoldedHalf:
      return "folded-half";
    case FamilyKind::kFoldedSkewed:
    default:
      return "folded-skewed";
  }
}

ConstructedFamily::ConstructedFamily(std::string name, FamilyKind kind, SymmetricBase base,
                                     LogKernel log_kernel, std::optional<double> closed_form_norm,
                                     std::vector<double> kinks, double k, double lambda,
                                     const ConstructionOptions& opts)
    : name_(std::move(name)),
      kind_(kind),
      base_(std::move(base)),
      log_kernel_(std::move(log_kernel)),
      kinks_(std::move(kinks)),
      k_(k),
      lambda_(lambda),
      table_quad_(opts.quadrature) {
  const bool folded =
      kind_ == FamilyKind::kFolded || kind_ == FamilyKind::kFoldedHalf || kind_ == FamilyKind::kFoldedSkewed;
  center_ = folded ? 0.0 : base_.center;
  scale_ = base_.scale;
  if (folded && std::find(kinks_.begin(), kinks_.end(), 0.0) == kinks_.end()) kinks_.push_back(0.0);

  RealLineHint hint = integration_hint();
  auto kernel = [this](double x) { return std::exp(log_kernel_(x)); };
  const bool need_quadrature = !closed_form_norm || opts.check_invariants;
  double numeric = std::numeric_limits<double>::quiet_NaN();
  if (need_quadrature) {
    try {
      numeric = integrate_real_line(kernel, opts.quadrature, hint);
    } catch (const IntegrationError& e) {
      throw ConstructionError(name_ + ": normalizing integral does not converge (" + e.what() + ")");
    }
    if (!(numeric > 0.0) || !std::isfinite(numeric)) {
      throw ConstructionError(name_ + ": normalizing integral is not a positive finite number");
    }
  }
  if (closed_form_norm) {
    if (!(*closed_form_norm > 0.0) || !std::isfinite(*closed_form_norm)) {
      throw ConstructionError(name_ + ": closed-form normalizer is not positive");
    }
    if (opts.check_invariants && !close_rel(numeric, *closed_form_norm, 1e-8)) {
      std::ostringstream os;
      os.precision(17);
      os << name_ << ": closed-form normalizer " << *closed_form_norm
         << " disagrees with quadrature " << numeric;
      throw ConstructionError(os.str());
    }
    norm_const_ = *closed_form_norm;
    closed_form_ = true;
  } else {
    norm_const_ = numeric;
  }
  log_norm_ = std::log(norm_const_);
  build_table(opts.quadrature);
}

double ConstructedFamily::log_pdf(double x) const { return log_kernel_(x) - log_norm_; }

RealLineHint ConstructedFamily::integration_hint() const {
  RealLineHint hint;
  hint.center = center_;
  hint.scale = scale_;
  hint.breakpoints = kinks_;
  return hint;
}

void ConstructedFamily::build_table(const Quadrature& q) {
  nodes_.clear();
  for (int i = 0; i < kTableNodes; ++i) {
    const double u = -0.5 * kPi + kPi * (i + 1) / (kTableNodes + 1);
    nodes_.push_back(center_ + scale_ * std::tan(u));
  }
  for (double b : kinks_) nodes_.push_back(b);
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

  const RealLineHint hint = integration_hint();
  auto density = [this](double x) { return pdf(x); };
  const std::size_t n = nodes_.size();
  std::vector<double> panel(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    panel[i] = integrate(density, nodes_[i], nodes_[i + 1], q, hint);
  }
  lower_.assign(n, 0.0);
  upper_.assign(n, 0.0);
  lower_[0] = integrate(density, -kInf, nodes_[0], q, hint);
  for (std::size_t i = 1; i < n; ++i) lower_[i] = lower_[i - 1] + panel[i - 1];
  upper_[n - 1] = integrate(density, nodes_[n - 1], kInf, q, hint);
  for (std::size_t i = n - 1; i-- > 0;) upper_[i] = upper_[i + 1] + panel[i];
}

double ConstructedFamily::cdf(double x) const {
  if (std::isnan(x)) return x;
  if (x == -kInf) return 0.0;
  if (x == kInf) return 1.0;
  const RealLineHint hint = integration_hint();
  auto density = [this](double t) { return pdf(t); };
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  if (it == nodes_.begin()) return integrate(density, -kInf, x, table_quad_, hint);
  if (it == nodes_.end()) return 1.0 - integrate(density, x, kInf, table_quad_, hint);
  const std::size_t j = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  if (lower_[j] < 0.5) return lower_[j] + integrate(density, nodes_[j], x, table_quad_, hint);
  return 1.0 - (upper_[j + 1] + integrate(density, x, nodes_[j + 1], table_quad_, hint));
}

double ConstructedFamily::quantile(double p) const {
  require_probability(p, "ConstructedFamily::quantile");
  auto node_cdf = [this](std::size_t i) { return lower_[i] < 0.5 ? lower_[i] : 1.0 - upper_[i]; };
  auto f = [&](double x) { return cdf(x) - p; };
  const std::size_t n = nodes_.size();
  if (p < node_cdf(0)) {
    double hi = nodes_[0];
    double step = scale_;
    double lo = hi - step;
    while (cdf(lo) > p) {
      hi = lo;
      step *= 2.0;
      lo = nodes_[0] - step;
    }
    return find_root(f, lo, hi);
  }
  if (p > node_cdf(n - 1)) {
    double lo = nodes_[n - 1];
    double step = scale_;
    double hi = lo + step;
    while (cdf(hi) < p) {
      lo = hi;
      step *= 2.0;
      hi = nodes_[n - 1] + step;
    }
    return find_root(f, lo, hi);
  }
  std::size_t a = 0;
  std::size_t b = n - 1;
  while (b - a > 1) {
    const std::size_t m = (a + b) / 2;
    if (node_cdf(m) <= p) {
      a = m;
    } else {
      b = m;
    }
  }
  return find_root(f, nodes_[a], nodes_[b]);
}

std::pair<double, double> ConstructedFamily::search_interval() const {
  double lo = base_.quantile(1e-6);
  double hi = base_.quantile(1.0 - 1e-6);
  const bool folded =
      kind_ == FamilyKind::kFolded || kind_ == FamilyKind::kFoldedHalf || kind_ == FamilyKind::kFoldedSkewed;
  if (folded) {
    const double a = std::min(lo, -hi);
    const double b = std::max(hi, -lo);
    lo = a;
    hi = b;
  }
  return {lo, hi};
}

ConstructedFamily tilt(const SymmetricBase& base, const WeightFn& w,
                       std::optional<double> closed_form_norm, const ConstructionOptions& opts) {
  if (opts.check_invariants) {
    base.check();
    w.check(base.center, base.scale);
  }
  auto kernel = [base, w](double x) {
    const double lp = base.log_pdf(x);
    if (lp == -kInf) return lp;
    return (w.log_w ? w.log_w(x) : std::log(w.w(x))) + lp;
  };
  return ConstructedFamily("tilt(" + base.name + ")", FamilyKind::kTilted, base, kernel,
                           closed_form_norm, {w.symmetry_point, base.center}, 0.0, 0.0, opts);
}

ConstructedFamily tilt_exp_cdf(const SymmetricBase& base, double k, const ConstructionOptions& opts) {
  if (base.center != 0.0) throw DomainError("tilt_exp_cdf: base must be symmetric about zero");
  if (!std::isfinite(k)) throw DomainError("tilt_exp_cdf: k must be finite");
  if (opts.check_invariants) base.check();
  const std::string name = "exp-cdf-tilt(" + base.name + ")";
  if (k == 0.0) {
    return ConstructedFamily(name, FamilyKind::kExpCdfTilted, base, base.log_pdf, 1.0, {0.0}, 0.0,
                             0.0, opts);
  }
  auto kernel = [base, k](double x) { return base.log_pdf(x) + k * base.cdf(std::fabs(x)); };
  // 2(e^k - e^{k/2})/k written to stay accurate for small |k|.
  const double norm = 2.0 * std::exp(0.5 * k) * std::expm1(0.5 * k) / k;
  return ConstructedFamily(name, FamilyKind::kExpCdfTilted, base, kernel, norm, {0.0}, k, 0.0, opts);
}

ConstructedFamily tilt_pow_cdf(const SymmetricBase& base, double k, const ConstructionOptions& opts) {
  if (base.center != 0.0) throw DomainError("tilt_pow_cdf: base must be symmetric about zero");
  if (!(k > -1.0) || !std::isfinite(k)) throw DomainError("tilt_pow_cdf: k must exceed -1");
  if (opts.check_invariants) base.check();
  auto kernel = [base, k](double x) { return base.log_pdf(x) + k * std::log(base.cdf(std::fabs(x))); };
  const double kp1 = k + 1.0;
  const double norm = -2.0 * std::expm1(-kp1 * std::log(2.0)) / kp1;
  return ConstructedFamily("pow-cdf-tilt(" + base.name + ")", FamilyKind::kPowCdfTilted, base,
                           kernel, norm, {0.0}, k, 0.0, opts);
}

ConstructedFamily fold(const SymmetricBase& base, const FoldTransform& h,
                       const ConstructionOptions& opts) {
  if (opts.check_invariants) {
    base.check();
    h.check(base.scale);
  }
  auto kernel = [base, h](double x) { return base.log_pdf(h.h(x)); };
  return ConstructedFamily("fold(" + base.name + ")", FamilyKind::kFolded, base, kernel,
                           std::nullopt, {h.symmetry_point}, base.center, 0.0, opts);
}

ConstructedFamily fold_half(const SymmetricBase& base, const ConstructionOptions& opts) {
  if (opts.check_invariants) base.check();
  const double k = base.center;
  const std::string name = "fold-half(" + base.name + ")";
  if (k == 0.0) {
    return ConstructedFamily(name, FamilyKind::kFoldedHalf, base, base.log_pdf, 1.0, {0.0}, 0.0,
                             0.0, opts);
  }
  auto kernel = [base](double x) { return base.log_pdf(std::fabs(x)); };
  return ConstructedFamily(name, FamilyKind::kFoldedHalf, base, kernel, 2.0 * base.cdf(2.0 * k),
                           {0.0}, k, 0.0, opts);
}

ConstructedFamily fold_skew(const SymmetricBase& base, const std::function<double(double)>& skew_cdf,
                            double lambda, const ConstructionOptions& opts) {
  if (!std::isfinite(lambda)) throw DomainError("fold_skew: lambda must be finite");
  if (opts.check_invariants) base.check();
  const double k = base.center;
  auto kernel = [base, skew_cdf, lambda](double x) {
    return base.log_pdf(std::fabs(x)) + std::log(skew_cdf(lambda * x));
  };
  return ConstructedFamily("fold-skew(" + base.name + ")", FamilyKind::kFoldedSkewed, base, kernel,
                           base.cdf(2.0 * k), {0.0}, k, lambda, opts);
}

double lc_pdf(double x, double k) {
  const double d = std::fabs(x - k);
  // log(1 + d^2) without overflowing d^2 far in the tails.
  const double log_w = d > 1.0 ? 2.0 * std::log(d) + std::log1p(1.0 / (d * d)) : std::log1p(d * d);
  return std::exp(log_w - std::fabs(x)) / (2.0 * (3.0 + k * k));
}

double lc_moment(int r, double k) {
  if (r < 1 || r > 6) throw DomainError("lc_moment: r must lie in 1..6");
  // Standard Laplace: E X^s = s! for even s, 0 for odd s.
  auto laplace = [](int s) {
    if (s % 2 != 0) return 0.0;
    double f = 1.0;
    for (int i = 2; i <= s; ++i) f *= i;
    return f;
  };
  return ((1.0 + k * k) * laplace(r) - 2.0 * k * laplace(r + 1) + laplace(r + 2)) / (3.0 + k * k);
}

ConstructedFamily lc_family(double k, const ConstructionOptions& opts) {
  if (!std::isfinite(k)) throw DomainError("lc_family: k must be finite");
  WeightFn w{[k](double x) { return 1.0 + (x - k) * (x - k); }, k, Convexity::kConvex, {}};
  w.log_w = [k](double x) {
    const double d = std::fabs(x - k);
    return d > 1.0 ? 2.0 * std::log(d) + std::log1p(1.0 / (d * d)) : std::log1p(d * d);
  };
  ConstructedFamily fam = tilt(laplace_base(), w, 3.0 + k * k, opts);
  return fam;
}

std::vector<double> numeric_modes(const std::function<double(double)>& pdf, double lo, double hi,
                                  double center, double scale, int grid_points) {
  const double ulo = std::atan((lo - center) / scale);
  const double uhi = std::atan((hi - center) / scale);
  auto g = [&](double u) { return pdf(center + scale * std::tan(u)); };
  std::vector<double> modes = grid_local_maxima(g, ulo, uhi, grid_points);
  for (double& m : modes) m = center + scale * std::tan(m);
  return modes;
}

std::vector<double> numeric_modes(const ConstructedFamily& fam) {
  auto [lo, hi] = fam.search_interval();
  const double mid = 0.5 * (lo + hi);
  const double half = 0.6 * (hi - lo);
  const RealLineHint hint = fam.integration_hint();
  return numeric_modes([&](double x) { return fam.pdf(x); }, mid - half, mid + half, hint.center,
                       hint.scale);
}

const std::vector<NamedFamilyInfo>& named_families() {
  static const std::vector<NamedFamilyInfo> registry = {
      {"lc", "Laplace-Cauchy: Laplace base tilted by 1+(x-k)^2", {{"k", 1.0}}},
      {"bimodal-logistic-1", "logistic base tilted by exp(k G(|x|))", {{"k", 2.0}}},
      {"bimodal-logistic-2", "logistic base tilted by G(|x|)^k", {{"k", 3.0}}},
      {"bimodal-cauchy", "Cauchy(k,1) folded by |x|", {{"k", 2.0}}},
      {"bimodal-hs", "hyperbolic secant(k,1) folded by |x|", {{"k", 1.0}}},
      {"skew-bimodal-normal", "Normal(k,1) folded by |x| and skewed by Phi(lambda x)",
       {{"k", 1.0}, {"lambda", 2.0}}},
  };
  return registry;
}

std::unique_ptr<ConstructedFamily> make_named_family(const std::string& name,
                                                     const std::map<std::string, double>& params) {
  const auto& reg = named_families();
  const auto it = std::find_if(reg.begin(), reg.end(), [&](const auto& f) { return f.name == name; });
  if (it == reg.end()) {
    std::string names;
    for (const auto& f : reg) names += (names.empty() ? "" : ", ") + f.name;
    throw DomainError("unknown family '" + name + "'; known families: " + names);
  }
  std::map<std::string, double> p = it->defaults;
  for (const auto& [key, value] : params) {
    if (p.find(key) == p.end()) {
      std::string keys;
      for (const auto& [dk, dv] : it->defaults) keys += (keys.empty() ? "" : ", ") + dk;
      throw DomainError("family '" + name + "' has no parameter '" + key + "'; valid: " + keys);
    }
    p[key] = value;
  }
  const double k = p.at("k");
  if (name == "lc") return std::make_unique<ConstructedFamily>(lc_family(k));
  if (name == "bimodal-logistic-1")
    return std::make_unique<ConstructedFamily>(tilt_exp_cdf(logistic_base(), k));
  if (name == "bimodal-logistic-2")
    return std::make_unique<ConstructedFamily>(tilt_pow_cdf(logistic_base(), k));
  const FoldTransform abs_fold{[](double x) { return std::fabs(x); }, 0.0};
  if (name == "bimodal-cauchy") return std::make_unique<ConstructedFamily>(fold(cauchy_base(k), abs_fold));
  if (name == "bimodal-hs")
    return std::make_unique<ConstructedFamily>(fold(hyperbolic_secant_base(k), abs_fold));
  return std::make_unique<ConstructedFamily>(
      fold_skew(normal_base(k), [](double x) { return norm_cdf(x); }, p.at("lambda")));
}

}  // namespace bimodal
