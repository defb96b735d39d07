#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bimodal/density_model.hpp"

namespace bimodal {

/// A density symmetric about `center`, strictly positive on the real line.
struct SymmetricBase {
  std::string name;
  std::function<double(double)> log_pdf;
  std::function<double(double)> cdf;
  std::function<double(double)> quantile;
  double center = 0.0;
  double scale = 1.0;

  double pdf(double x) const;
  /// Samples 256 offsets and throws ConstructionError if the density is not
  /// symmetric about center (1e-12 relative) or not strictly positive.
  void check() const;
};

SymmetricBase normal_base(double location = 0.0, double scale = 1.0);
SymmetricBase logistic_base(double location = 0.0, double scale = 1.0);
SymmetricBase cauchy_base(double location = 0.0, double scale = 1.0);
/// Density sech(y)/pi with y = (x - location)/scale.
SymmetricBase hyperbolic_secant_base(double location = 0.0, double scale = 1.0);
SymmetricBase laplace_base(double location = 0.0, double scale = 1.0);

enum class Convexity { kConvex, kConcave, kUnknown };

struct WeightFn {
  std::function<double(double)> w;
  double symmetry_point = 0.0;
  Convexity convexity = Convexity::kUnknown;
  /// Optional log w(x); supply it for weights that overflow before the base
  /// density underflows (e.g. exp(k|x|)).
  std::function<double(double)> log_w;

  /// Positivity on 256 sampled points, plus the midpoint inequality on
  /// sampled pairs when the weight is declared convex.
  void check(double center, double scale) const;
};

struct FoldTransform {
  std::function<double(double)> h;
  double symmetry_point = 0.0;

  /// Symmetry about symmetry_point and midpoint convexity on sampled points.
  void check(double scale) const;
};

enum class FamilyKind { kTilted, kExpCdfTilted, kPowCdfTilted, kFolded, kFoldedHalf, kFoldedSkewed };

std::string to_string(FamilyKind kind);

struct ConstructionOptions {
  bool check_invariants = true;
  Quadrature quadrature{1e-13, 1e-13, 20000};
};

/// A normalized density built from a symmetric base. Immutable once built;
/// the normalizing constant and a cumulative table are computed up front so
/// pdf/cdf calls never re-integrate the whole line.
class ConstructedFamily : public DensityModel {
 public:
  using LogKernel = std::function<double(double)>;

  ConstructedFamily(std::string name, FamilyKind kind, SymmetricBase base, LogKernel log_kernel,
                    std::optional<double> closed_form_norm, std::vector<double> kinks,
                    double k, double lambda, const ConstructionOptions& opts);

  std::string name() const override { return name_; }
  double log_pdf(double x) const override;
  double cdf(double x) const override;
  double quantile(double p) const override;
  RealLineHint integration_hint() const override;

  FamilyKind kind() const { return kind_; }
  const SymmetricBase& base() const { return base_; }
  double norm_const() const { return norm_const_; }
  bool norm_is_closed_form() const { return closed_form_; }
  double k() const { return k_; }
  double lambda() const { return lambda_; }
  /// Unnormalized log density.
  double log_kernel(double x) const { return log_kernel_(x); }
  /// Interval used by numeric_modes before widening.
  std::pair<double, double> search_interval() const;

 private:
  void build_table(const Quadrature& q);
  double lower_mass(double x, std::size_t node) const;
  double upper_mass(double x, std::size_t node) const;

  std::string name_;
  FamilyKind kind_;
  SymmetricBase base_;
  LogKernel log_kernel_;
  double log_norm_ = 0.0;
  double norm_const_ = 1.0;
  bool closed_form_ = false;
  std::vector<double> kinks_;
  double k_ = 0.0;
  double lambda_ = 0.0;
  double center_ = 0.0;
  double scale_ = 1.0;
  // Cumulative table: nodes_ ascending, lower_[i] = P(X <= nodes_[i]),
  // upper_[i] = P(X > nodes_[i]), each summed from its own tail.
  std::vector<double> nodes_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  Quadrature table_quad_;
};

/// f(x) = w(x) g(x) / E_g[w(X)]. The normalizer is integrated numerically
/// unless `closed_form_norm` is given (it is then still checked by quadrature
/// when invariant checks are on).
ConstructedFamily tilt(const SymmetricBase& base, const WeightFn& w,
                       std::optional<double> closed_form_norm = std::nullopt,
                       const ConstructionOptions& opts = {});

/// f(x) = k g(x) exp(k G(|x|)) / (2(e^k - e^{k/2})) for a base symmetric about
/// zero; k = 0 returns the base itself.
ConstructedFamily tilt_exp_cdf(const SymmetricBase& base, double k,
                               const ConstructionOptions& opts = {});

/// f(x) = (k+1) g(x) G(|x|)^k / (2(1 - 2^{-(k+1)})); requires k > -1.
ConstructedFamily tilt_pow_cdf(const SymmetricBase& base, double k,
                               const ConstructionOptions& opts = {});

/// f(x) = g(h(x)) / integral of g(h(w)) dw, normalized by quadrature. The
/// base's center plays the role of k.
ConstructedFamily fold(const SymmetricBase& base, const FoldTransform& h,
                       const ConstructionOptions& opts = {});

/// f(x) = g(|x|) / (2 G(2k)) for a base centered at k != 0; k = 0 returns
/// the base unchanged.
ConstructedFamily fold_half(const SymmetricBase& base, const ConstructionOptions& opts = {});

/// f(x) = g(|x|) F(lambda x) / G(2k), where F is a cdf whose density is
/// symmetric about zero.
ConstructedFamily fold_skew(const SymmetricBase& base, const std::function<double(double)>& skew_cdf,
                            double lambda, const ConstructionOptions& opts = {});

/// Laplace-Cauchy density (1 + (x-k)^2) e^{-|x|} / (2(3+k^2)).
double lc_pdf(double x, double k);
/// E(X^r) for r in 1..6, expanded over standard Laplace moments.
double lc_moment(int r, double k);
/// The LC law as a tilt of the standard Laplace base.
ConstructedFamily lc_family(double k, const ConstructionOptions& opts = {});

/// All strict local maxima of the family's pdf, ascending.
std::vector<double> numeric_modes(const ConstructedFamily& fam);
/// Same search for any density given an interval; the grid is laid out in
/// u = atan((x - center)/scale) so heavy-tailed ranges keep resolution near
/// the center.
std::vector<double> numeric_modes(const std::function<double(double)>& pdf, double lo, double hi,
                                  double center, double scale, int grid_points = 4096);

struct NamedFamilyInfo {
  std::string name;
  std::string description;
  std::map<std::string, double> defaults;
};

const std::vector<NamedFamilyInfo>& named_families();
/// Builds a registered example family. Unknown names or parameter keys throw
/// DomainError listing the valid choices.
std::unique_ptr<ConstructedFamily> make_named_family(const std::string& name,
                                                     const std::map<std::string, double>& params);

}  // namespace bimodal
