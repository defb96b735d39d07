#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bimodal/density_model.hpp"
#include "bimodal/optimize.hpp"
#include "bimodal/rng.hpp"

namespace bimodal {

enum class ModelKind { kBun, kBunSym, kBust, kBustSym, kBul, kBulSym, kLogBun };

/// "bun", "bun-sym", "bust", "bust-sym", "bul", "bul-sym", "logbun".
std::string model_name(ModelKind kind);
/// Inverse of model_name; also accepts "bun-symmetric" style long forms and
/// is case-insensitive. Throws DomainError listing the valid names.
ModelKind parse_model(const std::string& name);
const std::vector<ModelKind>& all_models();

/// Free parameters in reporting order. Symmetric variants drop a.
const std::vector<std::string>& parameter_names(ModelKind kind);
inline int free_parameters(ModelKind kind) { return static_cast<int>(parameter_names(kind).size()); }

using NamedValues = std::vector<std::pair<std::string, double>>;

/// Builds the distribution for a parameter vector given in parameter_names
/// order (a = 0 for the symmetric variants). Throws DomainError on invalid
/// parameters.
std::unique_ptr<DensityModel> make_model(ModelKind kind, const std::vector<double>& params);
/// Same, from name=value pairs. Every free parameter must be present exactly
/// once; unknown names are rejected.
std::unique_ptr<DensityModel> make_model(ModelKind kind, const NamedValues& params);

/// Finite observations plus a sorted copy. Construction throws DomainError
/// on an empty vector or a non-finite value.
class Dataset {
 public:
  Dataset(std::vector<double> values, std::string name = "", std::string source = "");

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& sorted() const { return sorted_; }
  const std::string& name() const { return name_; }
  const std::string& source() const { return source_; }
  std::size_t size() const { return values_.size(); }

 private:
  std::vector<double> values_;
  std::vector<double> sorted_;
  std::string name_;
  std::string source_;
};

/// Minimum sample size accepted by fit_ml.
inline constexpr std::size_t kMinFitSize = 5;

struct FitReport {
  std::string model;
  std::size_t n = 0;
  NamedValues estimates;
  double loglik = 0.0;
  double aic = 0.0;
  double bic = 0.0;
  double ks_stat = 0.0;
  double ks_pvalue = 0.0;
  bool converged = false;
  /// Set when no start produced a usable optimum; the numeric fields are
  /// then meaningless and aic/bic are +inf.
  bool failed = false;
  int n_starts_used = 0;
  long runtime_ms = 0;
  /// Largest |score| over the coordinates checked for convergence.
  double max_abs_score = 0.0;
  /// True when mu sits exactly on an observation.
  bool mu_at_kink = false;
  std::string message;

  /// Throws std::out_of_range for an unknown name.
  double estimate(const std::string& name) const;
  std::vector<double> estimate_vector() const;
};

struct AicBic {
  double aic;
  double bic;
};

/// Throws DomainError unless n >= 1 and p >= 1.
AicBic aic_bic(double loglik, int p, std::size_t n);

struct KsResult {
  double D;
  double pvalue;
};

/// Survival function of the limiting Kolmogorov distribution,
/// P(sup|B(t)| > lambda).
double kolmogorov_sf(double lambda);

/// One-sample KS distance against `cdf`, with the asymptotic p-value taken at
/// (sqrt(n) + 0.12 + 0.11/sqrt(n)) D.
KsResult ks_test(const Dataset& data, const std::function<double(double)>& cdf);

/// Settings used by fit_ml when none are given: 5 refined starts.
OptimizerConfig default_fit_config();

/// Maximum likelihood over a deterministic start grid plus draws from `rng`.
/// cfg.n_starts is the number of best screened starts that get the full
/// optimizer run. Never throws on numerical trouble; returns a report with
/// failed = true instead.
FitReport fit_ml(const Dataset& data, ModelKind kind, const OptimizerConfig& cfg, RngStream& rng);

/// Fits every model with substreams of `rng` and sorts ascending by AIC,
/// then BIC, then model name. Failed fits are kept and sort last.
std::vector<FitReport> compare(const Dataset& data, const std::vector<ModelKind>& kinds,
                               const OptimizerConfig& cfg, RngStream& rng);

}  // namespace bimodal
