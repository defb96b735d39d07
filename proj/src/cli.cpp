#include "bimodal/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "bimodal/constructors.hpp"
#include "bimodal/errors.hpp"

#ifndef BIMODAL_VERSION
#define BIMODAL_VERSION "0.0.0"
#endif

namespace bimodal::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Whole-string parse; false on trailing junk, empty text or non-finite.
bool parse_finite(const std::string& text, double* value) {
  if (text.empty()) return false;
  std::size_t used = 0;
  try {
    *value = std::stod(text, &used);
  } catch (const std::exception&) {
    return false;
  }
  return used == text.size() && std::isfinite(*value);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string piece;
  std::istringstream in(s);
  while (std::getline(in, piece, sep)) out.push_back(piece);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::string model_listing() {
  std::string names;
  for (ModelKind k : all_models()) names += (names.empty() ? "" : ", ") + model_name(k);
  return names;
}

ModelKind model_or_usage(const std::string& name) {
  try {
    return parse_model(name);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

std::unique_ptr<DensityModel> model_with_params(ModelKind kind, const std::string& params) {
  try {
    return make_model(kind, parse_params(params));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
}

// Writes to --output when given, otherwise to `out`.
void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot open output file '" + path + "'");
  file << text;
}

std::string format_g(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string grid_csv(const Grid& g, const DensityModel& m) {
  std::string csv = "x,pdf,cdf\n";
  for (int i = 0; i < g.points; ++i) {
    const double x = g.min + (g.max - g.min) * i / (g.points - 1);
    csv += json_number(x) + "," + json_number(m.pdf(x)) + "," + json_number(m.cdf(x)) + "\n";
  }
  return csv;
}

struct Options {
  std::string model = "bun";
  std::string models = "bun,bust,bul";
  std::string family;
  std::string input;
  std::string output;
  std::string params;
  std::string grid = "-6,6,121";
  std::uint64_t seed = 42;
  int starts = 5;
  std::size_t n = 10;
  bool no_meta = false;
};

OptimizerConfig fit_config(const Options& o) {
  OptimizerConfig cfg = default_fit_config();
  if (o.starts < 1) throw UsageError("--starts must be at least 1");
  cfg.n_starts = o.starts;
  cfg.seed = o.seed;
  return cfg;
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const ModelKind kind = model_or_usage(o.model);
  const Dataset data = ingest_csv(o.input);
  RngStream rng(o.seed);
  const FitReport r = fit_ml(data, kind, fit_config(o), rng);
  if (r.failed) {
    err << "error: fit: " << one_line(r.message) << "\n";
    return kExitFitFailure;
  }
  emit(report_json(r, o.seed, !o.no_meta) + "\n", o.output, out);
  (o.output.empty() ? err : out) << report_table({r});
  return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<ModelKind> kinds;
  for (const std::string& name : split(o.models, ',')) kinds.push_back(model_or_usage(trim(name)));
  if (kinds.size() < 2) throw UsageError("compare needs at least two models in --models");
  const Dataset data = ingest_csv(o.input);
  RngStream rng(o.seed);
  const std::vector<FitReport> ranked = compare(data, kinds, fit_config(o), rng);
  std::string json = "[\n";
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    json += report_json(ranked[i], o.seed, !o.no_meta) + (i + 1 < ranked.size() ? ",\n" : "\n");
  }
  json += "]\n";
  emit(json, o.output, out);
  (o.output.empty() ? err : out) << report_table(ranked);
  const bool any_ok = std::any_of(ranked.begin(), ranked.end(), [](const FitReport& r) { return !r.failed; });
  if (!any_ok) {
    err << "error: fit: every model failed\n";
    return kExitFitFailure;
  }
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const auto model = model_with_params(model_or_usage(o.model), o.params);
  RngStream rng(o.seed);
  std::string text;
  for (double v : model->sample(o.n, rng)) text += json_number(v) + "\n";
  emit(text, o.output, out);
  return kExitOk;
}

int cmd_pdf(const Options& o, std::ostream& out) {
  const auto model = model_with_params(model_or_usage(o.model), o.params);
  emit(grid_csv(parse_grid(o.grid), *model), o.output, out);
  return kExitOk;
}

int cmd_ks(const Options& o, std::ostream& out) {
  const ModelKind kind = model_or_usage(o.model);
  const auto model = model_with_params(kind, o.params);
  const Dataset data = ingest_csv(o.input);
  const KsResult ks = ks_test(data, [&](double x) { return model->cdf(x); });
  std::string json = "{\"model\": " + json_string(model_name(kind)) + ", \"n\": " + std::to_string(data.size()) +
                     ", \"D\": " + json_number(ks.D) + ", \"pvalue\": " + json_number(ks.pvalue) + "}\n";
  emit(json, o.output, out);
  return kExitOk;
}

int cmd_construct(const Options& o, std::ostream& out) {
  if (o.family.empty()) {
    std::string names;
    for (const auto& f : named_families()) names += (names.empty() ? "" : ", ") + f.name;
    throw UsageError("--family is required; known families: " + names);
  }
  std::map<std::string, double> params;
  for (const auto& [key, value] : parse_params(o.params)) params[key] = value;
  std::unique_ptr<ConstructedFamily> fam;
  try {
    fam = make_named_family(o.family, params);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  emit(grid_csv(parse_grid(o.grid), *fam), o.output, out);
  return kExitOk;
}

}  // namespace

const char* version() { return BIMODAL_VERSION; }

Dataset parse_csv(std::istream& in, const std::string& name) {
  std::vector<std::pair<std::size_t, std::string>> lines;  // (line number, text)
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (number == 1 && t.rfind("\xEF\xBB\xBF", 0) == 0) t = trim(t.substr(3));
    if (!t.empty()) lines.emplace_back(number, t);
  }
  if (lines.empty()) throw IngestionError(name + ": no data rows");
  double v = 0.0;
  std::size_t first = 0;
  if (lines.size() > 1 && !parse_finite(lines[0].second, &v)) first = 1;  // header
  std::vector<double> values;
  std::vector<std::size_t> bad_rows;
  std::string detail;
  for (std::size_t i = first; i < lines.size(); ++i) {
    if (parse_finite(lines[i].second, &v)) {
      values.push_back(v);
      continue;
    }
    const std::size_t row = i - first + 1;
    bad_rows.push_back(row);
    if (bad_rows.size() <= 5) {
      detail += (detail.empty() ? "" : "; ") + std::string("row ") + std::to_string(row) + " (line " +
                std::to_string(lines[i].first) + "): '" + lines[i].second + "'";
    }
  }
  if (!bad_rows.empty()) {
    const std::string more = bad_rows.size() > 5 ? " and " + std::to_string(bad_rows.size() - 5) + " more" : "";
    throw IngestionError(name + ": non-numeric value at " + detail + more, bad_rows);
  }
  return Dataset(std::move(values), name, name);
}

Dataset ingest_csv(const std::string& path) {
  if (path.empty()) throw UsageError("--input is required");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestionError("cannot open input file '" + path + "'");
  return parse_csv(in, path);
}

NamedValues parse_params(const std::string& text) {
  NamedValues out;
  if (trim(text).empty()) return out;
  for (const std::string& piece : split(text, ',')) {
    const auto eq = piece.find('=');
    if (eq == std::string::npos) throw UsageError("parameter '" + trim(piece) + "' is not name=value");
    const std::string key = trim(piece.substr(0, eq));
    double v = 0.0;
    if (key.empty()) throw UsageError("empty parameter name in '" + piece + "'");
    if (!parse_finite(trim(piece.substr(eq + 1)), &v)) {
      throw UsageError("parameter '" + key + "' needs a finite number, got '" + trim(piece.substr(eq + 1)) + "'");
    }
    for (const auto& kv : out) {
      if (kv.first == key) throw UsageError("parameter '" + key + "' given twice");
    }
    out.emplace_back(key, v);
  }
  return out;
}

Grid parse_grid(const std::string& text) {
  const auto parts = split(text, ',');
  double lo = 0.0, hi = 0.0, pts = 0.0;
  if (parts.size() != 3 || !parse_finite(trim(parts[0]), &lo) || !parse_finite(trim(parts[1]), &hi) ||
      !parse_finite(trim(parts[2]), &pts)) {
    throw UsageError("--grid expects min,max,points, got '" + text + "'");
  }
  if (!(lo < hi)) throw UsageError("--grid needs min < max");
  if (pts != std::floor(pts) || pts < 2 || pts > 1e7) throw UsageError("--grid points must be an integer >= 2");
  return {lo, hi, static_cast<int>(pts)};
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_g(v, 17);
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string report_json(const FitReport& r, std::uint64_t seed, bool with_meta) {
  std::string j = "{\n";
  j += "  \"model\": " + json_string(r.model) + ",\n";
  j += "  \"n\": " + std::to_string(r.n) + ",\n";
  j += "  \"estimates\": {";
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    j += (i ? ", " : "") + json_string(r.estimates[i].first) + ": " + json_number(r.estimates[i].second);
  }
  j += "},\n";
  j += "  \"loglik\": " + json_number(r.loglik) + ",\n";
  j += "  \"aic\": " + json_number(r.aic) + ",\n";
  j += "  \"bic\": " + json_number(r.bic) + ",\n";
  j += "  \"ks\": {\"D\": " + json_number(r.ks_stat) + ", \"pvalue\": " + json_number(r.ks_pvalue) + "},\n";
  j += std::string("  \"converged\": ") + (r.converged ? "true" : "false") + ",\n";
  if (r.failed) j += "  \"error\": " + json_string(r.message) + ",\n";
  j += "  \"seed\": " + std::to_string(seed);
  if (with_meta) {
    j += ",\n  \"meta\": {\"runtime_ms\": " + std::to_string(r.runtime_ms) + ", \"version\": " +
         json_string(version()) + "}";
  }
  return j + "\n}";
}

std::string report_table(const std::vector<FitReport>& reports) {
  std::ostringstream t;
  char line[256];
  std::snprintf(line, sizeof line, "%-9s %11s %10s %10s %8s %7s %5s  %s\n", "model", "loglik", "AIC", "BIC", "KS D",
                "p", "conv", "estimates");
  t << line;
  for (const FitReport& r : reports) {
    if (r.failed) {
      std::snprintf(line, sizeof line, "%-9s %s\n", r.model.c_str(), ("failed: " + one_line(r.message)).c_str());
      t << line;
      continue;
    }
    std::string est;
    for (const auto& [k, v] : r.estimates) est += (est.empty() ? "" : " ") + k + "=" + format_g(v, 6);
    std::snprintf(line, sizeof line, "%-9s %11.4f %10.2f %10.2f %8.4f %7.3f %5s  ", r.model.c_str(), r.loglik, r.aic,
                  r.bic, r.ks_stat, r.ks_pvalue, r.converged ? "yes" : "no");
    t << line << est << "\n";
  }
  return t.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fit and evaluate bimodal distributions", "bimodal"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);
  Options o;

  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fit of one model to a CSV column");
  auto* cmp = app.add_subcommand("compare", "Fit several models and rank them by AIC");
  auto* sample = app.add_subcommand("sample", "Draw a sample, one value per line");
  auto* pdf = app.add_subcommand("pdf", "Tabulate x,pdf,cdf on a grid");
  auto* ks = app.add_subcommand("ks", "Kolmogorov-Smirnov distance between data and a model");
  auto* construct = app.add_subcommand("construct", "Tabulate a registered constructed family on a grid");

  const std::string model_help = "Model: " + model_listing();
  for (auto* sub : {fit, sample, pdf, ks}) sub->add_option("--model", o.model, model_help)->required();
  cmp->add_option("--models,--model", o.models, "Comma-separated models (default bun,bust,bul)");
  for (auto* sub : {fit, cmp, ks}) sub->add_option("--input", o.input, "Single-column CSV")->required();
  for (auto* sub : {sample, pdf, ks}) sub->add_option("--params", o.params, "name=value,...")->required();
  construct->add_option("--family", o.family, "Registered family name")->required();
  construct->add_option("--params", o.params, "name=value,... (defaults per family)");
  for (auto* sub : {pdf, construct}) sub->add_option("--grid", o.grid, "min,max,points")->capture_default_str();
  for (auto* sub : {fit, cmp, sample, pdf, ks, construct}) sub->add_option("--output", o.output, "Output file");
  for (auto* sub : {fit, cmp, sample}) sub->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  for (auto* sub : {fit, cmp}) {
    sub->add_option("--starts", o.starts, "Screened starts that get a full optimizer run")->capture_default_str();
    sub->add_flag("--no-meta", o.no_meta, "Omit runtime and version so output is reproducible");
  }
  sample->add_option("--n", o.n, "Sample size")->capture_default_str()->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(o, out, err);
    if (cmp->parsed()) return cmd_compare(o, out, err);
    if (sample->parsed()) return cmd_sample(o, out);
    if (pdf->parsed()) return cmd_pdf(o, out);
    if (ks->parsed()) return cmd_ks(o, out);
    return cmd_construct(o, out);
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const IngestionError& e) {
    err << "error: ingestion: " << one_line(e.what()) << "\n";
    return kExitIngestion;
  } catch (const std::exception& e) {
    err << "error: runtime: " << one_line(e.what()) << "\n";
    return 1;
  }
}

}  // namespace bimodal::cli
