#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "bimodal/fit.hpp"

namespace bimodal::cli {

enum ExitCode : int { kExitOk = 0, kExitUsage = 2, kExitIngestion = 3, kExitFitFailure = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unreadable, empty or non-numeric input. rows() lists the offending data
/// rows (1-based, header excluded).
class IngestionError : public std::runtime_error {
 public:
  IngestionError(const std::string& what, std::vector<std::size_t> rows = {})
      : std::runtime_error(what), rows_(std::move(rows)) {}
  const std::vector<std::size_t>& rows() const { return rows_; }

 private:
  std::vector<std::size_t> rows_;
};

/// One numeric column, LF or CRLF. A non-numeric first line followed by more
/// lines is taken as a header. Blank lines are skipped.
Dataset parse_csv(std::istream& in, const std::string& name);
Dataset ingest_csv(const std::string& path);

/// "mu=0,sigma=1,k=2" in the given order. Throws UsageError on malformed
/// pairs, duplicate names or non-finite values.
NamedValues parse_params(const std::string& text);

struct Grid {
  double min;
  double max;
  int points;
};
/// "min,max,points" with min < max and points >= 2.
Grid parse_grid(const std::string& text);

/// 17 significant digits; non-finite values become null.
std::string json_number(double v);
std::string json_string(const std::string& s);

/// FitReport as one JSON object. Without meta the output depends only on
/// the data, model and seed.
std::string report_json(const FitReport& r, std::uint64_t seed, bool with_meta);
std::string report_table(const std::vector<FitReport>& reports);

/// Full command-line entry point; returns the process exit code. Errors go
/// to `err` as a single "error: <category>: <message>" line.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

const char* version();

}  // namespace bimodal::cli
