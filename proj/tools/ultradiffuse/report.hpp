#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ultradiffuse::cli {

/// How the pass column is derived from value, oracle and tolerance:
///   abs   |value - oracle| <= tolerance
///   le    value <= oracle + tolerance
///   ge    value >= oracle - tolerance
///   info  always passes (no claim is made)
enum class Check { kAbs, kLe, kGe, kInfo };

struct ReportRow {
  std::string experiment;
  std::string params;
  double value = 0.0;
  double error_bound = 0.0;
  std::optional<double> oracle;
  double tolerance = 0.0;
  Check check = Check::kInfo;

  bool pass() const;
};

class Report {
 public:
  explicit Report(std::string subcommand) : subcommand_(std::move(subcommand)) {}

  void add(ReportRow row) { rows_.push_back(std::move(row)); }
  void info(std::string experiment, std::string params, double value, double error_bound = 0.0);
  void abs(std::string experiment, std::string params, double value, double error_bound, double oracle,
           double tolerance);
  void le(std::string experiment, std::string params, double value, double error_bound, double bound,
          double tolerance = 0.0);

  const std::vector<ReportRow>& rows() const { return rows_; }
  std::vector<const ReportRow*> failures() const;

  /// Writes <dir>/<subcommand>.csv and <dir>/<subcommand>.jsonl.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string subcommand_;
  std::vector<ReportRow> rows_;
};

/// %.17g, with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double x);

/// Builds "k1=v1;k2=v2" parameter strings.
class Params {
 public:
  Params& add(const std::string& key, const std::string& value);
  Params& add(const std::string& key, double value);
  Params& add(const std::string& key, long long value);
  Params& add(const std::string& key, int value) { return add(key, static_cast<long long>(value)); }
  Params& add(const std::string& key, unsigned long long value) {
    return add(key, static_cast<long long>(value));
  }
  Params& add(const std::string& key, unsigned long value) { return add(key, static_cast<long long>(value)); }
  Params& add(const std::string& key, unsigned value) { return add(key, static_cast<long long>(value)); }
  operator std::string() const { return text_; }
  const std::string& str() const { return text_; }

 private:
  std::string text_;
};

}  // namespace ultradiffuse::cli
