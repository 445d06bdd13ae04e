#include "report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ultradiffuse::cli {
namespace {

const char* check_name(Check c) {
  switch (c) {
    case Check::kAbs: return "abs";
    case Check::kLe: return "le";
    case Check::kGe: return "ge";
    case Check::kInfo: return "info";
  }
  return "info";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool ReportRow::pass() const {
  switch (check) {
    case Check::kInfo: return true;
    case Check::kAbs: return oracle && std::abs(value - *oracle) <= tolerance;
    case Check::kLe: return oracle && value <= *oracle + tolerance;
    case Check::kGe: return oracle && value >= *oracle - tolerance;
  }
  return false;
}

void Report::info(std::string experiment, std::string params, double value, double error_bound) {
  add({std::move(experiment), std::move(params), value, error_bound, std::nullopt, 0.0, Check::kInfo});
}

void Report::abs(std::string experiment, std::string params, double value, double error_bound, double oracle,
                 double tolerance) {
  add({std::move(experiment), std::move(params), value, error_bound, oracle, tolerance, Check::kAbs});
}

void Report::le(std::string experiment, std::string params, double value, double error_bound, double bound,
                double tolerance) {
  add({std::move(experiment), std::move(params), value, error_bound, bound, tolerance, Check::kLe});
}

std::vector<const ReportRow*> Report::failures() const {
  std::vector<const ReportRow*> out;
  for (const auto& r : rows_) {
    if (!r.pass()) out.push_back(&r);
  }
  return out;
}

void Report::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (subcommand_ + ".csv"), std::ios::binary);
  std::ofstream jsonl(dir / (subcommand_ + ".jsonl"), std::ios::binary);
  if (!csv || !jsonl) throw std::runtime_error("cannot write reports to " + dir.string());
  csv << "experiment,params,value,error_bound,oracle,tolerance,check,pass\n";
  for (const auto& r : rows_) {
    csv << csv_field(r.experiment) << ',' << csv_field(r.params) << ',' << format_number(r.value) << ','
        << format_number(r.error_bound) << ',' << (r.oracle ? format_number(*r.oracle) : "") << ','
        << format_number(r.tolerance) << ',' << check_name(r.check) << ',' << (r.pass() ? "true" : "false")
        << '\n';
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["params"] = r.params;
    j["value"] = json_number(r.value);
    j["error_bound"] = json_number(r.error_bound);
    j["oracle"] = r.oracle ? json_number(*r.oracle) : nlohmann::ordered_json(nullptr);
    j["tolerance"] = json_number(r.tolerance);
    j["check"] = check_name(r.check);
    j["pass"] = r.pass();
    jsonl << j.dump() << '\n';
  }
}

Params& Params::add(const std::string& key, const std::string& value) {
  if (!text_.empty()) text_ += ';';
  text_ += key + '=' + value;
  return *this;
}

Params& Params::add(const std::string& key, double value) { return add(key, format_number(value)); }

Params& Params::add(const std::string& key, long long value) { return add(key, std::to_string(value)); }

}  // namespace ultradiffuse::cli
