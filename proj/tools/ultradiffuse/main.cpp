#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "suites.hpp"
#include "ultradiffuse/errors.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace ultradiffuse::cli;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

void write_error_record(const fs::path& out, const ordered_json& record) {
  std::cerr << record.dump() << '\n';
  if (out.empty()) return;
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) return;
  std::ofstream file(out / "error.json", std::ios::binary);
  if (file) file << record.dump(2) << '\n';
}

int config_error(const fs::path& out, const std::string& sub, const std::string& key, const std::string& msg) {
  ordered_json rec;
  rec["status"] = "config_error";
  rec["subcommand"] = sub;
  rec["key"] = key;
  rec["message"] = msg;
  write_error_record(out, rec);
  return kExitConfig;
}

/// Thread count: command line, then ULTRADIFFUSE_THREADS, then the config file.
unsigned resolve_threads(int cli_threads, unsigned from_config) {
  if (cli_threads > 0) return static_cast<unsigned>(cli_threads);
  if (const char* env = std::getenv("ULTRADIFFUSE_THREADS"); env != nullptr && *env != '\0') {
    unsigned v = 0;
    const std::string s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
      throw ConfigError("ULTRADIFFUSE_THREADS", "expected a positive integer, got '" + s + "'");
    }
    return v;
  }
  return from_config;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<std::string, std::function<Report(const RunContext&)>> suites{
      {"laws", run_laws},         {"moments", run_moments}, {"simulate", run_simulate},
      {"converge", run_converge}, {"density", run_density},
  };

  CLI::App app{"Random walks on (K/O)^d and their ultrametric diffusion limit"};
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
  int threads = 0;
  app.add_option("subcommand", subcommand, "laws | moments | simulate | converge | density")
      ->required()
      ->check(CLI::IsMember({"laws", "moments", "simulate", "converge", "density"}));
  app.add_option("--config", config_path, "INI configuration file")->required();
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--seed", seed, "Master seed (overrides run.seed)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitConfig;
  }

  const fs::path out(out_dir);
  RunContext ctx;
  try {
    ctx.config = load_config(config_path);
    ctx.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : ctx.config.seed;
    ctx.threads = resolve_threads(threads, ctx.config.threads);
  } catch (const ConfigError& e) {
    return config_error(out, subcommand, e.key(), e.what());
  }
  ctx.out = out;

  try {
    fs::create_directories(out);
    const Report report = suites.at(subcommand)(ctx);
    report.write(out);
    const auto failed = report.failures();
    if (!failed.empty()) {
      ordered_json rec;
      rec["status"] = "suite_failure";
      rec["subcommand"] = subcommand;
      rec["failed"] = failed.size();
      rec["rows"] = ordered_json::array();
      for (const ReportRow* row : failed) {
        rec["rows"].push_back({{"experiment", row->experiment},
                               {"params", row->params},
                               {"value", row->value},
                               {"error_bound", row->error_bound},
                               {"oracle", row->oracle ? ordered_json(*row->oracle) : ordered_json(nullptr)},
                               {"tolerance", row->tolerance}});
      }
      write_error_record(out, rec);
      return kExitFailure;
    }
    std::error_code ec;
    fs::remove(out / "error.json", ec);
    std::cout << subcommand << ": " << report.rows().size() << " rows, all pass\n";
    return kExitPass;
  } catch (const ConfigError& e) {
    return config_error(out, subcommand, e.key(), e.what());
  } catch (const std::exception& e) {
    ordered_json rec;
    rec["status"] = "runtime_error";
    rec["subcommand"] = subcommand;
    rec["message"] = e.what();
    write_error_record(out, rec);
    return kExitFailure;
  }
}
