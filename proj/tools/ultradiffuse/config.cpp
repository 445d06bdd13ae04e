#include "config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "ultradiffuse/digit_string.hpp"
#include "ultradiffuse/errors.hpp"

namespace ultradiffuse::cli {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"field", {"family", "p", "f", "modulus", "d"}},
      {"model", {"b", "sigma"}},
      {"scale", {"m_list"}},
      {"run", {"seed", "samples", "tol", "horizon", "threads"}},
      {"laws", {"norm_exponents", "n_list", "cutoff", "shells", "ks_steps"}},
      {"moments", {"q_list", "d_list", "b_list", "r_fractions", "n_max", "mc_steps", "mc_r_fraction"}},
      {"simulate", {"m", "time", "dump_paths", "max_shell"}},
      {"converge", {"t", "histories", "mc_m", "threshold"}},
      {"density", {"times", "shell_min", "shell_max", "balls"}},
      {"histories", {}},
  };
  return s;
}

std::string trim(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

/// "section.key" (or "section" for a header) on a 1-based line, else "line N".
std::string key_at_line(const std::string& text, unsigned long line) {
  std::istringstream in(text);
  std::string section;
  std::string current;
  for (unsigned long n = 1; n <= line && std::getline(in, current); ++n) {
    const std::string t = trim(current);
    if (t.size() >= 2 && t.front() == '[' && t.back() == ']') section = trim(t.substr(1, t.size() - 2));
  }
  const std::string t = trim(current);
  if (t.size() >= 2 && t.front() == '[' && t.back() == ']') return section;
  const auto eq = t.find('=');
  if (eq == std::string::npos || t.empty() || t.front() == ';' || t.front() == '#') return "line " + std::to_string(line);
  const std::string key = trim(t.substr(0, eq));
  return section.empty() ? key : section + "." + key;
}

template <class T>
T parse_number(const std::string& key, const std::string& raw) {
  const std::string text = trim(raw);
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(key, "cannot parse '" + text + "' as a number");
  }
  return value;
}

std::vector<std::string> split_list(const std::string& raw, const char* seps = ",") {
  std::vector<std::string> parts;
  const std::string text = trim(raw);
  if (text.empty()) return parts;
  boost::algorithm::split(parts, text, boost::algorithm::is_any_of(seps), boost::algorithm::token_compress_on);
  for (auto& p : parts) p = trim(p);
  std::erase_if(parts, [](const std::string& p) { return p.empty(); });
  return parts;
}

/// Comma list of integers; "a..b" expands to an inclusive range.
std::vector<int> parse_int_list(const std::string& key, const std::string& raw) {
  std::vector<int> out;
  for (const auto& item : split_list(raw)) {
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<int>(key, item));
      continue;
    }
    const int lo = parse_number<int>(key, item.substr(0, dots));
    const int hi = parse_number<int>(key, item.substr(dots + 2));
    if (hi < lo || hi - lo > 100'000) throw ConfigError(key, "bad range '" + item + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  for (const auto& item : split_list(raw)) out.push_back(parse_number<double>(key, item));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

template <class T>
std::vector<T> parse_unsigned_list(const std::string& key, const std::string& raw) {
  std::vector<T> out;
  for (const auto& item : split_list(raw)) out.push_back(parse_number<T>(key, item));
  if (out.empty()) throw ConfigError(key, "empty list");
  return out;
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigError(key, message);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {}

  std::optional<std::string> get(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto value = sec->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!value) return std::nullopt;
    return *value;
  }

 private:
  const pt::ptree& tree_;
};

void check_schema(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError(section, "unknown section or key outside a section");
    if (section == "histories") continue;
    for (const auto& [key, value] : body) {
      if (!it->second.contains(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }
}

}  // namespace

FieldParamsPtr field_for_order(std::uint32_t q, int d) {
  if (q < 2) throw InvalidParameters("field order must be at least 2");
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (!is_prime(p) || q % p != 0) continue;
    std::uint32_t rest = q;
    int f = 0;
    while (rest % p == 0) {
      rest /= p;
      ++f;
    }
    if (rest != 1) break;
    return f == 1 ? FieldParams::padic(p, d) : FieldParams::laurent(p, f, d);
  }
  throw InvalidParameters("field order " + std::to_string(q) + " is not a prime power");
}

FieldBall parse_ball(const FieldParamsPtr& field, const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw InvalidParameters("ball '" + text + "' needs center:log_radius");
  const std::string center = trim(text.substr(0, colon));
  const int radius = parse_number<int>("ball", text.substr(colon + 1));
  if (center == "*") return FieldBall::everything(field);
  return FieldBall{parse_point(field, center), radius, false};
}

History parse_history(const FieldParamsPtr& field, const std::string& text) {
  History h;
  for (const auto& token : split_list(text, " \t")) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw InvalidParameters("history entry '" + token + "' needs time:center:log_radius");
    HistoryStep step;
    step.time = parse_number<double>("history", token.substr(0, colon));
    step.ball = parse_ball(field, token.substr(colon + 1));
    h.steps.push_back(std::move(step));
  }
  if (h.steps.empty()) throw InvalidParameters("empty history");
  h.validate();
  return h;
}

const NamedHistory& ExperimentConfig::history(const std::string& name) const {
  for (const auto& h : histories) {
    if (h.name == name) return h;
  }
  throw ConfigError("histories." + name, "no such history");
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(key_at_line(text, e.line()), e.message());
  }
  check_schema(tree);
  const Reader r(tree);
  ExperimentConfig c;

  if (auto v = r.get("field", "family")) c.family = trim(*v);
  require(c.family == "padic" || c.family == "laurent", "field.family", "family must be padic or laurent");
  if (auto v = r.get("field", "p")) c.p = parse_number<std::uint32_t>("field.p", *v);
  if (auto v = r.get("field", "f")) c.f = parse_number<int>("field.f", *v);
  if (auto v = r.get("field", "d")) c.d = parse_number<int>("field.d", *v);
  if (auto v = r.get("field", "modulus")) c.modulus = parse_unsigned_list<std::uint32_t>("field.modulus", *v);
  require(is_prime(c.p) && c.p <= 36, "field.p", "p must be a prime <= 36");
  require(c.d >= 1 && c.d <= 6, "field.d", "d must lie in 1..6");
  require(c.f >= 1 && c.f <= 8, "field.f", "f must lie in 1..8");
  if (c.family == "padic") {
    require(c.f == 1, "field.f", "padic fields have f = 1");
    require(c.modulus.empty(), "field.modulus", "padic fields take no modulus");
    c.field = FieldParams::padic(c.p, c.d);
  } else {
    try {
      c.field = FieldParams::laurent(c.p, c.f, c.d, c.modulus);
    } catch (const std::exception& e) {
      throw ConfigError("field.modulus", e.what());
    }
  }

  if (auto v = r.get("model", "b")) c.b = parse_number<double>("model.b", *v);
  if (auto v = r.get("model", "sigma")) c.sigma = parse_number<double>("model.sigma", *v);
  require(c.b > 0.0 && c.b <= 64.0, "model.b", "b must lie in (0, 64]");
  require(c.sigma > 0.0 && std::isfinite(c.sigma), "model.sigma", "sigma must be positive");

  c.m_list = parse_int_list("scale.m_list", r.get("scale", "m_list").value_or("1..14"));
  for (int m : c.m_list) require(m >= 0 && m <= 40, "scale.m_list", "m must lie in 0..40");

  if (auto v = r.get("run", "seed")) c.seed = parse_number<std::uint64_t>("run.seed", *v);
  if (auto v = r.get("run", "samples")) c.samples = parse_number<std::uint64_t>("run.samples", *v);
  if (auto v = r.get("run", "tol")) c.tol = parse_number<double>("run.tol", *v);
  if (auto v = r.get("run", "horizon")) c.horizon = parse_number<double>("run.horizon", *v);
  if (auto v = r.get("run", "threads")) c.threads = parse_number<unsigned>("run.threads", *v);
  require(c.samples >= 1 && c.samples <= 100'000'000, "run.samples", "samples must lie in 1..1e8");
  require(c.tol > 0.0 && c.tol <= 1e-3, "run.tol", "tol must lie in (0, 1e-3]");
  require(c.horizon > 0.0 && std::isfinite(c.horizon), "run.horizon", "horizon must be positive");
  require(c.threads >= 1 && c.threads <= 1024, "run.threads", "threads must lie in 1..1024");

  if (auto v = r.get("laws", "norm_exponents")) c.laws_norm_exponents = parse_int_list("laws.norm_exponents", *v);
  if (auto v = r.get("laws", "n_list")) c.laws_n_list = parse_int_list("laws.n_list", *v);
  if (auto v = r.get("laws", "cutoff")) c.laws_cutoff = parse_number<int>("laws.cutoff", *v);
  if (auto v = r.get("laws", "shells")) c.laws_shells = parse_number<int>("laws.shells", *v);
  if (auto v = r.get("laws", "ks_steps")) c.laws_ks_steps = parse_int_list("laws.ks_steps", *v);
  for (int k : c.laws_norm_exponents) require(k >= 0 && k <= 60, "laws.norm_exponents", "exponents must lie in 0..60");
  for (int n : c.laws_n_list) require(n >= 1 && n <= 5, "laws.n_list", "n must lie in 1..5");
  for (int n : c.laws_ks_steps) require(n >= 1 && n <= 10'000, "laws.ks_steps", "steps must lie in 1..10000");
  require(c.laws_cutoff >= 1 && c.laws_cutoff <= 12, "laws.cutoff", "cutoff must lie in 1..12");
  require(c.laws_shells >= 1 && c.laws_shells <= 2000, "laws.shells", "shells must lie in 1..2000");

  if (auto v = r.get("moments", "q_list")) c.moments_q_list = parse_unsigned_list<std::uint32_t>("moments.q_list", *v);
  if (auto v = r.get("moments", "d_list")) c.moments_d_list = parse_int_list("moments.d_list", *v);
  if (auto v = r.get("moments", "b_list")) c.moments_b_list = parse_double_list("moments.b_list", *v);
  if (auto v = r.get("moments", "r_fractions")) c.moments_r_fractions = parse_double_list("moments.r_fractions", *v);
  if (auto v = r.get("moments", "n_max")) c.moments_n_max = parse_number<std::uint64_t>("moments.n_max", *v);
  if (auto v = r.get("moments", "mc_steps")) c.moments_mc_steps = parse_int_list("moments.mc_steps", *v);
  if (auto v = r.get("moments", "mc_r_fraction")) {
    c.moments_mc_r_fraction = parse_number<double>("moments.mc_r_fraction", *v);
  }
  for (auto q : c.moments_q_list) {
    try {
      field_for_order(q, 1);
    } catch (const std::exception&) {
      throw ConfigError("moments.q_list", "q = " + std::to_string(q) + " is not a prime power");
    }
    require(q <= 256, "moments.q_list", "q must be at most 256");
  }
  for (int d : c.moments_d_list) require(d >= 1 && d <= 6, "moments.d_list", "d must lie in 1..6");
  for (double b : c.moments_b_list) require(b > 0.0 && b <= 64.0, "moments.b_list", "b must lie in (0, 64]");
  for (double f : c.moments_r_fractions) require(f > 0.0 && f < 1.0, "moments.r_fractions", "fractions must lie in (0,1)");
  require(c.moments_n_max >= 1 && c.moments_n_max <= 1'000'000, "moments.n_max", "n_max must lie in 1..1e6");
  for (int n : c.moments_mc_steps) require(n >= 1 && n <= 10'000, "moments.mc_steps", "steps must lie in 1..10000");
  require(c.moments_mc_r_fraction > 0.0 && c.moments_mc_r_fraction < 1.0, "moments.mc_r_fraction",
          "fraction must lie in (0,1)");

  if (auto v = r.get("simulate", "m")) c.simulate_m = parse_number<int>("simulate.m", *v);
  if (auto v = r.get("simulate", "time")) c.simulate_time = parse_number<double>("simulate.time", *v);
  if (auto v = r.get("simulate", "dump_paths")) c.simulate_dump_paths = parse_number<int>("simulate.dump_paths", *v);
  if (auto v = r.get("simulate", "max_shell")) c.simulate_max_shell = parse_number<int>("simulate.max_shell", *v);
  require(c.simulate_m >= 0 && c.simulate_m <= 40, "simulate.m", "m must lie in 0..40");
  require(c.simulate_time > 0.0 && c.simulate_time <= c.horizon, "simulate.time", "time must lie in (0, horizon]");
  require(c.simulate_dump_paths >= 0 && c.simulate_dump_paths <= 1000, "simulate.dump_paths",
          "dump_paths must lie in 0..1000");
  require(c.simulate_max_shell >= 1 && c.simulate_max_shell <= 200, "simulate.max_shell",
          "max_shell must lie in 1..200");

  if (auto v = r.get("converge", "t")) c.converge_t = parse_number<double>("converge.t", *v);
  if (auto v = r.get("converge", "histories")) c.converge_histories = split_list(*v);
  if (auto v = r.get("converge", "mc_m")) c.converge_mc_m = parse_int_list("converge.mc_m", *v);
  if (auto v = r.get("converge", "threshold")) c.converge_threshold = parse_number<double>("converge.threshold", *v);
  require(c.converge_t > 0.0 && std::isfinite(c.converge_t), "converge.t", "t must be positive");
  require(c.converge_threshold > 0.0, "converge.threshold", "threshold must be positive");
  for (int m : c.converge_mc_m) require(m >= 0 && m <= 20, "converge.mc_m", "m must lie in 0..20");

  if (auto v = r.get("density", "times")) c.density_times = parse_double_list("density.times", *v);
  if (auto v = r.get("density", "shell_min")) c.density_shell_min = parse_number<int>("density.shell_min", *v);
  if (auto v = r.get("density", "shell_max")) c.density_shell_max = parse_number<int>("density.shell_max", *v);
  if (auto v = r.get("density", "balls")) c.density_balls = split_list(*v);
  for (double t : c.density_times) require(t > 0.0 && std::isfinite(t), "density.times", "times must be positive");
  require(c.density_shell_min <= c.density_shell_max && c.density_shell_max - c.density_shell_min <= 400,
          "density.shell_max", "shell range must be nonempty and at most 400 wide");

  if (const auto sec = tree.get_child_optional("histories")) {
    for (const auto& [name, value] : *sec) {
      const std::string key = "histories." + name;
      try {
        c.histories.push_back({name, trim(value.data()), parse_history(c.field, value.data())});
      } catch (const std::exception& e) {
        throw ConfigError(key, e.what());
      }
    }
  }
  for (const auto& name : c.converge_histories) c.history(name);
  for (const auto& text : c.density_balls) {
    try {
      c.balls.push_back({text, parse_ball(c.field, text)});
    } catch (const std::exception& e) {
      throw ConfigError("density.balls", e.what());
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

}  // namespace ultradiffuse::cli
