#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ultradiffuse/embedding.hpp"

namespace ultradiffuse::cli {

/// A configuration problem, tagged with the offending "section.key".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct NamedHistory {
  std::string name;
  std::string text;
  History history;
};

struct BallSpec {
  std::string text;
  FieldBall ball;
};

struct ExperimentConfig {
  // [field]
  std::string family = "padic";
  std::uint32_t p = 2;
  int f = 1;
  std::vector<std::uint32_t> modulus;
  int d = 1;
  FieldParamsPtr field;

  // [model]
  double b = 1.0;
  double sigma = 1.0;

  // [scale]
  std::vector<int> m_list;

  // [run]
  std::uint64_t seed = 1;
  std::uint64_t samples = 100'000;
  double tol = 1e-10;
  double horizon = 1.0;
  unsigned threads = 1;

  // [laws]
  std::vector<int> laws_norm_exponents{0, 1, 2};
  std::vector<int> laws_n_list{1, 2, 3, 4};
  int laws_cutoff = 6;
  int laws_shells = 60;
  std::vector<int> laws_ks_steps{1, 10};

  // [moments]
  std::vector<std::uint32_t> moments_q_list{2, 3, 4, 5};
  std::vector<int> moments_d_list{1, 2, 3};
  std::vector<double> moments_b_list{0.5, 1.0, 2.0, 3.7};
  std::vector<double> moments_r_fractions{0.25, 0.5, 0.75};
  std::uint64_t moments_n_max = 10'000;
  std::vector<int> moments_mc_steps{1, 10};
  double moments_mc_r_fraction = 0.25;

  // [simulate]
  int simulate_m = 6;
  double simulate_time = 0.5;
  int simulate_dump_paths = 2;
  int simulate_max_shell = 12;

  // [converge]
  double converge_t = 0.5;
  std::vector<std::string> converge_histories;
  std::vector<int> converge_mc_m{2, 4, 6};
  double converge_threshold = 1e-3;

  // [density]
  std::vector<double> density_times{0.5};
  int density_shell_min = -6;
  int density_shell_max = 6;
  std::vector<std::string> density_balls;

  // [histories]
  std::vector<NamedHistory> histories;
  std::vector<BallSpec> balls;

  WalkParams walk() const { return WalkParams::make(field, b); }
  const NamedHistory& history(const std::string& name) const;
};

/// Parse and validate; throws ConfigError naming the bad key.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

/// Parse a history "time:center:log_radius ..."; center "*" is the whole space.
History parse_history(const FieldParamsPtr& field, const std::string& text);

/// Parse a ball "center:log_radius".
FieldBall parse_ball(const FieldParamsPtr& field, const std::string& text);

/// Field with q elements: Q_q when q is prime, F_q((t)) otherwise.
FieldParamsPtr field_for_order(std::uint32_t q, int d);

}  // namespace ultradiffuse::cli
