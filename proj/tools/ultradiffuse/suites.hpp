#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"
#include "ultradiffuse/random.hpp"

namespace ultradiffuse::cli {

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  /// Independent stream for the experiment with the given tag.
  std::uint64_t stream(std::uint64_t tag) const { return replica_seed(seed, 0x5eed0000ULL + tag); }
};

Report run_laws(const RunContext& ctx);
Report run_moments(const RunContext& ctx);
Report run_simulate(const RunContext& ctx);
Report run_converge(const RunContext& ctx);
Report run_density(const RunContext& ctx);

/// Bernoulli tally, mergeable across replicas.
struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;

  void record(bool hit) {
    ++trials;
    hits += hit ? 1 : 0;
  }
  void merge(const Tally& o) {
    trials += o.trials;
    hits += o.hits;
  }
  double mean() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
  double standard_error() const {
    const double p = mean();
    return trials ? std::sqrt(p * (1.0 - p) / static_cast<double>(trials)) : 0.0;
  }
};

/// Running sums for a sample mean and its standard error.
struct MeanTally {
  std::uint64_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void record(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }
  void merge(const MeanTally& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
  }
  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }
  double standard_error() const {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
    return std::sqrt(var / n);
  }
};

/// Counts per bin, mergeable across replicas.
struct Histogram {
  std::vector<std::uint64_t> bins;
  std::uint64_t total = 0;

  void record(std::size_t bin) {
    if (bin >= bins.size()) bins.resize(bin + 1, 0);
    ++bins[bin];
    ++total;
  }
  void merge(const Histogram& o) {
    if (o.bins.size() > bins.size()) bins.resize(o.bins.size(), 0);
    for (std::size_t i = 0; i < o.bins.size(); ++i) bins[i] += o.bins[i];
    total += o.total;
  }
  std::uint64_t at(std::size_t bin) const { return bin < bins.size() ? bins[bin] : 0; }
};

}  // namespace ultradiffuse::cli
