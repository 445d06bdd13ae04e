#include <algorithm>
#include <cmath>

#include "suites.hpp"
#include "ultradiffuse/primitive_walk.hpp"

namespace ultradiffuse::cli {
namespace {

struct GridCell {
  std::uint32_t q = 2;
  int d = 1;
  double b = 1.0;
  double r = 0.5;
};

struct GridResult {
  double alpha = 0.0;
  double alpha_over_qb = 0.0;
  double c_rd = 0.0;
  double k = 0.0;
  double worst_ratio = 0.0;      // max_n E||S_n||^r / (K n^(r/b))
  double ratio_error = 0.0;
  double empirical_constant = 0.0;  // max_n E||S_n||^r / n^(r/b)
  int decreases = 0;                // n <= 100 with E||S_n||^r < E||S_(n-1)||^r
};

GridResult evaluate(const GridCell& cell, std::uint64_t n_max) {
  const WalkParams walk = WalkParams::make(field_for_order(cell.q, cell.d), cell.b);
  GridResult out;
  out.alpha = walk.alpha;
  out.alpha_over_qb = walk.alpha / std::pow(walk.q(), walk.b);
  out.c_rd = moment_constant_c(walk, cell.r);
  out.k = moment_bound_constant(walk, cell.r);
  double prev = 0.0;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    const double scale = std::pow(static_cast<double>(n), cell.r / cell.b);
    const auto m = moment_exact(walk, n, cell.r, 1e-10 * out.k * scale);
    const double ratio = m.value / (out.k * scale);
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      out.ratio_error = m.error_bound / (out.k * scale);
    }
    out.empirical_constant = std::max(out.empirical_constant, m.value / scale);
    if (n > 1 && n <= 100 && m.value < prev - m.error_bound) ++out.decreases;
    prev = m.value;
  }
  return out;
}

}  // namespace

Report run_moments(const RunContext& ctx) {
  const auto& c = ctx.config;
  Report rep("moments");

  std::vector<GridCell> cells;
  for (auto q : c.moments_q_list) {
    for (int d : c.moments_d_list) {
      for (double b : c.moments_b_list) {
        for (double f : c.moments_r_fractions) cells.push_back({q, d, b, f * b});
      }
    }
  }
  std::vector<GridResult> results(cells.size());
  parallel_replicas(cells.size(), ctx.threads,
                    [&](std::uint64_t i) { results[i] = evaluate(cells[i], c.moments_n_max); });

  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& cell = cells[i];
    const auto& res = results[i];
    const std::string params =
        Params().add("q", cell.q).add("d", cell.d).add("b", cell.b).add("r", cell.r).add("n_max", c.moments_n_max);
    rep.add({"alpha_minus_one", params, res.alpha - 1.0, 0.0, 0.5, 0.5, Check::kAbs});
    rep.add({"alpha_over_q_pow_b", params, res.alpha_over_qb, 0.0, 0.5, 0.5, Check::kAbs});
    rep.add({"c_rd_in_unit_interval", params, res.c_rd, 0.0, 0.5, 0.5, Check::kAbs});
    rep.add({"bound_constant_positive", params, res.k, 0.0, 0.0, 0.0, Check::kGe});
    rep.le("moment_over_bound", params, res.worst_ratio, res.ratio_error, 1.0);
    rep.info("empirical_constant", params, res.empirical_constant);
    rep.info("moment_decreases_n_le_100", params, res.decreases);
  }

  // Monte Carlo moments at r = fraction * b, where the estimator has finite variance.
  const WalkParams walk = c.walk();
  const double r = c.moments_mc_r_fraction * walk.b;
  const double lq = std::log(walk.q());
  for (int n : c.moments_mc_steps) {
    const MeanTally t = monte_carlo<MeanTally>(
        c.samples, ctx.stream(200 + static_cast<std::uint64_t>(n)), ctx.threads, [&](Rng& rng, MeanTally& acc) {
          GroupElement s(walk.field);
          for (int i = 0; i < n; ++i) s = group_add(s, sample_increment(walk, rng));
          acc.record(s.is_identity() ? 0.0 : std::exp(s.depth() * r * lq));
        });
    const auto exact = moment_exact(walk, static_cast<std::uint64_t>(n), r, 1e-12);
    const double se = t.standard_error();
    rep.abs("moment_monte_carlo",
            Params().add("n", n).add("r", r).add("samples", t.count).add("standard_error", se), t.mean(),
            exact.error_bound, exact.value, 3.0 * se + exact.error_bound);
  }
  return rep;
}

}  // namespace ultradiffuse::cli
