#include <algorithm>
#include <cmath>

#include "suites.hpp"
#include "ultradiffuse/limit_density.hpp"

namespace ultradiffuse::cli {
namespace {

/// Largest |rho_m - rho| over the nonzero lattice shells 1..m+extra.
double sup_density_gap(const ScaleParams& scale, const DiffusionParams& dp, double t, double tol, int extra) {
  double worst = 0.0;
  const FieldParamsPtr& field = scale.walk.field;
  for (int k = 1; k <= scale.m + extra; ++k) {
    // Any element of depth k: digit 1 in the first coordinate at index -k.
    std::vector<std::vector<ResidueCode>> coords(static_cast<std::size_t>(field->d()));
    coords[0].assign(static_cast<std::size_t>(k), 0);
    coords[0].back() = 1;
    const GroupElement g = GroupElement::from_coordinates(field, coords);
    const auto level = marginal_pmf_m(scale, t, g, tol);
    const auto limit = rho(dp, t, QNorm::power(k - scale.m), tol);
    worst = std::max(worst, std::abs(level.value - limit.value));
  }
  return worst;
}

}  // namespace

Report run_converge(const RunContext& ctx) {
  const auto& c = ctx.config;
  const WalkParams walk = c.walk();
  const DiffusionParams dp = DiffusionParams::make(walk.field, walk.b, c.sigma);
  const double t = c.converge_t;
  const double tol = c.tol;
  Report rep("converge");

  // epsilon_m table.
  std::vector<SeriesValue> eps;
  for (int m : c.m_list) {
    const ScaleParams scale = ScaleParams::make(walk, c.sigma, m);
    eps.push_back(epsilon_m(scale, t, tol));
    rep.info("epsilon_m", Params().add("m", m).add("t", t), eps.back().value, eps.back().error_bound);
  }
  int violations = 0;
  for (std::size_t i = 1; i < c.m_list.size(); ++i) {
    if (c.m_list[i - 1] < 2) continue;
    if (eps[i].value > eps[i - 1].value + eps[i].error_bound + eps[i - 1].error_bound) ++violations;
  }
  rep.abs("epsilon_m_nonincreasing_from_2", Params().add("t", t), violations, 0.0, 0.0, 0.0);
  const auto m_max = std::max_element(c.m_list.begin(), c.m_list.end()) - c.m_list.begin();
  rep.le("epsilon_m_final", Params().add("m", c.m_list[m_max]).add("t", t), eps[m_max].value,
         eps[m_max].error_bound, c.converge_threshold);

  // The L1 distance of the transforms bounds the sup gap of the densities.
  for (std::size_t i = 0; i < c.m_list.size(); ++i) {
    const ScaleParams scale = ScaleParams::make(walk, c.sigma, c.m_list[i]);
    if (scale.steps_until(t) == 0) continue;
    const double gap = sup_density_gap(scale, dp, t, tol, 8);
    rep.le("sup_density_gap", Params().add("m", c.m_list[i]).add("t", t), gap, 10.0 * tol, eps[i].value, 10.0 * tol);
  }

  // Pointwise limit of E_m. With u = alpha q^((j-m)b) and N = t_m,
  // 0 <= e^(-Nu) - (1-u)^N <= e^(-Nu) N u^2 / (2(1-u)) and |e^(-Nu) - e^(-x)| <= e^(-min) |Nu - x|.
  for (int m : {12, 14}) {
    const ScaleParams scale = ScaleParams::make(walk, c.sigma, m);
    const double n = static_cast<double>(scale.steps_until(t));
    double worst_unit = 0.0;
    double worst_all = 0.0;
    int bound_violations = 0;
    for (int j = -4; j <= 4; ++j) {
      const double x = c.sigma * t * std::pow(walk.q(), j * walk.b);
      const double u = walk.alpha * std::pow(walk.q(), (j - m) * walk.b);
      const double gap = std::abs(e_m_value(scale, t, QNorm::power(j)) - std::exp(-x));
      const double bound = std::exp(-n * u) * n * u * u / (2.0 * (1.0 - u)) +
                           std::exp(-std::min(n * u, x)) * std::abs(n * u - x) + 1e-14;
      if (gap > bound) ++bound_violations;
      worst_all = std::max(worst_all, gap);
      if (j <= 0) worst_unit = std::max(worst_unit, gap);
    }
    rep.abs("e_m_pointwise_bound_violations", Params().add("m", m).add("t", t).add("shells", "-4..4"),
            bound_violations, 0.0, 0.0, 0.0);
    if (m == 12) rep.le("e_m_pointwise_limit", Params().add("m", m).add("t", t).add("shells", "-4..0"), worst_unit, 0.0, 1e-4);
    rep.info("e_m_pointwise_max_gap", Params().add("m", m).add("t", t).add("shells", "-4..4"), worst_all);
    if (m == 14) rep.le("e_m_pointwise_limit", Params().add("m", m).add("t", t).add("shells", "-4..4"), worst_all, 0.0, 1e-4);
  }

  // Finite-dimensional distributions: exact level-m cylinders against the limit.
  for (const auto& name : c.converge_histories) {
    const auto& h = c.history(name);
    const ConvergenceReport cr = fdd_convergence_report(walk, c.sigma, h.history, c.m_list, tol);
    for (const auto& row : cr.rows) {
      rep.info("fdd_cylinder", Params().add("history", name).add("m", row.m), row.cylinder.value,
               row.cylinder.error_bound);
      rep.info("fdd_gap", Params().add("history", name).add("m", row.m), row.gap, row.gap_bound);
    }
    rep.info("fdd_limit", Params().add("history", name), cr.rows.front().limit.value,
             cr.rows.front().limit.error_bound);
    rep.abs("fdd_gap_decreasing_by_parity", Params().add("history", name), cr.decreasing_by_parity ? 0.0 : 1.0, 0.0,
            0.0, 0.0);
    const auto last = std::max_element(cr.rows.begin(), cr.rows.end(),
                                       [](const ConvergenceRow& a, const ConvergenceRow& b) { return a.m < b.m; });
    rep.le("fdd_gap_final", Params().add("history", name).add("m", last->m), last->gap, last->gap_bound,
           c.converge_threshold);

    // Monte Carlo estimates of the level-m cylinder probabilities.
    for (int m : c.converge_mc_m) {
      const ScaleParams scale = ScaleParams::make(walk, c.sigma, m);
      const DiscreteHistory dh = transform_history(scale, h.history);
      const std::uint64_t steps = dh.steps.empty() ? 0 : dh.steps.back().step;
      const Tally tally = monte_carlo<Tally>(
          c.samples, ctx.stream(400 + static_cast<std::uint64_t>(m)), ctx.threads, [&](Rng& rng, Tally& acc) {
            acc.record(walk_in_cylinder(sample_positions(walk, steps, rng), dh));
          });
      const auto exact = cylinder_prob_m(scale, h.history, tol);
      const double se = tally.standard_error();
      rep.abs("fdd_cylinder_monte_carlo",
              Params().add("history", name).add("m", m).add("samples", tally.trials).add("standard_error", se),
              tally.mean(), exact.error_bound, exact.value, 3.0 * se + exact.error_bound);
    }
  }
  return rep;
}

}  // namespace ultradiffuse::cli
