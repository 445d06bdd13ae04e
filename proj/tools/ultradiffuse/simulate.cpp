#include <algorithm>
#include <cmath>
#include <fstream>

#include "suites.hpp"
#include "ultradiffuse/digit_string.hpp"
#include "ultradiffuse/limit_density.hpp"

namespace ultradiffuse::cli {
namespace {

/// Structural violations of one sampled path: values off the lattice, jumps
/// off tau_m N, or a path that is not constant between jumps.
std::uint64_t path_violations(const EmbeddedPath& path, const ScaleParams& scale, double horizon) {
  std::uint64_t bad = 0;
  const std::uint64_t steps = scale.steps_until(horizon);
  if (path.jump_times.size() != steps + 1 || path.values.size() != steps + 1) ++bad;
  for (std::size_t n = 0; n < path.values.size(); ++n) {
    const double jump = static_cast<double>(n) * scale.tau_m;
    if (path.jump_times[n] != jump) ++bad;
    if (!in_lattice(path.values[n], scale.m)) ++bad;
    if (path.values[n] != gamma_m(path.walk[n], scale.m)) ++bad;
    if (path.value_at(jump) != path.values[n]) ++bad;
    if (path.value_at(jump + 0.5 * scale.tau_m) != path.values[n]) ++bad;
  }
  if (!path.values.empty() && log_norm(path.values.front())) ++bad;
  return bad;
}

void dump_path(const std::filesystem::path& file, const EmbeddedPath& path) {
  std::ofstream out(file, std::ios::binary);
  out << "step_index,time,value\n";
  for (std::size_t n = 0; n < path.values.size(); ++n) {
    out << n << ',' << format_number(path.jump_times[n]) << ',' << format_point(path.values[n]) << '\n';
  }
}

}  // namespace

Report run_simulate(const RunContext& ctx) {
  const auto& c = ctx.config;
  const WalkParams walk = c.walk();
  const ScaleParams scale = ScaleParams::make(walk, c.sigma, c.simulate_m);
  const DiffusionParams dp = DiffusionParams::from_scale(scale);
  Report rep("simulate");
  const double lq = std::log(walk.q());

  // Path structure and the marginal of ||Y_t||.
  const std::uint64_t step_t = scale.steps_until(c.simulate_time);
  struct Acc {
    std::uint64_t violations = 0;
    std::uint64_t jumps = 0;
    Histogram shells;
    void merge(const Acc& o) {
      violations += o.violations;
      jumps += o.jumps;
      shells.merge(o.shells);
    }
  };
  const int top = c.simulate_max_shell;
  const Acc acc = monte_carlo<Acc>(c.samples, ctx.stream(300), ctx.threads, [&](Rng& rng, Acc& a) {
    const EmbeddedPath path = sample_embedded_path(scale, c.horizon, rng);
    a.violations += path_violations(path, scale, c.horizon);
    a.jumps += path.jump_times.size() - 1;
    a.shells.record(static_cast<std::size_t>(std::min(path.walk[step_t].depth(), top + 1)));
  });
  const std::string base =
      Params().add("m", scale.m).add("tau_m", scale.tau_m).add("horizon", c.horizon).add("paths", c.samples);
  rep.abs("path_structure_violations", base, static_cast<double>(acc.violations), 0.0, 0.0, 0.0);
  rep.abs("jumps_per_path", base, static_cast<double>(acc.jumps) / static_cast<double>(c.samples), 0.0,
          static_cast<double>(scale.steps_until(c.horizon)), 0.0);

  const auto n = static_cast<double>(c.samples);
  const double eps = step_t > 0 ? epsilon_m(scale, c.simulate_time).value : 0.0;
  for (int k = 0; k <= top; ++k) {
    const double freq = static_cast<double>(acc.shells.at(static_cast<std::size_t>(k))) / n;
    const std::string params = Params().add("m", scale.m).add("t", c.simulate_time).add("shell", k);
    double exact = 0.0;
    double exact_err = 0.0;
    if (step_t == 0) {
      exact = k == 0 ? 1.0 : 0.0;
    } else {
      const auto p = nstep_pmf_shell(walk, step_t, k, 1e-15);
      const double size = k == 0 ? 1.0 : std::exp(k * walk.d() * lq) * -std::expm1(-walk.d() * lq);
      exact = p.value * size;
      exact_err = p.error_bound * size;
    }
    const double se = std::sqrt(std::max(exact * (1.0 - exact), 0.0) / n);
    rep.abs("marginal_shell_vs_exact", params, freq, exact_err, exact, 3.0 * se + exact_err);

    // The same shell under the limit law; level-m bias is at most eps times the Haar measure of the region.
    const int limit_k = k - scale.m;
    const SeriesValue limit = k == 0 ? ball_prob(dp, c.simulate_time, FieldBall::at_origin(walk.field, -scale.m))
                                     : shell_prob(dp, c.simulate_time, limit_k);
    const double measure =
        k == 0 ? std::exp(-scale.m * walk.d() * lq) : std::exp(limit_k * walk.d() * lq) * -std::expm1(-walk.d() * lq);
    const double lse = std::sqrt(std::max(limit.value * (1.0 - limit.value), 0.0) / n);
    rep.abs("marginal_shell_vs_limit", params, freq, limit.error_bound, limit.value,
            3.0 * lse + eps * measure + limit.error_bound);
  }

  // Embedded moments against C t^(r/b), and the product bound for increments.
  for (double f : c.moments_r_fractions) {
    const double r = f * walk.b;
    for (int m = 0; m <= 8; ++m) {
      const ScaleParams s = ScaleParams::make(walk, c.sigma, m);
      const double cst = embedded_moment_constant(s, r);
      for (double t : {0.1, 1.0, 10.0}) {
        const auto mom = embedded_moment(s, t, r);
        rep.le("embedded_moment_bound", Params().add("m", m).add("t", t).add("r", r), mom.value, mom.error_bound,
               cst * std::pow(t, r / walk.b));
      }
      const std::vector<double> grid{0.0, 0.05, 0.25, 0.5, 1.0, 2.0};
      double worst = 0.0;
      double worst_err = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t j = i + 1; j < grid.size(); ++j) {
          for (std::size_t k = j + 1; k < grid.size(); ++k) {
            const auto a = embedded_increment_moment(s, grid[j], grid[k], r);
            const auto b = embedded_increment_moment(s, grid[i], grid[j], r);
            const double rhs = cst * cst * std::pow(grid[k] - grid[i], 2.0 * r / walk.b);
            const double ratio = a.value * b.value / rhs;
            if (ratio > worst) {
              worst = ratio;
              worst_err = (a.error_bound * (b.value + b.error_bound) + b.error_bound * a.value) / rhs;
            }
          }
        }
      }
      rep.le("increment_product_bound", Params().add("m", m).add("r", r), worst, worst_err, 1.0);
    }
  }

  // Path dumps.
  if (c.simulate_dump_paths > 0) {
    const auto dir = ctx.out / "paths";
    std::filesystem::create_directories(dir);
    for (int i = 0; i < c.simulate_dump_paths; ++i) {
      Rng rng = make_rng(ctx.stream(301), static_cast<std::uint64_t>(i));
      dump_path(dir / ("path_" + std::to_string(i) + ".csv"), sample_embedded_path(scale, c.horizon, rng));
    }
  }
  return rep;
}

}  // namespace ultradiffuse::cli
