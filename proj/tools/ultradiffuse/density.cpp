#include <cmath>

#include "suites.hpp"
#include "ultradiffuse/limit_density.hpp"

namespace ultradiffuse::cli {
namespace {

constexpr int kPartitionWidth = 60;

/// P(||X_t|| <= q^n) plus the shells n+1..n+width. The remainder is the mass
/// outside B(n+width), which the caller adds to the tolerance.
SeriesValue partition_sum(const DiffusionParams& dp, double t, int n, double tol) {
  auto inner = ball_prob(dp, t, FieldBall::at_origin(dp.field, n), tol);
  double value = inner.value;
  double err = inner.error_bound;
  for (int k = n + 1; k <= n + kPartitionWidth; ++k) {
    const auto s = shell_prob(dp, t, k, tol);
    value += s.value;
    err += s.error_bound;
  }
  return {value, err};
}

}  // namespace

Report run_density(const RunContext& ctx) {
  const auto& c = ctx.config;
  const DiffusionParams dp = DiffusionParams::make(c.field, c.b, c.sigma);
  const double tol = c.tol;
  Report rep("density");

  for (double t : c.density_times) {
    int monotone = 0;
    double prev = 0.0;
    for (int k = c.density_shell_min; k <= c.density_shell_max; ++k) {
      const auto r = rho(dp, t, QNorm::power(k), tol);
      rep.info("rho", Params().add("t", t).add("shell", k), r.value, r.error_bound);
      if (k > c.density_shell_min && r.value > prev + r.error_bound) ++monotone;
      prev = r.value;
    }
    rep.abs("rho_nonincreasing_in_norm", Params().add("t", t), monotone, 0.0, 0.0, 0.0);

    for (int n = -2; n <= 2; ++n) {
      const auto p = partition_sum(dp, t, n, tol);
      const auto beyond = ball_prob(dp, t, FieldBall::at_origin(dp.field, n + kPartitionWidth), tol);
      rep.abs("ball_shell_partition", Params().add("t", t).add("log_radius", n).add("width", kPartitionWidth),
              p.value, p.error_bound, 1.0, 10.0 * tol + (1.0 - beyond.value) + p.error_bound);
    }

    for (const auto& spec : c.balls) {
      const auto p = ball_prob(dp, t, spec.ball, tol);
      rep.info("ball_prob", Params().add("t", t).add("ball", spec.text), p.value, p.error_bound);
    }

    // Chapman-Kolmogorov over cosets of B_d(0) inside B_d(R).
    {
      const double t1 = 0.4 * t;
      const double t2 = t - t1;
      int outer = 1;
      while (outer < 6 && std::pow(dp.q(), (outer + 1) * dp.d()) <= 4096) ++outer;
      const FieldBall target = FieldBall::at_origin(dp.field, 0);
      const auto direct = ball_prob(dp, t, target, tol);
      CompensatedSum sum;
      double err = 0.0;
      for (const auto& rep_c : enumerate_coset_reps(FieldBall::at_origin(dp.field, outer), 0)) {
        // P(X_t1 in c + B(0)) * P(X_t2 in B(0) - c); the law is radial, so -c may be replaced by c.
        const FieldBall cell{rep_c, 0, false};
        const auto a = ball_prob(dp, t1, cell, tol);
        const auto b = ball_prob(dp, t2, cell, tol);
        sum.add(a.value * b.value);
        err += a.error_bound + b.error_bound;
      }
      const auto inside = ball_prob(dp, t1, FieldBall::at_origin(dp.field, outer), tol);
      rep.abs("chapman_kolmogorov", Params().add("t1", t1).add("t2", t2).add("outer_log_radius", outer), sum.value(),
              err + sum.rounding_bound(), direct.value, 10.0 * tol + err + (1.0 - inside.value));
    }
  }

  // Small and large sigma t for the unit ball at the origin.
  const FieldBall unit = FieldBall::at_origin(dp.field, 0);
  for (double st : {1e-6, 1e6}) {
    const auto p = ball_prob(dp, st / dp.sigma, unit, tol);
    const double target = st < 1.0 ? 1.0 : 0.0;
    rep.abs("unit_ball_extreme_time", Params().add("sigma_t", st), p.value, p.error_bound, target, 1e-3);
  }
  return rep;
}

}  // namespace ultradiffuse::cli
