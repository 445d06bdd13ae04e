#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "suites.hpp"
#include "ultradiffuse/primitive_walk.hpp"

namespace ultradiffuse::cli {
namespace {

constexpr std::size_t kDenseCap = 4096;
constexpr double kKsLevel = 1e-3;

/// Largest M <= cutoff with q^(Md) <= kDenseCap.
int dense_radius(const FieldParams& field, int cutoff) {
  int m = cutoff;
  while (m > 1 && std::pow(static_cast<double>(field.q()), m * field.d()) > kDenseCap) --m;
  return m;
}

void alpha_rows(Report& rep, const WalkParams& walk, const std::string& params) {
  rep.add({"alpha_minus_one", params, walk.alpha - 1.0, 0.0, 0.5, 0.5, Check::kAbs});
  rep.add({"alpha_over_q_pow_b", params, walk.alpha / std::pow(walk.q(), walk.b), 0.0, 0.5, 0.5, Check::kAbs});
}

}  // namespace

Report run_laws(const RunContext& ctx) {
  const auto& c = ctx.config;
  const WalkParams walk = c.walk();
  const double q = walk.q();
  const double b = walk.b;
  Report rep("laws");
  const std::string field = Params().add("q", q).add("d", walk.d()).add("b", b);
  alpha_rows(rep, walk, field);

  // Increment law.
  {
    CompensatedSum mass;
    for (int i = 1; i <= c.laws_shells; ++i) mass.add(increment_sphere_prob(walk, i));
    mass.add(std::pow(q, -c.laws_shells * b));
    rep.abs("increment_normalization", Params().add("shells", c.laws_shells), mass.value(), mass.rounding_bound(),
            1.0, 1e-12);
  }

  // Characteristic function, closed form vs shell sum.
  for (int k : c.laws_norm_exponents) {
    const QNorm norm = QNorm::power(-k);
    const auto o = charfn_oracle_tol(walk, norm, 1e-13);
    rep.abs("charfn_vs_oracle", Params().add("norm_exp", -k), charfn(walk, norm), o.error_bound, o.value, 1e-10);
  }
  {
    const auto o = charfn_oracle_tol(walk, QNorm::zero(), 1e-13);
    rep.abs("charfn_vs_oracle", Params().add("norm_exp", "zero"), charfn(walk, QNorm::zero()), o.error_bound,
            o.value, 1e-10);
  }

  // One step of the n-step formula is the increment law.
  for (int k = 0; k <= 3; ++k) {
    const auto p = nstep_pmf_shell(walk, 1, k);
    rep.abs("nstep_one_step", Params().add("shell", k), p.value, p.error_bound, increment_pmf_shell(walk, k), 1e-10);
  }

  // n-step law vs dense convolution.
  const int radius = dense_radius(*walk.field, c.laws_cutoff);
  for (int n : c.laws_n_list) {
    const auto oracle = nstep_convolution_oracle(walk, n, radius, kDenseCap);
    double gap = 0.0;
    double bound = 0.0;
    double asym = 0.0;
    for (std::uint64_t i = 0; i < oracle.pmf.size(); ++i) {
      const GroupElement g = element_at_index(walk.field, i, radius);
      const auto p = nstep_pmf_at(walk, static_cast<std::uint64_t>(n), g);
      gap = std::max(gap, std::abs(p.value - oracle.pmf[i]));
      bound = std::max(bound, p.error_bound);
      asym = std::max(asym, std::abs(oracle.pmf[i] - oracle.at(group_neg(g))));
    }
    const std::string params = Params().add("n", n).add("cutoff", radius);
    rep.le("nstep_vs_convolution", params, gap, bound, 0.0, 1e-9 + n * std::pow(q, -radius * b));
    rep.abs("convolution_symmetry", params, asym, 0.0, 0.0, 1e-15);
    rep.add({"convolution_mass", params, oracle.total_mass, 0.0, oracle.mass_lower_bound, 1e-12, Check::kGe});
  }

  // Radial normalization, two cdf routes, and the Fourier inversion of charfn^n.
  std::vector<int> steps = c.laws_n_list;
  for (int n : c.laws_ks_steps) steps.push_back(n);
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  for (int n : steps) {
    const auto un = static_cast<std::uint64_t>(n);
    const RadialLaw law = nstep_law(walk, un, c.laws_shells);
    const double tail = std::min(1.0, n * std::pow(q, -c.laws_shells * b));
    rep.abs("radial_normalization", Params().add("n", n).add("shells", c.laws_shells), law.stored_mass(), 0.0, 1.0,
            1e-9 + tail);
    for (int k = 0; k <= 5; ++k) {
      const auto fourier = nstep_cdf(walk, un, k);
      const auto shells = nstep_cdf_shells(walk, un, k);
      rep.abs("cdf_two_routes", Params().add("n", n).add("shell", k), fourier.value,
              fourier.error_bound + shells.error_bound, shells.value, 1e-9);
      const auto direct = nstep_pmf_shell(walk, un, k);
      const auto inverse = nstep_pmf_fourier(walk, un, k);
      rep.abs("pmf_fourier_inversion", Params().add("n", n).add("shell", k), inverse.value,
              inverse.error_bound + direct.error_bound, direct.value, 1e-9);
    }
  }

  // Sampler: radius frequency, no identity draws, uniformity on a sphere.
  {
    const int shell = std::pow(q, 2 * walk.d()) <= kDenseCap ? 2 : 1;
    struct Acc {
      Tally first_shell;
      std::uint64_t identities = 0;
      Histogram cells;
      void merge(const Acc& o) {
        first_shell.merge(o.first_shell);
        identities += o.identities;
        cells.merge(o.cells);
      }
    };
    const Acc acc = monte_carlo<Acc>(c.samples, ctx.stream(1), ctx.threads, [&](Rng& rng, Acc& a) {
      const GroupElement g = sample_increment(walk, rng);
      a.first_shell.record(g.depth() == 1);
      if (g.is_identity()) ++a.identities;
      if (g.depth() == shell) a.cells.record(index_in_ball(g, shell));
    });
    const double p1 = increment_sphere_prob(walk, 1);
    const double se = std::sqrt(p1 * (1.0 - p1) / static_cast<double>(c.samples));
    rep.abs("sampler_first_shell", Params().add("samples", c.samples), acc.first_shell.mean(), se, p1, 3.0 * se);
    rep.abs("sampler_identity_draws", Params().add("samples", c.samples), static_cast<double>(acc.identities), 0.0,
            0.0, 0.0);

    const auto total_cells = static_cast<std::uint64_t>(std::llround(std::pow(q, shell * walk.d())));
    std::vector<std::uint64_t> counts;
    for (std::uint64_t i = 0; i < total_cells; ++i) {
      if (element_at_index(walk.field, i, shell).depth() == shell) counts.push_back(acc.cells.at(i));
    }
    double stat = 0.0;
    const double expected = static_cast<double>(acc.cells.total) / static_cast<double>(counts.size());
    for (auto k : counts) stat += (static_cast<double>(k) - expected) * (static_cast<double>(k) - expected) / expected;
    const double dof = static_cast<double>(counts.size()) - 1.0;
    const double critical = dof > 0 ? boost::math::quantile(boost::math::chi_squared(dof), 0.999) : 0.0;
    rep.le("sampler_sphere_uniformity_chi2", Params().add("shell", shell).add("cells", counts.size()), stat, 0.0,
           critical);
  }

  // Radial Kolmogorov-Smirnov comparison of sampled walks with nstep_cdf.
  for (int n : c.laws_ks_steps) {
    const int top = c.laws_shells;
    const Histogram h = monte_carlo<Histogram>(
        c.samples, ctx.stream(100 + static_cast<std::uint64_t>(n)), ctx.threads, [&](Rng& rng, Histogram& acc) {
          GroupElement s(walk.field);
          for (int i = 0; i < n; ++i) s = group_add(s, sample_increment(walk, rng));
          acc.record(static_cast<std::size_t>(std::min(s.depth(), top + 1)));
        });
    double ks = 0.0;
    double cum = 0.0;
    double err = 0.0;
    for (int k = 0; k <= top; ++k) {
      cum += static_cast<double>(h.at(static_cast<std::size_t>(k)));
      const auto f = nstep_cdf(walk, static_cast<std::uint64_t>(n), k);
      ks = std::max(ks, std::abs(cum / static_cast<double>(h.total) - f.value));
      err = std::max(err, f.error_bound);
    }
    const double critical = std::sqrt(-0.5 * std::log(kKsLevel / 2.0)) / std::sqrt(static_cast<double>(h.total));
    rep.le("sampler_radial_ks", Params().add("n", n).add("samples", h.total), ks, err, critical);
  }
  return rep;
}

}  // namespace ultradiffuse::cli
