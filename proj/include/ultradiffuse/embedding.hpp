#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ultradiffuse/ball.hpp"
#include "ultradiffuse/primitive_walk.hpp"

namespace ultradiffuse {

/// Space-time scaling at level m: lattice spacing q^-m, time step
/// tau_m = C' q^(-mb) with C' = alpha / sigma.
struct ScaleParams {
  WalkParams walk;
  double sigma = 1.0;
  int m = 0;
  double delta_m = 1.0;
  double tau_m = 1.0;
  double cprime = 1.0;

  static ScaleParams make(const WalkParams& walk, double sigma, int m);

  /// floor(t / tau_m), consistent with the jump times n * tau_m.
  std::uint64_t steps_until(double t) const;
};

/// Gamma_m(g): the digits of g shifted up by m places, as a point of K^d.
FieldVector gamma_m(const GroupElement& g, int m);

/// True when x lies in Gamma_m(G): every coordinate is exact with no digit at
/// an index >= m.
bool in_lattice(const FieldVector& x, int m);

/// One constraint of a history: the path is in `ball` at `time`.
struct HistoryStep {
  double time = 0.0;
  FieldBall ball;
};

/// Times strictly increasing and positive; the path starts at the origin at time 0.
struct History {
  std::vector<HistoryStep> steps;

  void validate() const;
};

/// The preimage of a ball of K^d under Gamma_m.
struct LatticeRegion {
  enum class Kind { kWhole, kBall, kEmpty };
  Kind kind = Kind::kWhole;
  GroupBall ball;

  static LatticeRegion whole(const FieldParamsPtr& field);
  static LatticeRegion empty(const FieldParamsPtr& field);
};

LatticeRegion lattice_preimage(const FieldBall& ball, int m);

/// A history on the walk's time scale.
struct DiscreteHistory {
  struct Step {
    std::uint64_t step = 0;
    LatticeRegion region;
  };
  /// Steps >= 1, strictly increasing; kEmpty entries make the whole cylinder null.
  std::vector<Step> steps;
  bool empty = false;
};

/// Times become floor(t / tau_m), balls become their Gamma_m preimages, and
/// constraints falling on the same step are intersected. Constraints that
/// land on step 0 are checked against the starting point.
DiscreteHistory transform_history(const ScaleParams& scale, const History& h);

/// P^m of the cylinder set of h, by a dynamic program over cosets of B_G(M)
/// where q^M is the smallest preimage radius.
SeriesValue cylinder_prob_m(const ScaleParams& scale, const History& h, double tol = 1e-10,
                            std::size_t cap = kDefaultEnumerationCap);

/// Density of Y_t at Gamma_m(g) w.r.t. Haar measure: q^(md) times the
/// t_m-step point mass. Both the direct and the Fourier route are evaluated;
/// ToleranceError is raised if they disagree beyond their bounds plus tol.
SeriesValue marginal_pmf_m(const ScaleParams& scale, double t, const GroupElement& g, double tol = 1e-10);

/// The Fourier route alone: integral of chi(x . z) (1 - alpha ||z||^b q^-mb)^t_m
/// over ||z|| <= q^m, summed over shells.
SeriesValue marginal_pmf_m_fourier(const ScaleParams& scale, double t, const GroupElement& g, double tol = 1e-10);

/// A sampled path of Y at level m: right-continuous, jumping at n tau_m.
struct EmbeddedPath {
  int m = 0;
  double tau_m = 1.0;
  /// jump_times[n] = n * tau_m; values[n] is the path on [n tau_m, (n+1) tau_m).
  std::vector<double> jump_times;
  std::vector<FieldVector> values;
  std::vector<GroupElement> walk;

  const FieldVector& value_at(double t) const;
};

inline constexpr std::uint64_t kDefaultStepCap = 10'000'000;

EmbeddedPath sample_embedded_path(const ScaleParams& scale, double horizon, Rng& rng,
                                  std::uint64_t step_cap = kDefaultStepCap);

/// True when the path lies in every ball of h at the corresponding time.
bool path_in_cylinder(const EmbeddedPath& path, const History& h);

/// Same test on the underlying walk, using the discretized history.
bool walk_in_cylinder(const std::vector<GroupElement>& walk, const DiscreteHistory& h);

/// E ||Y_t||^r = q^(-mr) E ||S_(t_m)||^r.
SeriesValue embedded_moment(const ScaleParams& scale, double t, double r, double tol = 1e-12);

/// E ||Y_t - Y_s||^r for s <= t, from stationary independent increments.
SeriesValue embedded_increment_moment(const ScaleParams& scale, double s, double t, double r, double tol = 1e-12);

/// C = K (1/C')^(r/b), so that E ||Y_t||^r <= C t^(r/b).
double embedded_moment_constant(const ScaleParams& scale, double r);

}  // namespace ultradiffuse
