#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ultradiffuse/ball.hpp"
#include "ultradiffuse/group_element.hpp"
#include "ultradiffuse/measure.hpp"
#include "ultradiffuse/random.hpp"
#include "ultradiffuse/series.hpp"

namespace ultradiffuse {

/// Radial random walk on G with exponent b.
///
/// The increment puts mass (q^b - 1) q^(-ib) on the sphere S_G(i), i >= 1,
/// spread uniformly over that sphere. Its characteristic function on O_K^d is
/// 1 - alpha ||y||^b with alpha = (q^(b+d) - 1) / ((q^d - 1) q^b).
struct WalkParams {
  FieldParamsPtr field;
  double b = 1.0;
  double alpha = 0.0;

  static WalkParams make(FieldParamsPtr field, double b);

  double q() const { return static_cast<double>(field->q()); }
  int d() const { return field->d(); }
};

/// A law on G that depends only on the norm, stored shell by shell.
struct RadialLaw {
  double atom_at_zero = 0.0;
  /// sphere_mass[i - 1] is the mass of S_G(i), i = 1..size.
  std::vector<double> sphere_mass;
  /// Rigorous bound on the mass beyond the stored shells.
  double tail_bound = 0.0;

  double stored_mass() const;
};

/// A sampled primitive walk: positions[0] is the identity.
struct WalkPath {
  std::vector<GroupElement> positions;
  std::uint64_t seed = 0;
};

double increment_sphere_prob(const WalkParams& walk, int i);

/// Point mass of the increment at g.
double increment_pmf_at(const WalkParams& walk, const GroupElement& g);

/// Point mass of the increment at any element of norm q^k (k = 0: identity).
double increment_pmf_shell(const WalkParams& walk, int k);

/// Shells 1..max_shell of the increment law with the geometric tail q^(-max_shell b).
RadialLaw increment_law(const WalkParams& walk, int max_shell);

/// Radius index of an increment, by sequential inverse CDF.
int sample_increment_radius(const WalkParams& walk, Rng& rng);
GroupElement sample_increment(const WalkParams& walk, Rng& rng);

/// positions[0..steps] of one walk drawn from `rng`.
std::vector<GroupElement> sample_positions(const WalkParams& walk, std::uint64_t steps, Rng& rng);
WalkPath sample_walk(const WalkParams& walk, std::uint64_t steps, std::uint64_t seed);

/// 1 - alpha ||y||^b; throws DomainError when ||y|| > 1.
double charfn(const WalkParams& walk, QNorm norm_y);

/// Shell sum of point masses against the exact sphere integrals of the
/// character, over shells 1..truncation.
SeriesValue charfn_oracle(const WalkParams& walk, QNorm norm_y, int truncation);

/// Same, with the truncation chosen so the tail is below tol.
SeriesValue charfn_oracle_tol(const WalkParams& walk, QNorm norm_y, double tol);

/// n-step point mass at any element of norm q^k (k = 0: identity).
SeriesValue nstep_pmf_shell(const WalkParams& walk, std::uint64_t n, int k, double tol = 1e-13);
SeriesValue nstep_pmf_at(const WalkParams& walk, std::uint64_t n, const GroupElement& g, double tol = 1e-13);

/// The same point mass as the inverse transform of charfn^n, summed over the
/// dual shells ||y|| = q^-j, j >= 0.
SeriesValue nstep_pmf_fourier(const WalkParams& walk, std::uint64_t n, int k, double tol = 1e-13);

/// P(||S_n|| <= q^k) from the dual shell sum. k < 0 is treated as k = 0.
SeriesValue nstep_cdf(const WalkParams& walk, std::uint64_t n, int k, double tol = 1e-13);

/// P(||S_n|| <= q^k) by summing point masses over the shells of the ball.
SeriesValue nstep_cdf_shells(const WalkParams& walk, std::uint64_t n, int k, double tol = 1e-13);

/// Radial n-step law on shells 1..max_shell.
RadialLaw nstep_law(const WalkParams& walk, std::uint64_t n, int max_shell, double tol = 1e-13);

/// Dense n-fold convolution of the increment law truncated to B_G(M).
struct ConvolutionOracle {
  FieldParamsPtr field;
  int log_radius = 0;
  /// Indexed by index_in_ball(g, log_radius).
  std::vector<double> pmf;
  /// Total mass of the truncated convolution and its guaranteed lower bound.
  double total_mass = 0.0;
  double mass_lower_bound = 0.0;

  double at(const GroupElement& g) const;
};

/// Requires 1 <= n <= 5 and q^(Md) <= cap.
ConvolutionOracle nstep_convolution_oracle(const WalkParams& walk, int n, int log_radius,
                                           std::size_t cap = 4096);

/// Convolution of two dense laws on B_G(M).
std::vector<double> convolve_dense(const FieldParamsPtr& field, int log_radius, const std::vector<double>& a,
                                   const std::vector<double>& b);

/// E ||S_n||^r, summed shell by shell. Requires 0 < r < b.
SeriesValue moment_exact(const WalkParams& walk, std::uint64_t n, double r, double tol = 1e-12);

/// C(r,d) = (q^(r+d) - q^r) / (q^(r+d) - 1).
double moment_constant_c(const WalkParams& walk, double r);

/// K = 2 C(r,d) (alpha^(r/b) q^b Gamma((b-r)/b) + (q^r - q^-d)), so that
/// E ||S_n||^r <= K n^(r/b).
double moment_bound_constant(const WalkParams& walk, double r);

}  // namespace ultradiffuse
