#pragma once

#include <vector>

#include "ultradiffuse/embedding.hpp"

namespace ultradiffuse {

/// Parameters of the limiting diffusion: generator -sigma times the
/// Fourier multiplier ||y||^b on K^d.
struct DiffusionParams {
  FieldParamsPtr field;
  double b = 1.0;
  double sigma = 1.0;

  static DiffusionParams make(FieldParamsPtr field, double b, double sigma);
  static DiffusionParams from_scale(const ScaleParams& scale);

  double q() const { return static_cast<double>(field->q()); }
  int d() const { return field->d(); }
};

/// Heat kernel at ||x|| = q^k (norm_x must be nonzero):
/// sum over n <= -k of (exp(-sigma t q^(nb)) - exp(-sigma t q^((n+1)b))) q^(nd).
SeriesValue rho(const DiffusionParams& dp, double t, QNorm norm_x, double tol = 1e-10);

/// Probability of the shell ||x|| = q^k at time t.
SeriesValue shell_prob(const DiffusionParams& dp, double t, int k, double tol = 1e-10);

/// Probability of a ball at time t, starting from the origin.
SeriesValue ball_prob(const DiffusionParams& dp, double t, const FieldBall& ball, double tol = 1e-10);

/// Finite-dimensional distribution of the cylinder set of h, via a dynamic
/// program over cosets of B_d(resolution). Every route ball must have
/// log radius >= resolution.
SeriesValue fdd_prob(const DiffusionParams& dp, const History& h, int resolution, double tol = 1e-8,
                     std::size_t cap = kDefaultEnumerationCap);

/// Same, at the finest route radius.
SeriesValue fdd_prob(const DiffusionParams& dp, const History& h, double tol = 1e-8,
                     std::size_t cap = kDefaultEnumerationCap);

/// E_m(t, x) = (1 - alpha ||x||^b q^(-mb))^(t_m) for ||x|| <= q^m, else 0.
double e_m_value(const ScaleParams& scale, double t, QNorm norm_x);

/// L1 distance between E_m(t, .) and exp(-sigma t ||.||^b) on K^d.
SeriesValue epsilon_m(const ScaleParams& scale, double t, double tol = 1e-12);

struct ConvergenceRow {
  int m = 0;
  SeriesValue cylinder;
  SeriesValue limit;
  double gap = 0.0;
  double gap_bound = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  /// gap(m + 2) <= gap(m) + gap_bound for every consecutive pair of the same parity.
  bool decreasing_by_parity = true;
};

ConvergenceReport fdd_convergence_report(const WalkParams& walk, double sigma, const History& h,
                                         const std::vector<int>& m_values, double tol = 1e-10);

}  // namespace ultradiffuse
