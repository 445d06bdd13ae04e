#include "ultradiffuse/limit_density.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {
namespace {

constexpr int kMaxTerms = 1'000'000;

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw InvalidParameters("time must be positive and finite");
}

void require_tol(double tol) {
  if (!(tol > 0.0)) throw InvalidParameters("tolerance must be positive");
}

/// exp(-s q^(nb)) - exp(-s q^((n+1)b)), computed without cancellation.
double heat_term(double s, double b, double lq, int n) {
  const double u = s * std::exp(n * b * lq);
  return std::exp(-u) * -std::expm1(-u * std::expm1(b * lq));
}

/// sum_{j <= top} exp(-s q^(jb)) q^(jd) (1 - q^-d), with the truncated lower
/// tail bounded by the remaining Haar mass.
SeriesValue ball_series(double s, double b, int d, double lq, int top, double tol) {
  const double shell = -std::expm1(-d * lq);
  CompensatedSum sum;
  for (int j = top; j > top - kMaxTerms; --j) {
    sum.add(std::exp(-s * std::exp(j * b * lq) + j * d * lq) * shell);
    const double tail = std::exp((j - 1) * d * lq);
    if (tail <= tol) return {sum.value(), tail + sum.rounding_bound()};
  }
  throw ToleranceError("ball series did not reach tolerance");
}

}  // namespace

DiffusionParams DiffusionParams::make(FieldParamsPtr field, double b, double sigma) {
  if (!field) throw InvalidParameters("missing field parameters");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidParameters("exponent b must be positive and finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameters("sigma must be positive and finite");
  return DiffusionParams{std::move(field), b, sigma};
}

DiffusionParams DiffusionParams::from_scale(const ScaleParams& scale) {
  return make(scale.walk.field, scale.walk.b, scale.sigma);
}

SeriesValue rho(const DiffusionParams& dp, double t, QNorm norm_x, double tol) {
  require_time(t);
  require_tol(tol);
  if (norm_x.is_zero()) throw DomainError("the heat kernel is only evaluated away from the origin");
  const double s = dp.sigma * t;
  const double lq = std::log(dp.q());
  const double b = dp.b;
  const int d = dp.d();
  const double geometric = -std::expm1(-(b + d) * lq);
  CompensatedSum sum;
  const int top = -norm_x.exponent();
  for (int n = top; n > top - kMaxTerms; --n) {
    sum.add(heat_term(s, b, lq, n) * std::exp(n * d * lq));
    // Each remaining term is at most s (q^b - 1) q^(n(b+d)).
    const double tail = s * std::expm1(b * lq) * std::exp((n - 1) * (b + d) * lq) / geometric;
    if (tail <= tol) return {sum.value(), tail + sum.rounding_bound()};
  }
  throw ToleranceError("heat kernel series did not reach tolerance");
}

SeriesValue shell_prob(const DiffusionParams& dp, double t, int k, double tol) {
  const double size = std::pow(dp.q(), static_cast<double>(k) * dp.d()) * -std::expm1(-dp.d() * std::log(dp.q()));
  const auto r = rho(dp, t, QNorm::power(k), tol / size);
  return {r.value * size, r.error_bound * size};
}

SeriesValue ball_prob(const DiffusionParams& dp, double t, const FieldBall& ball, double tol) {
  require_time(t);
  require_tol(tol);
  if (ball.whole_space) return {1.0, 0.0};
  const int n = ball.log_radius;
  const double lq = std::log(dp.q());
  const double volume = std::exp(n * dp.d() * lq);
  if (ball.contains_origin()) {
    const auto s = ball_series(dp.sigma * t, dp.b, dp.d(), lq, -n, tol / volume);
    return {std::clamp(s.value * volume, 0.0, 1.0), s.error_bound * volume};
  }
  const auto k = log_norm(ball.center);
  const auto r = rho(dp, t, QNorm::power(*k), tol / volume);
  return {r.value * volume, r.error_bound * volume};
}

namespace {

/// Kernel between cosets of B_d(M): A(dt, c) = P(X_dt in c + B_d(M)).
class FieldCosetKernel {
 public:
  FieldCosetKernel(const DiffusionParams& dp, int resolution, double tol)
      : dp_(dp), resolution_(resolution), tol_(tol) {}

  /// `log_dist` is log_q ||c||, or nullopt for c = 0.
  SeriesValue operator()(double dt, std::optional<int> log_dist) {
    const bool zero = !log_dist || *log_dist <= resolution_;
    const int key = zero ? resolution_ : *log_dist;
    auto [it, inserted] = cache_.try_emplace({dt, key, zero});
    if (inserted) {
      if (zero) {
        it->second = ball_prob(dp_, dt, FieldBall::at_origin(dp_.field, resolution_), tol_);
      } else {
        const double cell = std::pow(dp_.q(), static_cast<double>(resolution_) * dp_.d());
        const auto r = rho(dp_, dt, QNorm::power(key), tol_ / cell);
        it->second = {r.value * cell, r.error_bound * cell};
      }
    }
    return it->second;
  }

 private:
  const DiffusionParams& dp_;
  int resolution_;
  double tol_;
  std::map<std::tuple<double, int, bool>, SeriesValue> cache_;
};

}  // namespace

SeriesValue fdd_prob(const DiffusionParams& dp, const History& h, int resolution, double tol, std::size_t cap) {
  h.validate();
  require_tol(tol);
  std::vector<const HistoryStep*> active;
  for (const auto& s : h.steps) {
    if (s.ball.whole_space) continue;
    if (s.ball.log_radius < resolution) throw InvalidParameters("route ball finer than the resolution");
    active.push_back(&s);
  }
  if (active.empty()) return {1.0, 0.0};

  std::vector<std::vector<FieldVector>> reps;
  std::size_t total = 0;
  for (const auto* s : active) {
    reps.push_back(enumerate_coset_reps(s->ball, resolution, cap));
    total += reps.back().size();
  }
  FieldCosetKernel kernel(dp, resolution, tol / (4.0 * static_cast<double>(total)));

  std::vector<FieldVector> prev{zero_vector(dp.field)};
  std::vector<double> weight{1.0};
  std::vector<double> error{0.0};
  double prev_time = 0.0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const double dt = active[i]->time - prev_time;
    std::vector<double> next_weight(reps[i].size());
    std::vector<double> next_error(reps[i].size());
    for (std::size_t b = 0; b < reps[i].size(); ++b) {
      CompensatedSum w;
      double e = 0.0;
      for (std::size_t a = 0; a < prev.size(); ++a) {
        const auto first = first_difference(reps[i][b], prev[a]);
        const SeriesValue k = kernel(dt, first ? std::optional<int>(-*first) : std::nullopt);
        w.add(weight[a] * k.value);
        e += error[a] * (k.value + k.error_bound) + weight[a] * k.error_bound;
      }
      next_weight[b] = w.value();
      next_error[b] = e + w.rounding_bound();
    }
    prev = std::move(reps[i]);
    weight = std::move(next_weight);
    error = std::move(next_error);
    prev_time = active[i]->time;
  }
  CompensatedSum p;
  double e = 0.0;
  for (std::size_t a = 0; a < weight.size(); ++a) {
    p.add(weight[a]);
    e += error[a];
  }
  return {std::clamp(p.value(), 0.0, 1.0), e + p.rounding_bound()};
}

SeriesValue fdd_prob(const DiffusionParams& dp, const History& h, double tol, std::size_t cap) {
  std::optional<int> finest;
  for (const auto& s : h.steps) {
    if (!s.ball.whole_space) finest = finest ? std::min(*finest, s.ball.log_radius) : s.ball.log_radius;
  }
  return fdd_prob(dp, h, finest.value_or(0), tol, cap);
}

double e_m_value(const ScaleParams& scale, double t, QNorm norm_x) {
  if (!norm_x.at_most(scale.m)) return 0.0;
  const auto n = static_cast<double>(scale.steps_until(t));
  if (norm_x.is_zero()) return 1.0;
  return std::pow(charfn(scale.walk, QNorm::power(norm_x.exponent() - scale.m)), n);
}

SeriesValue epsilon_m(const ScaleParams& scale, double t, double tol) {
  require_time(t);
  require_tol(tol);
  const double s = scale.sigma * t;
  const double b = scale.walk.b;
  const int d = scale.walk.d();
  const double lq = std::log(scale.walk.q());
  const double shell = -std::expm1(-d * lq);
  const int m = scale.m;
  auto limit = [&](int j) { return std::exp(-s * std::exp(j * b * lq)); };

  CompensatedSum sum;
  double bound = 0.0;

  // Shells beyond q^m, where E_m vanishes. Once the ratio of successive
  // terms is at most 1/2 the remainder is dominated by the last term.
  const double ratio_threshold = std::log(2.0) + d * lq;
  for (int j = m + 1;; ++j) {
    if (j > m + kMaxTerms) throw ToleranceError("epsilon_m upper tail did not converge");
    const double term = limit(j) * std::exp(j * d * lq) * shell;
    sum.add(term);
    if (s * std::exp(j * b * lq) * std::expm1(b * lq) >= ratio_threshold && term <= tol / 4) {
      bound += term;
      break;
    }
  }

  // Shells q^j for j <= m; below j, |E_m - exp| <= 2 s q^(jb).
  const double geometric = -std::expm1(-(b + d) * lq);
  for (int j = m;; --j) {
    if (j < m - kMaxTerms) throw ToleranceError("epsilon_m lower tail did not converge");
    const double diff = std::abs(e_m_value(scale, t, QNorm::power(j)) - limit(j));
    sum.add(diff * std::exp(j * d * lq) * shell);
    const double tail = 2.0 * s * std::exp((j - 1) * (b + d) * lq) / geometric;
    if (j < m && tail <= tol / 4) {
      bound += tail;
      break;
    }
  }
  return {sum.value(), bound + sum.rounding_bound()};
}

ConvergenceReport fdd_convergence_report(const WalkParams& walk, double sigma, const History& h,
                                         const std::vector<int>& m_values, double tol) {
  ConvergenceReport report;
  const DiffusionParams dp = DiffusionParams::make(walk.field, walk.b, sigma);
  const SeriesValue limit = fdd_prob(dp, h, tol);
  for (int m : m_values) {
    const ScaleParams scale = ScaleParams::make(walk, sigma, m);
    ConvergenceRow row;
    row.m = m;
    row.cylinder = cylinder_prob_m(scale, h, tol);
    row.limit = limit;
    row.gap = std::abs(row.cylinder.value - limit.value);
    row.gap_bound = row.cylinder.error_bound + limit.error_bound;
    report.rows.push_back(row);
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    for (std::size_t k = i + 1; k < report.rows.size(); ++k) {
      if (report.rows[k].m != report.rows[i].m + 2) continue;
      if (report.rows[k].gap > report.rows[i].gap + report.rows[k].gap_bound + report.rows[i].gap_bound) {
        report.decreasing_by_parity = false;
      }
    }
  }
  return report;
}

}  // namespace ultradiffuse
