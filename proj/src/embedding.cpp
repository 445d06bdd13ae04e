#include "ultradiffuse/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {

ScaleParams ScaleParams::make(const WalkParams& walk, double sigma, int m) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameters("sigma must be positive and finite");
  if (m < 0) throw InvalidParameters("scale level m must be nonnegative");
  ScaleParams s;
  s.walk = walk;
  s.sigma = sigma;
  s.m = m;
  s.cprime = walk.alpha / sigma;
  s.delta_m = std::pow(walk.q(), -m);
  s.tau_m = s.cprime * std::pow(walk.q(), -m * walk.b);
  return s;
}

std::uint64_t ScaleParams::steps_until(double t) const {
  if (!(t >= 0.0)) throw InvalidParameters("time must be nonnegative");
  const double raw = std::floor(t / tau_m);
  if (raw >= 9.0e18) throw CapExceeded("step count overflows");
  auto n = static_cast<std::uint64_t>(raw);
  while (static_cast<double>(n + 1) * tau_m <= t) ++n;
  while (n > 0 && static_cast<double>(n) * tau_m > t) --n;
  return n;
}

FieldVector gamma_m(const GroupElement& g, int m) {
  const auto& field = g.params_ptr();
  const int d = field->d();
  FieldVector x;
  x.reserve(d);
  for (int j = 0; j < d; ++j) {
    std::vector<ResidueCode> digits;
    digits.reserve(static_cast<std::size_t>(g.depth()));
    for (int i = -g.depth(); i < 0; ++i) digits.push_back(g.digit(j, i));
    x.push_back(FieldElement::from_digits(field, -g.depth() + m, std::move(digits)));
  }
  return x;
}

bool in_lattice(const FieldVector& x, int m) {
  return std::all_of(x.begin(), x.end(), [m](const FieldElement& c) { return c.is_exact() && c.end_index() <= m; });
}

void History::validate() const {
  double prev = 0.0;
  for (const auto& s : steps) {
    if (!(s.time > prev)) throw InvalidParameters("history times must be positive and strictly increasing");
    prev = s.time;
  }
}

LatticeRegion LatticeRegion::whole(const FieldParamsPtr& field) {
  return LatticeRegion{Kind::kWhole, GroupBall{GroupElement(field), 0}};
}

LatticeRegion LatticeRegion::empty(const FieldParamsPtr& field) {
  return LatticeRegion{Kind::kEmpty, GroupBall{GroupElement(field), 0}};
}

LatticeRegion lattice_preimage(const FieldBall& ball, int m) {
  const auto& field = ball.params_ptr();
  if (ball.whole_space) return LatticeRegion::whole(field);
  const int n = ball.log_radius;
  const int d = field->d();
  // Gamma_m(g) has digit g_(i) at index i + m. The ball fixes indices < -n.
  const int free_layers = std::max(0, n + m);
  std::vector<std::vector<ResidueCode>> coords(d);
  for (int j = 0; j < d; ++j) {
    const FieldElement& c = ball.center[j];
    if (c.is_zero() && c.precision() >= -n) continue;
    if (c.precision() < -n) throw PrecisionError("ball center not known to the ball radius");
    for (int idx = m; idx < -n; ++idx) {
      if (c.digit(idx) != 0) return LatticeRegion::empty(field);
    }
    if (c.is_zero()) continue;
    const int lowest = *c.valuation();
    const int depth = m - lowest;
    if (depth <= free_layers) continue;
    coords[j].assign(static_cast<std::size_t>(depth), 0);
    for (int k = free_layers; k < depth; ++k) coords[j][static_cast<std::size_t>(k)] = c.digit(m - k - 1);
  }
  return LatticeRegion{LatticeRegion::Kind::kBall,
                       GroupBall{GroupElement::from_coordinates(field, coords), free_layers}};
}

DiscreteHistory transform_history(const ScaleParams& scale, const History& h) {
  h.validate();
  DiscreteHistory out;
  for (const auto& s : h.steps) {
    const std::uint64_t step = scale.steps_until(s.time);
    LatticeRegion region = lattice_preimage(s.ball, scale.m);
    if (region.kind == LatticeRegion::Kind::kEmpty) {
      out.empty = true;
      continue;
    }
    if (step == 0) {
      if (region.kind == LatticeRegion::Kind::kBall && !region.ball.contains(GroupElement(scale.walk.field))) {
        out.empty = true;
      }
      continue;
    }
    if (!out.steps.empty() && out.steps.back().step == step) {
      auto& last = out.steps.back().region;
      if (region.kind == LatticeRegion::Kind::kWhole) continue;
      if (last.kind == LatticeRegion::Kind::kWhole) {
        last = region;
        continue;
      }
      if (auto both = intersect(last.ball, region.ball)) {
        last.ball = *both;
      } else {
        last = LatticeRegion::empty(scale.walk.field);
        out.empty = true;
      }
      continue;
    }
    out.steps.push_back({step, std::move(region)});
  }
  return out;
}

namespace {

/// Transition kernel between cosets of B_G(M) over `dn` steps, keyed by the
/// depth of the coset difference (0 stands for the zero coset).
class CosetKernel {
 public:
  CosetKernel(const WalkParams& walk, int resolution, double tol)
      : walk_(walk), resolution_(resolution), tol_(tol),
        cell_(std::pow(walk.q(), static_cast<double>(resolution) * walk.d())) {}

  SeriesValue operator()(std::uint64_t dn, int depth) {
    const int key = depth <= resolution_ ? 0 : depth;
    auto [it, inserted] = cache_.try_emplace({dn, key});
    if (inserted) {
      if (key == 0) {
        it->second = nstep_cdf(walk_, dn, resolution_, tol_);
      } else {
        const auto p = nstep_pmf_shell(walk_, dn, key, tol_ / cell_);
        it->second = {p.value * cell_, p.error_bound * cell_};
      }
    }
    return it->second;
  }

 private:
  const WalkParams& walk_;
  int resolution_;
  double tol_;
  double cell_;
  std::map<std::pair<std::uint64_t, int>, SeriesValue> cache_;
};

}  // namespace

SeriesValue cylinder_prob_m(const ScaleParams& scale, const History& h, double tol, std::size_t cap) {
  const DiscreteHistory dh = transform_history(scale, h);
  if (dh.empty) return {0.0, 0.0};
  std::vector<const DiscreteHistory::Step*> active;
  for (const auto& s : dh.steps) {
    if (s.region.kind == LatticeRegion::Kind::kBall) active.push_back(&s);
  }
  if (active.empty()) return {1.0, 0.0};

  int resolution = active.front()->region.ball.log_radius;
  for (const auto* s : active) resolution = std::min(resolution, s->region.ball.log_radius);

  std::vector<std::vector<GroupElement>> reps;
  std::size_t total = 0;
  for (const auto* s : active) {
    reps.push_back(enumerate_coset_reps(s->region.ball, resolution, cap));
    total += reps.back().size();
  }
  CosetKernel kernel(scale.walk, resolution, tol / (4.0 * static_cast<double>(total)));

  std::vector<GroupElement> prev{GroupElement(scale.walk.field)};
  std::vector<double> weight{1.0};
  std::vector<double> error{0.0};
  std::uint64_t prev_step = 0;
  for (std::size_t i = 0; i < active.size(); ++i) {
    const std::uint64_t dn = active[i]->step - prev_step;
    std::vector<double> next_weight(reps[i].size());
    std::vector<double> next_error(reps[i].size());
    for (std::size_t b = 0; b < reps[i].size(); ++b) {
      CompensatedSum w;
      double e = 0.0;
      for (std::size_t a = 0; a < prev.size(); ++a) {
        if (weight[a] == 0.0 && error[a] == 0.0) continue;
        const SeriesValue k = kernel(dn, log_distance(reps[i][b], prev[a]));
        w.add(weight[a] * k.value);
        e += error[a] * (k.value + k.error_bound) + weight[a] * k.error_bound;
      }
      next_weight[b] = w.value();
      next_error[b] = e + w.rounding_bound();
    }
    prev = std::move(reps[i]);
    weight = std::move(next_weight);
    error = std::move(next_error);
    prev_step = active[i]->step;
  }
  CompensatedSum p;
  double e = 0.0;
  for (std::size_t a = 0; a < weight.size(); ++a) {
    p.add(weight[a]);
    e += error[a];
  }
  return {std::clamp(p.value(), 0.0, 1.0), e + p.rounding_bound()};
}

SeriesValue marginal_pmf_m(const ScaleParams& scale, double t, const GroupElement& g, double tol) {
  const double cell = std::pow(scale.walk.q(), static_cast<double>(scale.m) * scale.walk.d());
  const std::uint64_t n = scale.steps_until(t);
  SeriesValue direct;
  if (n == 0) {
    direct = {g.is_identity() ? cell : 0.0, 0.0};
  } else {
    const auto p = nstep_pmf_at(scale.walk, n, g, tol / cell);
    direct = {p.value * cell, p.error_bound * cell};
  }
  const SeriesValue fourier = marginal_pmf_m_fourier(scale, t, g, tol);
  if (std::abs(direct.value - fourier.value) > direct.error_bound + fourier.error_bound + tol) {
    throw ToleranceError("marginal density routes disagree: " + std::to_string(direct.value) + " vs " +
                         std::to_string(fourier.value));
  }
  return direct;
}

SeriesValue marginal_pmf_m_fourier(const ScaleParams& scale, double t, const GroupElement& g, double tol) {
  if (!(tol > 0.0)) throw InvalidParameters("tolerance must be positive");
  const WalkParams& walk = scale.walk;
  const auto n = static_cast<double>(scale.steps_until(t));
  const int m = scale.m;
  // ||Gamma_m(g)|| = q^(depth - m).
  const QNorm norm_x = g.is_identity() ? QNorm::zero() : QNorm::power(g.depth() - m);
  const double dlq = walk.d() * std::log(walk.q());
  CompensatedSum sum;
  for (int j = m; j > m - 1'000'000; --j) {
    const double e_m = std::pow(charfn(walk, QNorm::power(j - m)), n);
    const double integral = static_cast<double>(char_sphere_integral(*walk.field, j, norm_x));
    if (integral != 0.0) sum.add(e_m * integral);
    // Remaining shells have |E_m| <= 1 and total measure q^((j-1)d).
    const double tail = std::exp((j - 1) * dlq);
    if (tail <= tol / 2) return {sum.value(), tail + sum.rounding_bound()};
  }
  throw ToleranceError("Fourier marginal did not reach tolerance");
}

const FieldVector& EmbeddedPath::value_at(double t) const {
  if (!(t >= 0.0)) throw InvalidParameters("time must be nonnegative");
  auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return values[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

EmbeddedPath sample_embedded_path(const ScaleParams& scale, double horizon, Rng& rng, std::uint64_t step_cap) {
  const std::uint64_t steps = scale.steps_until(horizon);
  if (steps > step_cap) throw CapExceeded("path needs " + std::to_string(steps) + " steps");
  EmbeddedPath path;
  path.m = scale.m;
  path.tau_m = scale.tau_m;
  path.walk = sample_positions(scale.walk, steps, rng);
  path.jump_times.reserve(steps + 1);
  path.values.reserve(steps + 1);
  for (std::uint64_t n = 0; n <= steps; ++n) {
    path.jump_times.push_back(static_cast<double>(n) * scale.tau_m);
    path.values.push_back(gamma_m(path.walk[n], scale.m));
  }
  return path;
}

bool path_in_cylinder(const EmbeddedPath& path, const History& h) {
  return std::all_of(h.steps.begin(), h.steps.end(),
                     [&](const HistoryStep& s) { return s.ball.contains(path.value_at(s.time)); });
}

bool walk_in_cylinder(const std::vector<GroupElement>& walk, const DiscreteHistory& h) {
  if (h.empty) return false;
  for (const auto& s : h.steps) {
    if (s.step >= walk.size()) throw InvalidParameters("walk shorter than the history");
    if (s.region.kind == LatticeRegion::Kind::kBall && !s.region.ball.contains(walk[s.step])) return false;
  }
  return true;
}

SeriesValue embedded_moment(const ScaleParams& scale, double t, double r, double tol) {
  return embedded_increment_moment(scale, 0.0, t, r, tol);
}

SeriesValue embedded_increment_moment(const ScaleParams& scale, double s, double t, double r, double tol) {
  if (!(s <= t)) throw InvalidParameters("increment needs s <= t");
  if (!(r > 0.0) || !(r < scale.walk.b)) throw DomainError("moment exponent must lie in (0, b)");
  const std::uint64_t n = scale.steps_until(t) - scale.steps_until(s);
  if (n == 0) return {0.0, 0.0};
  const double factor = std::pow(scale.walk.q(), -scale.m * r);
  const auto mom = moment_exact(scale.walk, n, r, tol / factor);
  return {mom.value * factor, mom.error_bound * factor};
}

double embedded_moment_constant(const ScaleParams& scale, double r) {
  return moment_bound_constant(scale.walk, r) * std::pow(1.0 / scale.cprime, r / scale.walk.b);
}

}  // namespace ultradiffuse
