#include "ultradiffuse/primitive_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {

double clamp_probability(double value, double slack) {
  if (value >= 0.0) return value;
  if (value >= -slack) return 0.0;
  throw ToleranceError("probability evaluated to " + std::to_string(value));
}

namespace {

constexpr int kMaxTerms = 1'000'000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_tol(double tol) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidParameters("tolerance must be positive");
}

void require_steps(std::uint64_t n) {
  if (n == 0) throw InvalidParameters("step count must be at least 1");
}

/// (1 - x)^n for real n >= 0; n is integral whenever 1 - x < 0.
double pow1m(double x, double n) {
  if (x < 1.0) return std::exp(n * std::log1p(-x));
  return std::pow(1.0 - x, n);
}

/// Successive differences D_i = (1 - alpha q^-ib)^n - (1 - alpha q^-(i-1)b)^n.
class StepDifferences {
 public:
  StepDifferences(const WalkParams& walk, std::uint64_t n)
      : walk_(walk), n_(static_cast<double>(n)), log_q_(std::log(walk.q())) {}

  double x(int i) const { return walk_.alpha * std::exp(-i * walk_.b * log_q_); }

  /// n log(1 - x_i), valid for i >= 1.
  double log_power(int i) const { return n_ * std::log1p(-x(i)); }

  double operator()(int i) {
    if (i == 1) {
      const double a1 = log_power(1);
      max_abs_exponent_ = std::max(max_abs_exponent_, std::abs(a1));
      return std::exp(a1) - pow1m(walk_.alpha, n_);
    }
    const double outer = log_power(i - 1);
    const double inner = log_power(i);
    max_abs_exponent_ = std::max(max_abs_exponent_, std::abs(inner));
    return -std::exp(inner) * std::expm1(outer - inner);
  }

  /// Rigorous majorant of sum_{i > last} D_i q^((k - i) d).
  double tail(int last, int k) const {
    const double b = walk_.b;
    const int d = walk_.d();
    return n_ * walk_.alpha * std::expm1(b * log_q_) *
           std::exp(k * d * log_q_ - (last + 1) * (b + d) * log_q_) / -std::expm1(-(b + d) * log_q_);
  }

  double rounding_factor() const { return 1.0 + max_abs_exponent_; }
  double n() const { return n_; }
  double log_q() const { return log_q_; }

 private:
  const WalkParams& walk_;
  double n_;
  double log_q_;
  double max_abs_exponent_ = 0.0;
};

/// sum_{i >= start} D_i q^((k - i) d), stopping once the tail is below tol.
SeriesValue difference_series(const WalkParams& walk, std::uint64_t n, int start, int k, double tol) {
  StepDifferences diff(walk, n);
  CompensatedSum sum;
  const double qd = std::exp(-walk.d() * diff.log_q());
  double weight = std::exp((k - start) * walk.d() * diff.log_q());
  for (int i = start; i < start + kMaxTerms; ++i) {
    sum.add(diff(i) * weight);
    weight *= qd;
    const double tail = diff.tail(i, k);
    if (tail <= tol) return {sum.value(), tail + sum.rounding_bound() * diff.rounding_factor()};
  }
  throw ToleranceError("series did not reach tolerance " + std::to_string(tol));
}

double sphere_size(const WalkParams& walk, int k) {
  return std::pow(walk.q(), k * walk.d()) * -std::expm1(-walk.d() * std::log(walk.q()));
}

}  // namespace

WalkParams WalkParams::make(FieldParamsPtr field, double b) {
  if (!field) throw InvalidParameters("missing field parameters");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidParameters("exponent b must be positive and finite");
  WalkParams walk;
  walk.field = std::move(field);
  walk.b = b;
  const double q = walk.q();
  const double d = walk.d();
  walk.alpha = (std::pow(q, b + d) - 1.0) / ((std::pow(q, d) - 1.0) * std::pow(q, b));
  return walk;
}

double RadialLaw::stored_mass() const {
  CompensatedSum sum;
  sum.add(atom_at_zero);
  for (double m : sphere_mass) sum.add(m);
  return sum.value();
}

double increment_sphere_prob(const WalkParams& walk, int i) {
  if (i <= 0) return 0.0;
  const double lb = walk.b * std::log(walk.q());
  return std::expm1(lb) * std::exp(-i * lb);
}

double increment_pmf_shell(const WalkParams& walk, int k) {
  if (k <= 0) return 0.0;
  return increment_sphere_prob(walk, k) / sphere_size(walk, k);
}

double increment_pmf_at(const WalkParams& walk, const GroupElement& g) {
  if (!g.params().same_as(*walk.field)) throw ParameterMismatch("element and walk use different fields");
  return increment_pmf_shell(walk, g.depth());
}

RadialLaw increment_law(const WalkParams& walk, int max_shell) {
  if (max_shell < 0) throw InvalidParameters("max_shell must be nonnegative");
  RadialLaw law;
  for (int i = 1; i <= max_shell; ++i) law.sphere_mass.push_back(increment_sphere_prob(walk, i));
  law.tail_bound = std::exp(-max_shell * walk.b * std::log(walk.q()));
  return law;
}

int sample_increment_radius(const WalkParams& walk, Rng& rng) {
  const double shrink = std::exp(-walk.b * std::log(walk.q()));
  const double v = 1.0 - std::generate_canonical<double, 64>(rng);
  double tail = shrink;
  int i = 1;
  while (v <= tail) {
    tail *= shrink;
    ++i;
  }
  return i;
}

GroupElement sample_increment(const WalkParams& walk, Rng& rng) {
  const int i = sample_increment_radius(walk, rng);
  const int d = walk.d();
  std::uniform_int_distribution<ResidueCode> digit(0, walk.field->q() - 1);
  std::vector<ResidueCode> layers(static_cast<std::size_t>(i) * d);
  const std::size_t top = static_cast<std::size_t>(i - 1) * d;
  for (std::size_t k = 0; k < top; ++k) layers[k] = digit(rng);
  bool nonzero = false;
  while (!nonzero) {
    for (std::size_t k = top; k < layers.size(); ++k) {
      layers[k] = digit(rng);
      nonzero = nonzero || layers[k] != 0;
    }
  }
  return GroupElement::from_layers(walk.field, std::move(layers));
}

std::vector<GroupElement> sample_positions(const WalkParams& walk, std::uint64_t steps, Rng& rng) {
  std::vector<GroupElement> positions;
  positions.reserve(steps + 1);
  positions.emplace_back(walk.field);
  for (std::uint64_t s = 0; s < steps; ++s) {
    positions.push_back(group_add(positions.back(), sample_increment(walk, rng)));
  }
  return positions;
}

WalkPath sample_walk(const WalkParams& walk, std::uint64_t steps, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0);
  return WalkPath{sample_positions(walk, steps, rng), seed};
}

double charfn(const WalkParams& walk, QNorm norm_y) {
  if (norm_y.is_zero()) return 1.0;
  if (!norm_y.at_most(0)) throw DomainError("charfn is defined for ||y|| <= 1");
  return 1.0 - walk.alpha * std::exp(norm_y.exponent() * walk.b * std::log(walk.q()));
}

SeriesValue charfn_oracle(const WalkParams& walk, QNorm norm_y, int truncation) {
  if (truncation < 1) throw InvalidParameters("truncation must be at least 1");
  if (!norm_y.at_most(0)) throw DomainError("charfn is defined for ||y|| <= 1");
  CompensatedSum sum;
  for (int i = 1; i <= truncation; ++i) {
    const double integral = static_cast<double>(char_sphere_integral(*walk.field, i, norm_y));
    if (integral != 0.0) sum.add(increment_pmf_shell(walk, i) * integral);
  }
  const double tail = std::exp(-truncation * walk.b * std::log(walk.q()));
  return {sum.value(), tail + sum.rounding_bound()};
}

SeriesValue charfn_oracle_tol(const WalkParams& walk, QNorm norm_y, double tol) {
  require_tol(tol);
  const double needed = std::ceil(-std::log(tol) / (walk.b * std::log(walk.q())));
  constexpr int kCap = 100'000;
  if (!(needed < kCap)) throw ToleranceError("charfn oracle needs more than " + std::to_string(kCap) + " shells");
  return charfn_oracle(walk, norm_y, std::max(1, static_cast<int>(needed)));
}

SeriesValue nstep_pmf_shell(const WalkParams& walk, std::uint64_t n, int k, double tol) {
  require_steps(n);
  require_tol(tol);
  if (k < 0) throw InvalidParameters("shell index must be nonnegative");
  SeriesValue s = difference_series(walk, n, std::max(k, 1), 0, tol);
  if (k == 0) {
    const double atom = pow1m(walk.alpha, static_cast<double>(n));
    s.value += atom;
    s.error_bound += 4 * kEps * std::abs(atom);
  }
  s.value = clamp_probability(s.value, s.error_bound + 1e-12);
  return s;
}

SeriesValue nstep_pmf_at(const WalkParams& walk, std::uint64_t n, const GroupElement& g, double tol) {
  if (!g.params().same_as(*walk.field)) throw ParameterMismatch("element and walk use different fields");
  return nstep_pmf_shell(walk, n, g.depth(), tol);
}

SeriesValue nstep_pmf_fourier(const WalkParams& walk, std::uint64_t n, int k, double tol) {
  require_steps(n);
  require_tol(tol);
  if (k < 0) throw InvalidParameters("shell index must be nonnegative");
  const QNorm norm_g = k == 0 ? QNorm::zero() : QNorm::power(k);
  const double dlq = walk.d() * std::log(walk.q());
  CompensatedSum sum;
  for (int j = std::max(k - 1, 0); j < kMaxTerms; ++j) {
    const double phi = charfn(walk, QNorm::power(-j));
    const double integral = static_cast<double>(char_sphere_integral(*walk.field, -j, norm_g));
    sum.add(std::pow(phi, static_cast<double>(n)) * integral);
    const double tail = std::exp(-(j + 1) * dlq);
    if (tail <= tol) return {sum.value(), tail + sum.rounding_bound()};
  }
  throw ToleranceError("Fourier series did not reach tolerance");
}

SeriesValue nstep_cdf(const WalkParams& walk, std::uint64_t n, int k, double tol) {
  require_steps(n);
  require_tol(tol);
  k = std::max(k, 0);
  const double lq = std::log(walk.q());
  const double dlq = walk.d() * lq;
  const double shell = -std::expm1(-dlq);
  CompensatedSum sum;
  for (int j = k; j < k + kMaxTerms; ++j) {
    const double x = walk.alpha * std::exp(-j * walk.b * lq);
    sum.add(pow1m(x, static_cast<double>(n)) * shell * std::exp((k - j) * dlq));
    const double tail = std::exp((k - j - 1) * dlq);
    if (tail <= tol) {
      SeriesValue s{sum.value(), tail + sum.rounding_bound() * (1.0 + static_cast<double>(n) * kEps * 64)};
      if (s.value < 0.0 && s.value >= -1e-9) s.value = 0.0;
      if (s.value > 1.0 && s.value <= 1.0 + 1e-9) s.value = 1.0;
      if (s.value < 0.0 || s.value > 1.0) throw ToleranceError("cdf left [0,1]: " + std::to_string(s.value));
      return s;
    }
  }
  throw ToleranceError("cdf series did not reach tolerance");
}

SeriesValue nstep_cdf_shells(const WalkParams& walk, std::uint64_t n, int k, double tol) {
  require_steps(n);
  require_tol(tol);
  k = std::max(k, 0);
  const double lead = k == 0 ? pow1m(walk.alpha, static_cast<double>(n))
                             : pow1m(walk.alpha * std::exp(-k * walk.b * std::log(walk.q())), static_cast<double>(n));
  SeriesValue s = difference_series(walk, n, k + 1, k, tol);
  s.value += lead;
  s.error_bound += 4 * kEps * std::abs(lead);
  s.value = std::min(1.0, clamp_probability(s.value, s.error_bound + 1e-12));
  return s;
}

RadialLaw nstep_law(const WalkParams& walk, std::uint64_t n, int max_shell, double tol) {
  if (max_shell < 0) throw InvalidParameters("max_shell must be nonnegative");
  RadialLaw law;
  double err = 0.0;
  const auto atom = nstep_pmf_shell(walk, n, 0, tol);
  law.atom_at_zero = atom.value;
  err += atom.error_bound;
  for (int k = 1; k <= max_shell; ++k) {
    const double size = sphere_size(walk, k);
    const auto p = nstep_pmf_shell(walk, n, k, tol / size);
    law.sphere_mass.push_back(p.value * size);
    err += p.error_bound * size;
  }
  law.tail_bound = std::max(0.0, 1.0 - law.stored_mass()) + err;
  return law;
}

double ConvolutionOracle::at(const GroupElement& g) const {
  if (g.depth() > log_radius) return 0.0;
  return pmf[index_in_ball(g, log_radius)];
}

std::vector<double> convolve_dense(const FieldParamsPtr& field, int log_radius, const std::vector<double>& a,
                                   const std::vector<double>& b) {
  if (a.size() != b.size()) throw InvalidParameters("dense laws have different sizes");
  std::vector<GroupElement> elements;
  elements.reserve(a.size());
  for (std::uint64_t i = 0; i < a.size(); ++i) elements.push_back(element_at_index(field, i, log_radius));
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t y = 0; y < a.size(); ++y) {
    if (a[y] == 0.0) continue;
    for (std::size_t z = 0; z < b.size(); ++z) {
      if (b[z] == 0.0) continue;
      out[index_in_ball(group_add(elements[y], elements[z]), log_radius)] += a[y] * b[z];
    }
  }
  return out;
}

ConvolutionOracle nstep_convolution_oracle(const WalkParams& walk, int n, int log_radius, std::size_t cap) {
  if (n < 1 || n > 5) throw InvalidParameters("convolution oracle supports 1 <= n <= 5");
  if (log_radius < 0) throw InvalidParameters("log_radius must be nonnegative");
  const std::size_t size = coset_count(*walk.field, log_radius, 0, cap);
  ConvolutionOracle oracle;
  oracle.field = walk.field;
  oracle.log_radius = log_radius;
  std::vector<double> step(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    step[i] = increment_pmf_at(walk, element_at_index(walk.field, i, log_radius));
  }
  oracle.pmf = step;
  for (int s = 1; s < n; ++s) oracle.pmf = convolve_dense(walk.field, log_radius, oracle.pmf, step);
  CompensatedSum total;
  for (double v : oracle.pmf) total.add(v);
  oracle.total_mass = total.value();
  oracle.mass_lower_bound = 1.0 - n * std::exp(-log_radius * walk.b * std::log(walk.q()));
  return oracle;
}

SeriesValue moment_exact(const WalkParams& walk, std::uint64_t n, double r, double tol) {
  require_steps(n);
  require_tol(tol);
  if (!(r > 0.0)) throw DomainError("moment exponent must be positive");
  if (!(r < walk.b)) throw DomainError("moment exponent must be below b");

  const double lq = std::log(walk.q());
  const double b = walk.b;
  const double d = walk.d();
  const double shell = -std::expm1(-d * lq);
  const double scale = shell * static_cast<double>(n) * walk.alpha * std::expm1(b * lq) / -std::expm1(-(b + d) * lq);
  // Truncation error when shells 1..I are kept and D_i is dropped for i > I.
  auto tail = [&](int last) {
    const double inner = std::exp(-(last + 1) * (b + d) * lq + last * (r + d) * lq) / -std::expm1(-(r + d) * lq);
    const double outer = std::exp((last + 1) * (r - b) * lq) / -std::expm1((r - b) * lq);
    return scale * (inner + outer);
  };
  int last = 1;
  while (tail(last) > tol / 2) {
    if (++last > kMaxTerms) throw ToleranceError("moment series did not reach tolerance");
  }

  StepDifferences diff(walk, n);
  std::vector<double> diffs(static_cast<std::size_t>(last) + 1, 0.0);
  for (int i = 1; i <= last; ++i) diffs[i] = diff(i);

  // W_k = sum_{i >= k} D_i q^((k - i) d), accumulated from the outside in.
  const double qd = std::exp(-d * lq);
  CompensatedSum moment;
  double w = 0.0;
  for (int k = last; k >= 1; --k) {
    w = diffs[k] + qd * w;
    moment.add(std::exp(k * r * lq) * shell * w);
  }
  return {moment.value(), tail(last) + moment.rounding_bound() * diff.rounding_factor() * last};
}

double moment_constant_c(const WalkParams& walk, double r) {
  const double q = walk.q();
  const double d = walk.d();
  return (std::pow(q, r + d) - std::pow(q, r)) / (std::pow(q, r + d) - 1.0);
}

double moment_bound_constant(const WalkParams& walk, double r) {
  if (!(r > 0.0) || !(r < walk.b)) throw DomainError("moment exponent must lie in (0, b)");
  const double q = walk.q();
  const double b = walk.b;
  const double d = walk.d();
  return 2.0 * moment_constant_c(walk, r) *
         (std::pow(walk.alpha, r / b) * std::pow(q, b) * std::tgamma((b - r) / b) + (std::pow(q, r) - std::pow(q, -d)));
}

}  // namespace ultradiffuse
