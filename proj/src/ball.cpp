#include "ultradiffuse/ball.hpp"

#include <cmath>
#include <string>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {

bool GroupBall::contains(const GroupElement& g) const { return log_distance(g, center) <= log_radius; }

double GroupBall::size() const {
  return std::pow(static_cast<double>(center.params().q()), log_radius * center.params().d());
}

FieldBall FieldBall::at_origin(const FieldParamsPtr& params, int log_radius) {
  return FieldBall{zero_vector(params), log_radius, false};
}

FieldBall FieldBall::everything(const FieldParamsPtr& params) {
  return FieldBall{zero_vector(params), 0, true};
}

bool FieldBall::contains(const FieldVector& x) const {
  if (whole_space) return true;
  const auto diff = first_difference(x, center);
  return !diff || *diff >= -log_radius;
}

bool FieldBall::contains_origin() const {
  if (whole_space) return true;
  const auto n = log_norm(center);
  return !n || *n <= log_radius;
}

std::optional<GroupBall> intersect(const GroupBall& a, const GroupBall& b) {
  const GroupBall& small = a.log_radius <= b.log_radius ? a : b;
  const GroupBall& large = a.log_radius <= b.log_radius ? b : a;
  if (large.contains(small.center)) return small;
  return std::nullopt;
}

std::optional<FieldBall> intersect(const FieldBall& a, const FieldBall& b) {
  if (a.whole_space) return b;
  if (b.whole_space) return a;
  const FieldBall& small = a.log_radius <= b.log_radius ? a : b;
  const FieldBall& large = a.log_radius <= b.log_radius ? b : a;
  if (large.contains(small.center)) return small;
  return std::nullopt;
}

std::size_t coset_count(const FieldParams& params, int log_radius, int resolution, std::size_t cap) {
  if (resolution > log_radius) throw InvalidParameters("resolution finer than the ball is required");
  const double count = std::pow(static_cast<double>(params.q()),
                                static_cast<double>(log_radius - resolution) * params.d());
  if (count > static_cast<double>(cap)) {
    throw CapExceeded("coset enumeration of " + std::to_string(count) + " exceeds cap " +
                      std::to_string(cap));
  }
  return static_cast<std::size_t>(std::llround(count));
}

std::vector<GroupElement> enumerate_coset_reps(const GroupBall& ball, int resolution, std::size_t cap) {
  if (resolution < 0) throw InvalidParameters("group resolution must be >= 0");
  const auto& params = ball.center.params();
  const std::size_t count = coset_count(params, ball.log_radius, resolution, cap);
  const int d = params.d();
  const int depth = std::max(ball.center.depth(), ball.log_radius);

  // Base digits: the center's digits at indices < -log_radius (layers >= log_radius).
  std::vector<ResidueCode> base(static_cast<std::size_t>(depth) * d, 0);
  const auto center = ball.center.layers();
  for (std::size_t i = static_cast<std::size_t>(ball.log_radius) * d; i < center.size(); ++i) base[i] = center[i];

  // Free layers resolution..log_radius-1.
  const std::size_t free_begin = static_cast<std::size_t>(resolution) * d;
  const std::size_t free_count = static_cast<std::size_t>(ball.log_radius - resolution) * d;
  std::vector<GroupElement> reps;
  reps.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    auto layers = base;
    std::size_t c = idx;
    for (std::size_t k = 0; k < free_count; ++k) {
      layers[free_begin + k] = static_cast<ResidueCode>(c % params.q());
      c /= params.q();
    }
    reps.push_back(GroupElement::from_layers(ball.center.params_ptr(), std::move(layers)));
  }
  return reps;
}

std::vector<FieldVector> enumerate_coset_reps(const FieldBall& ball, int resolution, std::size_t cap) {
  if (ball.whole_space) throw CapExceeded("cannot enumerate the whole space");
  const auto& params_ptr = ball.params_ptr();
  const auto& params = *params_ptr;
  const std::size_t count = coset_count(params, ball.log_radius, resolution, cap);
  const int d = params.d();
  const int top = -resolution;         // indices >= top are zero in the representative
  const int free_lo = -ball.log_radius;  // free digits occupy [free_lo, top)

  // Per coordinate: fixed digits below free_lo, starting at `lowest`.
  std::vector<int> lowest(d);
  std::vector<std::vector<ResidueCode>> fixed(d);
  for (int j = 0; j < d; ++j) {
    const FieldElement& c = ball.center[j];
    if (c.precision() < free_lo) throw PrecisionError("ball center not known below the ball radius");
    const int lo = c.is_zero() ? free_lo : std::min(*c.valuation(), free_lo);
    lowest[j] = lo;
    for (int i = lo; i < free_lo; ++i) fixed[j].push_back(c.digit(i));
  }

  const std::size_t width = static_cast<std::size_t>(top - free_lo);
  std::vector<FieldVector> reps;
  reps.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::size_t c = idx;
    FieldVector x;
    x.reserve(d);
    for (int j = 0; j < d; ++j) {
      std::vector<ResidueCode> digits = fixed[j];
      for (std::size_t k = 0; k < width; ++k) {
        digits.push_back(static_cast<ResidueCode>(c % params.q()));
        c /= params.q();
      }
      x.push_back(FieldElement::from_digits(params_ptr, lowest[j], std::move(digits)));
    }
    reps.push_back(std::move(x));
  }
  return reps;
}

}  // namespace ultradiffuse
