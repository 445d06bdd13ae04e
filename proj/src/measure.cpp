#include "ultradiffuse/measure.hpp"

#include <cmath>

namespace ultradiffuse {

double QNorm::value(double q) const { return is_zero() ? 0.0 : std::pow(q, *exponent_); }

Rational q_power(std::uint32_t q, long long e) {
  boost::multiprecision::cpp_int n = boost::multiprecision::pow(boost::multiprecision::cpp_int(q),
                                                               static_cast<unsigned>(e < 0 ? -e : e));
  if (e >= 0) return Rational(n);
  return Rational(boost::multiprecision::cpp_int(1), n);
}

Rational ball_measure(const FieldParams& params, int n) {
  return q_power(params.q(), static_cast<long long>(n) * params.d());
}

Rational sphere_measure(const FieldParams& params, int n) {
  return ball_measure(params, n) * (Rational(1) - q_power(params.q(), -params.d()));
}

Rational char_ball_integral(const FieldParams& params, int n, QNorm norm_y) {
  if (norm_y.at_most(-n)) return ball_measure(params, n);
  return Rational(0);
}

Rational char_sphere_integral(const FieldParams& params, int n, QNorm norm_y) {
  return char_ball_integral(params, n, norm_y) - char_ball_integral(params, n - 1, norm_y);
}

}  // namespace ultradiffuse
