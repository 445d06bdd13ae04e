#pragma once

#include <optional>

#include <boost/multiprecision/cpp_int.hpp>

#include "ultradiffuse/field_params.hpp"

namespace ultradiffuse {

using Rational = boost::multiprecision::cpp_rational;

/// A value in {0} U {q^k : k in Z}, stored by its exponent.
class QNorm {
 public:
  static QNorm zero() { return QNorm{}; }
  static QNorm power(int exponent) { return QNorm{exponent}; }

  bool is_zero() const { return !exponent_; }
  /// Exponent k of q^k; only valid when !is_zero().
  int exponent() const { return *exponent_; }
  double value(double q) const;

  /// norm <= q^k
  bool at_most(int k) const { return is_zero() || *exponent_ <= k; }

  friend bool operator==(const QNorm&, const QNorm&) = default;

 private:
  QNorm() = default;
  explicit QNorm(int e) : exponent_(e) {}
  std::optional<int> exponent_;
};

/// q^e as an exact rational.
Rational q_power(std::uint32_t q, long long e);

/// Haar measure of B_d(n): q^(nd).
Rational ball_measure(const FieldParams& params, int n);

/// Haar measure of S_d(n): q^(nd) (1 - q^-d).
Rational sphere_measure(const FieldParams& params, int n);

/// Integral of chi(x . y) over B_d(n): q^(nd) if ||y|| <= q^-n, else 0.
Rational char_ball_integral(const FieldParams& params, int n, QNorm norm_y);

/// Integral of chi(x . y) over S_d(n), as a difference of ball integrals.
Rational char_sphere_integral(const FieldParams& params, int n, QNorm norm_y);

}  // namespace ultradiffuse
