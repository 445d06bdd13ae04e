#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ultradiffuse/field_params.hpp"

namespace ultradiffuse {

/// A truncated expansion x = sum_i a_x(i) beta^i with beta = p (Q_p) or t
/// (F_q((t))). Digits at indices >= precision() are unknown; exact elements
/// (finite expansions) carry precision() == kExact.
///
/// Stored digits run from valuation() upward with a nonzero leading digit and
/// no trailing zeros; known indices past the stored range are zero.
class FieldElement {
 public:
  static constexpr int kExact = std::numeric_limits<int>::max() / 4;

  /// Exact zero.
  explicit FieldElement(FieldParamsPtr params);

  /// Digits for indices lowest, lowest+1, ...; leading/trailing zeros allowed.
  static FieldElement from_digits(FieldParamsPtr params, int lowest, std::vector<ResidueCode> digits,
                                  int precision = kExact);

  /// The single term code * beta^index.
  static FieldElement monomial(FieldParamsPtr params, ResidueCode code, int index);

  const FieldParams& params() const { return *params_; }
  const FieldParamsPtr& params_ptr() const { return params_; }

  /// No known nonzero digit. An inexact zero only says x = 0 mod beta^precision.
  bool is_zero() const { return digits_.empty(); }
  bool is_exact() const { return precision_ >= kExact; }
  int precision() const { return precision_; }

  /// Lowest index with a nonzero digit; nullopt for zero.
  std::optional<int> valuation() const;

  /// Digit at `index`; throws PrecisionError past the known range.
  ResidueCode digit(int index) const;

  /// Stored digits starting at valuation().
  std::span<const ResidueCode> digits() const { return digits_; }

  /// One past the highest stored digit index.
  int end_index() const { return valuation_ + static_cast<int>(digits_.size()); }

  /// |x| = q^(-valuation); 0 for zero.
  double abs() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);

 private:
  void normalize();

  FieldParamsPtr params_;
  int valuation_ = 0;
  std::vector<ResidueCode> digits_;
  int precision_ = kExact;
};

/// A point of K^d.
using FieldVector = std::vector<FieldElement>;

FieldElement field_add(const FieldElement& x, const FieldElement& y);

/// Truncated product; throws PrecisionError when an operand is an inexact
/// zero (the product's valuation is then not determinable).
FieldElement field_mul(const FieldElement& x, const FieldElement& y);

/// Negation. Exact p-adic elements have infinite negative expansions, so the
/// result is truncated at `precision` when the input is exact.
FieldElement field_neg(const FieldElement& x, int precision);

/// The digit tail at negative indices, as an exact element; 0 for x in O_K.
/// Throws PrecisionError if digit -1 is unknown.
FieldElement fractional_part(const FieldElement& x);

/// x . y = x_1 y_1 + ... + x_d y_d.
FieldElement dot(const FieldVector& x, const FieldVector& y);

/// Lowest index at which the digit expansions differ; nullopt if equal over
/// the known range. The valuation of x - y equals this index.
std::optional<int> first_difference(const FieldElement& x, const FieldElement& y);
std::optional<int> first_difference(const FieldVector& x, const FieldVector& y);

/// Max-norm exponent N with ||x|| = q^N; nullopt for the zero vector.
std::optional<int> log_norm(const FieldVector& x);

/// Origin of K^d.
FieldVector zero_vector(const FieldParamsPtr& params);

}  // namespace ultradiffuse
