#include "ultradiffuse/field_element.hpp"

#include <algorithm>
#include <cmath>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {
namespace {

void require_same(const FieldParams& a, const FieldParams& b) {
  if (!a.same_as(b)) throw ParameterMismatch("field parameters differ");
}

// Digit lookup that treats unknown indices as zero; callers bound the range.
ResidueCode raw_digit(const FieldElement& x, int index) {
  if (x.is_zero()) return 0;
  const int v = *x.valuation();
  if (index < v || index >= x.end_index()) return 0;
  return x.digits()[index - v];
}

}  // namespace

FieldElement::FieldElement(FieldParamsPtr params) : params_(std::move(params)) {}

FieldElement FieldElement::from_digits(FieldParamsPtr params, int lowest,
                                       std::vector<ResidueCode> digits, int precision) {
  FieldElement x(std::move(params));
  for (auto c : digits) {
    if (c >= x.params_->q()) throw InvalidParameters("digit out of range [0, q)");
  }
  x.valuation_ = lowest;
  x.digits_ = std::move(digits);
  x.precision_ = std::min(precision, kExact);
  if (x.precision_ < kExact) {
    const int keep = std::max(0, x.precision_ - lowest);
    if (static_cast<int>(x.digits_.size()) > keep) x.digits_.resize(keep);
  }
  x.normalize();
  return x;
}

FieldElement FieldElement::monomial(FieldParamsPtr params, ResidueCode code, int index) {
  return from_digits(std::move(params), index, {code});
}

void FieldElement::normalize() {
  auto first = std::find_if(digits_.begin(), digits_.end(), [](ResidueCode c) { return c != 0; });
  valuation_ += static_cast<int>(first - digits_.begin());
  digits_.erase(digits_.begin(), first);
  while (!digits_.empty() && digits_.back() == 0) digits_.pop_back();
  if (digits_.empty()) valuation_ = 0;
}

std::optional<int> FieldElement::valuation() const {
  if (digits_.empty()) return std::nullopt;
  return valuation_;
}

ResidueCode FieldElement::digit(int index) const {
  if (index >= precision_) throw PrecisionError("digit beyond known precision");
  return raw_digit(*this, index);
}

double FieldElement::abs() const {
  if (digits_.empty()) return 0.0;
  return std::pow(static_cast<double>(params_->q()), -valuation_);
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  return a.params_->same_as(*b.params_) && a.precision_ == b.precision_ &&
         a.digits_ == b.digits_ && (a.digits_.empty() || a.valuation_ == b.valuation_);
}

FieldElement field_add(const FieldElement& x, const FieldElement& y) {
  require_same(x.params(), y.params());
  const auto& params = x.params();
  const int precision = std::min(x.precision(), y.precision());
  if (x.is_zero() && x.is_exact()) return y;
  if (y.is_zero() && y.is_exact()) return x;

  const int lo = std::min(x.is_zero() ? precision : *x.valuation(), y.is_zero() ? precision : *y.valuation());
  int hi = std::max(x.is_zero() ? lo : x.end_index(), y.is_zero() ? lo : y.end_index());
  hi = std::min(hi, precision);
  std::vector<ResidueCode> out;
  if (params.family() == Family::CharZeroPadic) {
    const std::uint32_t p = params.p();
    std::uint32_t carry = 0;
    int i = lo;
    for (; i < hi; ++i) {
      const std::uint32_t s = raw_digit(x, i) + raw_digit(y, i) + carry;
      out.push_back(s % p);
      carry = s / p;
    }
    // Exact results keep the final carry; truncated ones drop it past precision.
    while (carry != 0 && i < precision) {
      out.push_back(carry % p);
      carry /= p;
      ++i;
    }
  } else {
    for (int i = lo; i < hi; ++i) out.push_back(params.add(raw_digit(x, i), raw_digit(y, i)));
  }
  return FieldElement::from_digits(x.params_ptr(), lo, std::move(out), precision);
}

FieldElement field_mul(const FieldElement& x, const FieldElement& y) {
  require_same(x.params(), y.params());
  if ((x.is_zero() && !x.is_exact()) || (y.is_zero() && !y.is_exact())) {
    throw PrecisionError("product valuation not determinable: operand is an inexact zero");
  }
  if (x.is_zero() || y.is_zero()) return FieldElement(x.params_ptr());

  const auto& params = x.params();
  const int vx = *x.valuation(), vy = *y.valuation();
  const auto a = x.digits();
  const auto b = y.digits();
  const int rel_x = x.is_exact() ? FieldElement::kExact : x.precision() - vx;
  const int rel_y = y.is_exact() ? FieldElement::kExact : y.precision() - vy;
  const int rel = std::min(rel_x, rel_y);
  const bool exact = rel >= FieldElement::kExact;
  const int precision = exact ? FieldElement::kExact : vx + vy + rel;

  const std::size_t full = a.size() + b.size() - 1;
  const std::size_t len = exact ? full : std::min<std::size_t>(full, static_cast<std::size_t>(rel));
  std::vector<ResidueCode> out;
  if (params.family() == Family::CharZeroPadic) {
    const std::uint64_t p = params.p();
    std::vector<std::uint64_t> acc(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
      for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
        acc[i + j] += std::uint64_t{a[i]} * b[j];
      }
    }
    std::uint64_t carry = 0;
    for (std::size_t k = 0; k < len; ++k) {
      const std::uint64_t s = acc[k] + carry;
      out.push_back(static_cast<ResidueCode>(s % p));
      carry = s / p;
    }
    if (exact) {
      while (carry != 0) {
        out.push_back(static_cast<ResidueCode>(carry % p));
        carry /= p;
      }
    }
  } else {
    out.assign(len, 0);
    for (std::size_t i = 0; i < a.size() && i < len; ++i) {
      for (std::size_t j = 0; j < b.size() && i + j < len; ++j) {
        out[i + j] = params.add(out[i + j], params.mul(a[i], b[j]));
      }
    }
  }
  return FieldElement::from_digits(x.params_ptr(), vx + vy, std::move(out), precision);
}

FieldElement field_neg(const FieldElement& x, int precision) {
  const auto& params = x.params();
  const int prec = std::min(precision, x.precision());
  if (x.is_zero()) return FieldElement::from_digits(x.params_ptr(), 0, {}, prec);
  const int v = *x.valuation();
  std::vector<ResidueCode> out;
  if (params.family() == Family::CharPLaurent) {
    for (auto c : x.digits()) out.push_back(params.neg(c));
    return FieldElement::from_digits(x.params_ptr(), v, std::move(out), x.precision());
  }
  if (prec >= FieldElement::kExact) {
    throw PrecisionError("negation of an exact p-adic element needs a finite precision");
  }
  // -x = (p - a_v) p^v + sum_{i>v} (p - 1 - a_i) p^i.
  const std::uint32_t p = params.p();
  for (int i = v; i < prec; ++i) {
    const ResidueCode a = raw_digit(x, i);
    out.push_back(i == v ? p - a : p - 1 - a);
  }
  return FieldElement::from_digits(x.params_ptr(), v, std::move(out), prec);
}

FieldElement fractional_part(const FieldElement& x) {
  if (x.precision() < 0) throw PrecisionError("digit -1 is unknown");
  if (x.is_zero() || *x.valuation() >= 0) return FieldElement(x.params_ptr());
  const int v = *x.valuation();
  std::vector<ResidueCode> tail;
  for (int i = v; i < 0; ++i) tail.push_back(raw_digit(x, i));
  return FieldElement::from_digits(x.params_ptr(), v, std::move(tail));
}

FieldElement dot(const FieldVector& x, const FieldVector& y) {
  if (x.size() != y.size() || x.empty()) throw ParameterMismatch("dot product dimension mismatch");
  FieldElement acc(x.front().params_ptr());
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_zero() && x[j].is_exact()) continue;
    if (y[j].is_zero() && y[j].is_exact()) continue;
    acc = field_add(acc, field_mul(x[j], y[j]));
  }
  return acc;
}

std::optional<int> first_difference(const FieldElement& x, const FieldElement& y) {
  require_same(x.params(), y.params());
  const int precision = std::min(x.precision(), y.precision());
  const int lo = std::min(x.is_zero() ? precision : *x.valuation(), y.is_zero() ? precision : *y.valuation());
  const int hi = std::min(std::max(x.is_zero() ? lo : x.end_index(), y.is_zero() ? lo : y.end_index()), precision);
  for (int i = lo; i < hi; ++i) {
    if (raw_digit(x, i) != raw_digit(y, i)) return i;
  }
  return std::nullopt;
}

std::optional<int> first_difference(const FieldVector& x, const FieldVector& y) {
  if (x.size() != y.size()) throw ParameterMismatch("vector dimension mismatch");
  std::optional<int> best;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const auto diff = first_difference(x[j], y[j]);
    if (diff && (!best || *diff < *best)) best = diff;
  }
  return best;
}

std::optional<int> log_norm(const FieldVector& x) {
  std::optional<int> best;
  for (const auto& c : x) {
    if (c.is_zero()) continue;
    const int n = -*c.valuation();
    if (!best || n > *best) best = n;
  }
  return best;
}

FieldVector zero_vector(const FieldParamsPtr& params) {
  return FieldVector(static_cast<std::size_t>(params->d()), FieldElement(params));
}

}  // namespace ultradiffuse
