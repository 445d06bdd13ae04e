#include "ultradiffuse/field_params.hpp"

#include <limits>
#include <sstream>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {
namespace {

using Poly = std::vector<std::uint32_t>;

std::uint32_t inverse_mod(std::uint32_t a, std::uint32_t p) {
  // p is prime: a^(p-2).
  std::uint64_t result = 1, base = a % p;
  std::uint64_t e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(result);
}

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic divisor.
Poly poly_mod(Poly a, const Poly& monic, std::uint32_t p) {
  trim(a);
  const std::size_t n = monic.size() - 1;
  while (a.size() > n) {
    const std::uint64_t lead = a.back();
    const std::size_t shift = a.size() - 1 - n;
    for (std::size_t k = 0; k <= n; ++k) {
      const std::uint64_t sub = lead * monic[k] % p;
      a[shift + k] = static_cast<std::uint32_t>((a[shift + k] + p - sub) % p);
    }
    trim(a);
  }
  return a;
}

Poly default_modulus(std::uint32_t p, int f) {
  if (f == 1) return {0, 1};
  if (p == 2 && f == 2) return {1, 1, 1};
  if (p == 2 && f == 3) return {1, 1, 0, 1};
  if (p == 3 && f == 2) return {1, 0, 1};
  // First monic irreducible in lexicographic order of (c_0, ..., c_{f-1}).
  Poly candidate(f + 1, 0);
  candidate[f] = 1;
  const std::uint64_t count = checked_pow(p, static_cast<unsigned>(f));
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (int k = 0; k < f; ++k) {
      candidate[k] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    if (is_irreducible_mod_p(candidate, p)) return candidate;
  }
  throw InvalidParameters("no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t k = 2; k * k <= n; ++k) {
    if (n % k == 0) return false;
  }
  return true;
}

std::uint64_t checked_pow(std::uint64_t base, unsigned exponent) {
  std::uint64_t result = 1;
  for (unsigned k = 0; k < exponent; ++k) {
    if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
      throw InvalidParameters("integer power overflows 64 bits");
    }
    result *= base;
  }
  return result;
}

bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p) {
  Poly a(poly.begin(), poly.end());
  for (auto& c : a) c %= p;
  trim(a);
  if (a.size() < 2) return false;
  const std::size_t degree = a.size() - 1;
  if (degree == 1) return true;
  // Make monic.
  const std::uint64_t inv = inverse_mod(a.back(), p);
  for (auto& c : a) c = static_cast<std::uint32_t>(c * inv % p);

  // Trial division by every monic polynomial of degree 1..degree/2.
  for (std::size_t k = 1; k <= degree / 2; ++k) {
    const std::uint64_t count = checked_pow(p, static_cast<unsigned>(k));
    Poly divisor(k + 1, 0);
    divisor[k] = 1;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::uint64_t c = code;
      for (std::size_t j = 0; j < k; ++j) {
        divisor[j] = static_cast<std::uint32_t>(c % p);
        c /= p;
      }
      if (poly_mod(a, divisor, p).empty()) return false;
    }
  }
  return true;
}

std::shared_ptr<const FieldParams> FieldParams::padic(std::uint32_t p, int d) {
  if (!is_prime(p)) throw InvalidParameters("p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw InvalidParameters("dimension d must be positive");
  if (p > (1u << 20)) throw InvalidParameters("p too large for digit arithmetic");
  auto params = std::shared_ptr<FieldParams>(new FieldParams());
  params->family_ = Family::CharZeroPadic;
  params->p_ = p;
  params->f_ = 1;
  params->q_ = p;
  params->d_ = d;
  return params;
}

std::shared_ptr<const FieldParams> FieldParams::laurent(std::uint32_t p, int f, int d,
                                                        std::vector<std::uint32_t> modulus) {
  if (!is_prime(p)) throw InvalidParameters("p = " + std::to_string(p) + " is not prime");
  if (f < 1) throw InvalidParameters("residue degree f must be positive");
  if (d < 1) throw InvalidParameters("dimension d must be positive");
  const std::uint64_t q = checked_pow(p, static_cast<unsigned>(f));
  if (q > (1u << 20)) throw InvalidParameters("q = p^f too large for digit arithmetic");

  if (modulus.empty()) modulus = default_modulus(p, f);
  for (auto& c : modulus) c %= p;
  trim(modulus);
  if (modulus.size() != static_cast<std::size_t>(f) + 1) {
    throw InvalidParameters("modulus must have degree exactly f = " + std::to_string(f));
  }
  if (!is_irreducible_mod_p(modulus, p)) {
    throw InvalidParameters("modulus is not irreducible mod " + std::to_string(p));
  }
  const std::uint64_t inv = inverse_mod(modulus.back(), p);
  for (auto& c : modulus) c = static_cast<std::uint32_t>(c * inv % p);

  auto params = std::shared_ptr<FieldParams>(new FieldParams());
  params->family_ = Family::CharPLaurent;
  params->p_ = p;
  params->f_ = f;
  params->q_ = static_cast<std::uint32_t>(q);
  params->d_ = d;
  params->modulus_ = std::move(modulus);

  if (f > 1 && q <= 256) {
    // mul() falls back to polynomial arithmetic while the table is empty.
    std::vector<ResidueCode> table(q * q);
    for (std::uint32_t a = 0; a < q; ++a) {
      for (std::uint32_t b = 0; b < q; ++b) table[a * q + b] = params->mul(a, b);
    }
    params->mul_table_ = std::move(table);
  }
  return params;
}

bool FieldParams::same_as(const FieldParams& other) const {
  return this == &other || (family_ == other.family_ && p_ == other.p_ && f_ == other.f_ &&
                            d_ == other.d_ && modulus_ == other.modulus_);
}

std::shared_ptr<const FieldParams> FieldParams::with_dimension(int d) const {
  if (d < 1) throw InvalidParameters("dimension d must be positive");
  auto copy = std::shared_ptr<FieldParams>(new FieldParams(*this));
  copy->d_ = d;
  return copy;
}

ResidueCode FieldParams::add(ResidueCode a, ResidueCode b) const {
  if (f_ == 1) return (a + b) % p_;
  ResidueCode out = 0, scale = 1;
  for (int k = 0; k < f_; ++k) {
    out += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return out;
}

ResidueCode FieldParams::neg(ResidueCode a) const {
  if (f_ == 1) return (p_ - a % p_) % p_;
  ResidueCode out = 0, scale = 1;
  for (int k = 0; k < f_; ++k) {
    out += ((p_ - a % p_) % p_) * scale;
    a /= p_;
    scale *= p_;
  }
  return out;
}

ResidueCode FieldParams::sub(ResidueCode a, ResidueCode b) const { return add(a, neg(b)); }

ResidueCode FieldParams::mul(ResidueCode a, ResidueCode b) const {
  if (f_ == 1) return static_cast<ResidueCode>(std::uint64_t{a} * b % p_);
  if (!mul_table_.empty()) return mul_table_[a * q_ + b];
  const auto x = decode(a).coeffs;
  const auto y = decode(b).coeffs;
  Poly prod(2 * f_ - 1, 0);
  for (int i = 0; i < f_; ++i) {
    for (int j = 0; j < f_; ++j) {
      prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t{x[i]} * y[j]) % p_);
    }
  }
  Poly r = poly_mod(std::move(prod), modulus_, p_);
  r.resize(f_, 0);
  return encode(ResidueElement{r});
}

ResidueElement FieldParams::decode(ResidueCode a) const {
  ResidueElement e;
  e.coeffs.resize(f_);
  for (int k = 0; k < f_; ++k) {
    e.coeffs[k] = a % p_;
    a /= p_;
  }
  return e;
}

ResidueCode FieldParams::encode(const ResidueElement& e) const {
  if (e.coeffs.size() != static_cast<std::size_t>(f_)) {
    throw InvalidParameters("residue element must have f coefficients");
  }
  ResidueCode out = 0, scale = 1;
  for (int k = 0; k < f_; ++k) {
    if (e.coeffs[k] >= p_) throw InvalidParameters("residue coefficient not reduced mod p");
    out += e.coeffs[k] * scale;
    scale *= p_;
  }
  return out;
}

std::string FieldParams::describe() const {
  std::ostringstream os;
  if (family_ == Family::CharZeroPadic) {
    os << "Q_" << p_;
  } else {
    os << "F_" << q_ << "((t))";
  }
  os << "^" << d_;
  return os.str();
}

}  // namespace ultradiffuse
