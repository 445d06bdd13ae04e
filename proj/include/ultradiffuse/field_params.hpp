#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace ultradiffuse {

enum class Family { CharZeroPadic, CharPLaurent };

/// A residue-field digit packed as sum_k c_k p^k with c_k in [0, p).
using ResidueCode = std::uint32_t;

/// Coefficient-vector view of a residue digit (c_0 first).
struct ResidueElement {
  std::vector<std::uint32_t> coeffs;
  friend bool operator==(const ResidueElement&, const ResidueElement&) = default;
};

/// Parameters of a local field K (Q_p or F_q((t))) and the dimension d of K^d.
///
/// Digits of field and group elements are residue codes in [0, q). For the
/// p-adic family a code is the integer digit itself; for the Laurent family it
/// packs the coefficients of a residue polynomial reduced modulo `modulus`.
class FieldParams {
 public:
  /// Q_p with dimension d.
  static std::shared_ptr<const FieldParams> padic(std::uint32_t p, int d);

  /// F_q((t)) with q = p^f. An empty modulus selects the built-in default
  /// (x^2+x+1 for F_4, x^3+x+1 for F_8, x^2+1 for F_9; x for f = 1).
  /// The modulus lists c_0, ..., c_f and is made monic.
  static std::shared_ptr<const FieldParams> laurent(std::uint32_t p, int f, int d,
                                                    std::vector<std::uint32_t> modulus = {});

  Family family() const { return family_; }
  std::uint32_t p() const { return p_; }
  int f() const { return f_; }
  std::uint32_t q() const { return q_; }
  int d() const { return d_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  /// Same field and dimension.
  bool same_as(const FieldParams& other) const;

  /// Copy with a different dimension (used for scalar sub-problems).
  std::shared_ptr<const FieldParams> with_dimension(int d) const;

  // Residue-field arithmetic on packed codes.
  ResidueCode add(ResidueCode a, ResidueCode b) const;
  ResidueCode sub(ResidueCode a, ResidueCode b) const;
  ResidueCode neg(ResidueCode a) const;
  ResidueCode mul(ResidueCode a, ResidueCode b) const;

  /// First polynomial coefficient; an F_p-linear functional on the residue field.
  std::uint32_t first_coefficient(ResidueCode a) const { return a % p_; }

  ResidueElement decode(ResidueCode a) const;
  ResidueCode encode(const ResidueElement& e) const;

  std::string describe() const;

 private:
  FieldParams() = default;

  Family family_ = Family::CharZeroPadic;
  std::uint32_t p_ = 2;
  int f_ = 1;
  std::uint32_t q_ = 2;
  int d_ = 1;
  std::vector<std::uint32_t> modulus_;
  // mul_table_[a * q + b] for the Laurent family with f > 1.
  std::vector<ResidueCode> mul_table_;
};

using FieldParamsPtr = std::shared_ptr<const FieldParams>;

bool is_prime(std::uint64_t n);

/// Exhaustive irreducibility test over F_p for a polynomial given low-to-high.
bool is_irreducible_mod_p(std::span<const std::uint32_t> poly, std::uint32_t p);

/// Exact integer power; throws InvalidParameters on overflow.
std::uint64_t checked_pow(std::uint64_t base, unsigned exponent);

}  // namespace ultradiffuse
