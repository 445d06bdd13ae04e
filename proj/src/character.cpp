#include "ultradiffuse/character.hpp"

#include <numbers>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {
namespace {

std::complex<double> unit(double turns) { return std::polar(1.0, 2.0 * std::numbers::pi * turns); }

}  // namespace

std::complex<double> character(const FieldElement& x) {
  const FieldElement frac = fractional_part(x);
  if (frac.is_zero()) return {1.0, 0.0};
  const auto& params = x.params();
  if (params.family() == Family::CharPLaurent) {
    return unit(static_cast<double>(params.first_coefficient(frac.digit(-1))) / params.p());
  }
  // Horner from the most negative index: r = (a_{-1} + (a_{-2} + ...)/p)/p.
  const double p = params.p();
  double r = 0.0;
  for (int i = *frac.valuation(); i < 0; ++i) r = (r + frac.digit(i)) / p;
  return unit(r);
}

std::complex<double> character(const GroupElement& g) {
  if (g.params().d() != 1) throw InvalidParameters("scalar character needs d = 1; use pairing()");
  return character(g.representative().front());
}

std::complex<double> pairing(const GroupElement& g, const FieldVector& y) {
  for (const auto& c : y) {
    if (!c.is_zero() && *c.valuation() < 0) throw DomainError("pairing needs y in O_K^d");
  }
  return character(dot(g.representative(), y));
}

}  // namespace ultradiffuse
