#pragma once

#include <complex>

#include "ultradiffuse/field_element.hpp"
#include "ultradiffuse/group_element.hpp"

namespace ultradiffuse {

/// Rank-0 additive character chi on K.
///
/// Q_p: chi(x) = exp(2 pi i {x}) with {x} the fractional part read as a real
/// number in [0, 1). F_q((t)): chi(x) = exp(2 pi i lambda(a_x(-1)) / p) with
/// lambda the first polynomial coefficient of the residue digit.
std::complex<double> character(const FieldElement& x);

/// chi on G for d = 1 (the character is trivial on O_K, so it factors through G).
std::complex<double> character(const GroupElement& g);

/// Dual pairing <g, y> = chi(x . y) for x = Gamma_0(g) and y in O_K^d.
std::complex<double> pairing(const GroupElement& g, const FieldVector& y);

}  // namespace ultradiffuse
