#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "ultradiffuse/ball.hpp"
#include "ultradiffuse/character.hpp"
#include "ultradiffuse/field_element.hpp"
#include "ultradiffuse/measure.hpp"

namespace ultradiffuse::testing {

/// The vector (beta^(-k), 0, ..., 0), of norm q^k.
inline FieldVector vector_of_norm(const FieldParamsPtr& params, int k) {
  FieldVector y = zero_vector(params);
  y[0] = FieldElement::monomial(params, 1, -k);
  return y;
}

/// Integral of chi(x . y) over B_d(n) by summing over cosets of B_d(r), where
/// r = min(n, -log ||y||) makes the integrand constant on every coset.
inline std::complex<double> coset_char_integral(const FieldParamsPtr& params, int n, const FieldVector& y) {
  const auto ly = log_norm(y);
  const int r = ly ? std::min(n, -*ly) : n;
  const double cell = std::pow(static_cast<double>(params->q()), r * params->d());
  std::complex<double> sum = 0.0;
  for (const auto& x : enumerate_coset_reps(FieldBall::at_origin(params, n), r)) {
    sum += character(dot(x, y)) * cell;
  }
  return sum;
}

/// A random group element of depth <= max_depth.
inline GroupElement random_group_element(const FieldParamsPtr& params, int max_depth, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> depth(0, max_depth);
  std::uniform_int_distribution<ResidueCode> digit(0, params->q() - 1);
  std::vector<ResidueCode> layers(static_cast<std::size_t>(depth(rng) * params->d()));
  for (auto& c : layers) c = digit(rng);
  return GroupElement::from_layers(params, std::move(layers));
}

}  // namespace ultradiffuse::testing
