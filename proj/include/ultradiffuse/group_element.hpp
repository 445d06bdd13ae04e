#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ultradiffuse/field_element.hpp"
#include "ultradiffuse/field_params.hpp"

namespace ultradiffuse {

/// An element of G = (K/O_K)^d: per coordinate a finite tail of digits at
/// indices -N..-1.
///
/// Digits are stored layer-major: layer k holds the d digits at index -(k+1).
/// The canonical form has a nonzero outermost layer, so depth() = N gives
/// ||g|| = q^N; the identity has depth 0 and norm 0.
class GroupElement {
 public:
  /// Identity.
  explicit GroupElement(FieldParamsPtr params);

  /// layers.size() must be a multiple of d; trailing zero layers are pruned.
  static GroupElement from_layers(FieldParamsPtr params, std::vector<ResidueCode> layers);

  /// coords[j][k] is the digit of coordinate j at index -(k+1).
  static GroupElement from_coordinates(FieldParamsPtr params,
                                       const std::vector<std::vector<ResidueCode>>& coords);

  /// The class [x] of a point of K^d.
  static GroupElement from_point(const FieldVector& x);

  const FieldParams& params() const { return *params_; }
  const FieldParamsPtr& params_ptr() const { return params_; }

  int depth() const { return depth_; }
  bool is_identity() const { return depth_ == 0; }

  /// Digit of coordinate j at a negative index; 0 below the stored depth.
  ResidueCode digit(int coord, int index) const;

  std::span<const ResidueCode> layers() const { return layers_; }

  /// The representative Gamma_0(g): digits at negative indices as a point of K^d.
  FieldVector representative() const;

  friend bool operator==(const GroupElement& a, const GroupElement& b);

 private:
  void prune();

  FieldParamsPtr params_;
  int depth_ = 0;
  std::vector<ResidueCode> layers_;
};

GroupElement group_add(const GroupElement& a, const GroupElement& b);
GroupElement group_neg(const GroupElement& a);
GroupElement group_sub(const GroupElement& a, const GroupElement& b);

/// ||g|| = q^depth, identity -> 0.
double group_norm(const GroupElement& g);

/// N with ||a - b|| = q^N; 0 when a == b.
int log_distance(const GroupElement& a, const GroupElement& b);

/// Mixed-radix index of g inside the finite subgroup B_G(M); g must lie in it.
std::uint64_t index_in_ball(const GroupElement& g, int log_radius);

/// Inverse of index_in_ball.
GroupElement element_at_index(const FieldParamsPtr& params, std::uint64_t index, int log_radius);

}  // namespace ultradiffuse
