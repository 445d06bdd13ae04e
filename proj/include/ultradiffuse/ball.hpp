#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "ultradiffuse/field_element.hpp"
#include "ultradiffuse/group_element.hpp"

namespace ultradiffuse {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// Ball {h in G : ||h - center|| <= q^log_radius}; log_radius 0 is {center}.
struct GroupBall {
  GroupElement center;
  int log_radius = 0;

  bool contains(const GroupElement& g) const;
  /// Number of elements, q^(log_radius * d).
  double size() const;
};

/// Ball center + B_d(log_radius) in K^d, or all of K^d.
struct FieldBall {
  FieldVector center;
  int log_radius = 0;
  bool whole_space = false;

  static FieldBall at_origin(const FieldParamsPtr& params, int log_radius);
  static FieldBall everything(const FieldParamsPtr& params);

  const FieldParamsPtr& params_ptr() const { return center.front().params_ptr(); }
  bool contains(const FieldVector& x) const;
  bool contains_origin() const;
};

/// Two balls in an ultrametric space either nest or are disjoint.
std::optional<GroupBall> intersect(const GroupBall& a, const GroupBall& b);
std::optional<FieldBall> intersect(const FieldBall& a, const FieldBall& b);

/// One representative per coset of B_G(resolution) inside the ball. The
/// representatives keep the center's digits outside the ball's free range
/// and are zero at indices >= -resolution. Requires 0 <= resolution <= log_radius.
std::vector<GroupElement> enumerate_coset_reps(const GroupBall& ball, int resolution,
                                               std::size_t cap = kDefaultEnumerationCap);

/// Same for K^d with resolution <= log_radius (any sign). The center must be
/// known at indices below -resolution.
std::vector<FieldVector> enumerate_coset_reps(const FieldBall& ball, int resolution,
                                              std::size_t cap = kDefaultEnumerationCap);

/// Count q^((log_radius - resolution) d), throwing CapExceeded above the cap.
std::size_t coset_count(const FieldParams& params, int log_radius, int resolution, std::size_t cap);

}  // namespace ultradiffuse
