#pragma once

#include <string>
#include <string_view>

#include "ultradiffuse/field_element.hpp"
#include "ultradiffuse/group_element.hpp"

namespace ultradiffuse {

// Digit-string grammar for points of K^d and elements of G:
//
//   point  := coord ('|' coord)*          one block per coordinate
//   coord  := frac ['.' whole]
//   frac   := digit*                       indices -len..-1, most negative first
//   whole  := digit*                       indices 0, 1, ... ascending
//   digit  := f characters in base p ('0'-'9', 'a'-'z'), coefficient c_0 first
//
// "0" is zero. Group elements use the frac part only.

std::string format_point(const FieldVector& x);
FieldVector parse_point(const FieldParamsPtr& params, std::string_view text);

std::string format_group(const GroupElement& g);
GroupElement parse_group(const FieldParamsPtr& params, std::string_view text);

}  // namespace ultradiffuse
