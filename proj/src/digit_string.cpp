#include "ultradiffuse/digit_string.hpp"

#include <algorithm>
#include <cctype>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {
namespace {

constexpr std::string_view kAlphabet = "0123456789abcdefghijklmnopqrstuvwxyz";

void require_printable(const FieldParams& params) {
  if (params.p() > kAlphabet.size()) throw InvalidParameters("digit strings need p <= 36");
}

void append_digit(std::string& out, const FieldParams& params, ResidueCode code) {
  for (auto c : params.decode(code).coeffs) out.push_back(kAlphabet[c]);
}

std::vector<ResidueCode> parse_digits(const FieldParams& params, std::string_view text) {
  const auto f = static_cast<std::size_t>(params.f());
  if (text.size() % f != 0) {
    throw InvalidParameters("digit block '" + std::string(text) + "' is not a multiple of f characters");
  }
  std::vector<ResidueCode> out;
  for (std::size_t i = 0; i < text.size(); i += f) {
    ResidueElement e;
    for (std::size_t k = 0; k < f; ++k) {
      const char ch = static_cast<char>(std::tolower(static_cast<unsigned char>(text[i + k])));
      const auto pos = kAlphabet.find(ch);
      if (pos == std::string_view::npos || pos >= params.p()) {
        throw InvalidParameters("invalid digit character '" + std::string(1, text[i + k]) + "'");
      }
      e.coeffs.push_back(static_cast<std::uint32_t>(pos));
    }
    out.push_back(params.encode(e));
  }
  return out;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string format_coordinate(const FieldElement& x) {
  if (!x.is_exact()) throw PrecisionError("only exact elements have a digit string");
  const auto& params = x.params();
  if (x.is_zero()) {
    std::string zero;
    append_digit(zero, params, 0);
    return zero;
  }
  const int v = *x.valuation();
  std::string out;
  for (int i = v; i < 0; ++i) append_digit(out, params, x.digit(i));
  if (x.end_index() > 0) {
    out.push_back('.');
    for (int i = 0; i < x.end_index(); ++i) append_digit(out, params, x.digit(i));
  }
  return out;
}

FieldElement parse_coordinate(const FieldParamsPtr& params, std::string_view text) {
  const auto dot_pos = text.find('.');
  const auto frac = parse_digits(*params, text.substr(0, dot_pos));
  std::vector<ResidueCode> digits = frac;
  if (dot_pos != std::string_view::npos) {
    const auto whole = parse_digits(*params, text.substr(dot_pos + 1));
    digits.insert(digits.end(), whole.begin(), whole.end());
  }
  return FieldElement::from_digits(params, -static_cast<int>(frac.size()), std::move(digits));
}

}  // namespace

std::string format_point(const FieldVector& x) {
  if (x.empty()) throw InvalidParameters("empty point");
  require_printable(x.front().params());
  std::string out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j > 0) out.push_back('|');
    out += format_coordinate(x[j]);
  }
  return out;
}

FieldVector parse_point(const FieldParamsPtr& params, std::string_view text) {
  require_printable(*params);
  const auto blocks = split(text, '|');
  if (blocks.size() != static_cast<std::size_t>(params->d())) {
    throw InvalidParameters("point '" + std::string(text) + "' needs " + std::to_string(params->d()) +
                            " coordinate blocks");
  }
  FieldVector x;
  for (auto block : blocks) x.push_back(parse_coordinate(params, block));
  return x;
}

std::string format_group(const GroupElement& g) {
  require_printable(g.params());
  const auto& params = g.params();
  std::string out;
  for (int j = 0; j < params.d(); ++j) {
    if (j > 0) out.push_back('|');
    if (g.depth() == 0) {
      append_digit(out, params, 0);
      continue;
    }
    for (int i = -g.depth(); i < 0; ++i) append_digit(out, params, g.digit(j, i));
  }
  return out;
}

GroupElement parse_group(const FieldParamsPtr& params, std::string_view text) {
  if (text.find('.') != std::string_view::npos) {
    throw InvalidParameters("group elements have no digits at nonnegative indices");
  }
  return GroupElement::from_point(parse_point(params, text));
}

}  // namespace ultradiffuse
