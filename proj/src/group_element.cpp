#include "ultradiffuse/group_element.hpp"

#include <algorithm>
#include <cmath>

#include "ultradiffuse/errors.hpp"

namespace ultradiffuse {

GroupElement::GroupElement(FieldParamsPtr params) : params_(std::move(params)) {}

GroupElement GroupElement::from_layers(FieldParamsPtr params, std::vector<ResidueCode> layers) {
  const auto d = static_cast<std::size_t>(params->d());
  if (layers.size() % d != 0) throw InvalidParameters("layer data is not a multiple of d");
  for (auto c : layers) {
    if (c >= params->q()) throw InvalidParameters("digit out of range [0, q)");
  }
  GroupElement g(std::move(params));
  g.layers_ = std::move(layers);
  g.depth_ = static_cast<int>(g.layers_.size() / d);
  g.prune();
  return g;
}

GroupElement GroupElement::from_coordinates(FieldParamsPtr params,
                                            const std::vector<std::vector<ResidueCode>>& coords) {
  const auto d = static_cast<std::size_t>(params->d());
  if (coords.size() != d) throw InvalidParameters("expected d coordinate tails");
  std::size_t depth = 0;
  for (const auto& c : coords) depth = std::max(depth, c.size());
  std::vector<ResidueCode> layers(depth * d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t k = 0; k < coords[j].size(); ++k) layers[k * d + j] = coords[j][k];
  }
  return from_layers(std::move(params), std::move(layers));
}

GroupElement GroupElement::from_point(const FieldVector& x) {
  if (x.empty()) throw InvalidParameters("empty point");
  const auto& params = x.front().params_ptr();
  if (x.size() != static_cast<std::size_t>(params->d())) throw ParameterMismatch("point dimension != d");
  std::vector<std::vector<ResidueCode>> coords(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const FieldElement frac = fractional_part(x[j]);
    if (frac.is_zero()) continue;
    const int v = *frac.valuation();
    coords[j].assign(static_cast<std::size_t>(-v), 0);
    for (int i = v; i < 0; ++i) coords[j][static_cast<std::size_t>(-i - 1)] = frac.digit(i);
  }
  return from_coordinates(params, coords);
}

void GroupElement::prune() {
  const auto d = static_cast<std::size_t>(params_->d());
  while (depth_ > 0) {
    const auto begin = layers_.begin() + static_cast<std::ptrdiff_t>((depth_ - 1) * d);
    if (std::any_of(begin, layers_.end(), [](ResidueCode c) { return c != 0; })) break;
    layers_.erase(begin, layers_.end());
    --depth_;
  }
}

ResidueCode GroupElement::digit(int coord, int index) const {
  if (index >= 0) throw InvalidParameters("group elements have digits at negative indices only");
  const int k = -index - 1;
  if (k >= depth_) return 0;
  return layers_[static_cast<std::size_t>(k) * params_->d() + coord];
}

FieldVector GroupElement::representative() const {
  const int d = params_->d();
  FieldVector out;
  out.reserve(d);
  for (int j = 0; j < d; ++j) {
    std::vector<ResidueCode> digits(depth_);
    // digits[0] sits at index -depth.
    for (int k = 0; k < depth_; ++k) digits[depth_ - 1 - k] = layers_[k * d + j];
    out.push_back(FieldElement::from_digits(params_, -depth_, std::move(digits)));
  }
  return out;
}

bool operator==(const GroupElement& a, const GroupElement& b) {
  return a.depth_ == b.depth_ && a.layers_ == b.layers_ && a.params_->same_as(*b.params_);
}

GroupElement group_add(const GroupElement& a, const GroupElement& b) {
  if (!a.params().same_as(b.params())) throw ParameterMismatch("group elements from different fields");
  const auto& params = a.params();
  const int d = params.d();
  const int depth = std::max(a.depth(), b.depth());
  std::vector<ResidueCode> layers(static_cast<std::size_t>(depth) * d, 0);
  const auto la = a.layers();
  const auto lb = b.layers();
  if (params.family() == Family::CharPLaurent) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      const ResidueCode x = i < la.size() ? la[i] : 0;
      const ResidueCode y = i < lb.size() ? lb[i] : 0;
      layers[i] = params.add(x, y);
    }
  } else {
    // Carries run from the outermost layer toward index -1; the carry out of
    // index -1 lands in O_K and is dropped.
    const std::uint32_t p = params.p();
    for (int j = 0; j < d; ++j) {
      std::uint32_t carry = 0;
      for (int k = depth - 1; k >= 0; --k) {
        const std::size_t i = static_cast<std::size_t>(k) * d + j;
        const std::uint32_t s = (i < la.size() ? la[i] : 0) + (i < lb.size() ? lb[i] : 0) + carry;
        layers[i] = s % p;
        carry = s / p;
      }
    }
  }
  return GroupElement::from_layers(a.params_ptr(), std::move(layers));
}

GroupElement group_neg(const GroupElement& a) {
  const auto& params = a.params();
  const int d = params.d();
  std::vector<ResidueCode> layers(a.layers().begin(), a.layers().end());
  if (params.family() == Family::CharPLaurent) {
    for (auto& c : layers) c = params.neg(c);
  } else {
    // Per coordinate: p^N - value, digitwise from the outermost nonzero digit.
    const std::uint32_t p = params.p();
    for (int j = 0; j < d; ++j) {
      bool seen_nonzero = false;
      for (int k = a.depth() - 1; k >= 0; --k) {
        auto& c = layers[static_cast<std::size_t>(k) * d + j];
        if (!seen_nonzero) {
          if (c != 0) {
            c = p - c;
            seen_nonzero = true;
          }
        } else {
          c = p - 1 - c;
        }
      }
    }
  }
  return GroupElement::from_layers(a.params_ptr(), std::move(layers));
}

GroupElement group_sub(const GroupElement& a, const GroupElement& b) { return group_add(a, group_neg(b)); }

double group_norm(const GroupElement& g) {
  if (g.is_identity()) return 0.0;
  return std::pow(static_cast<double>(g.params().q()), g.depth());
}

int log_distance(const GroupElement& a, const GroupElement& b) {
  if (!a.params().same_as(b.params())) throw ParameterMismatch("group elements from different fields");
  const int d = a.params().d();
  const auto la = a.layers();
  const auto lb = b.layers();
  for (int k = std::max(a.depth(), b.depth()) - 1; k >= 0; --k) {
    for (int j = 0; j < d; ++j) {
      const std::size_t i = static_cast<std::size_t>(k) * d + j;
      const ResidueCode x = i < la.size() ? la[i] : 0;
      const ResidueCode y = i < lb.size() ? lb[i] : 0;
      if (x != y) return k + 1;
    }
  }
  return 0;
}

std::uint64_t index_in_ball(const GroupElement& g, int log_radius) {
  if (g.depth() > log_radius) throw InvalidParameters("element outside the ball");
  const std::uint64_t q = g.params().q();
  std::uint64_t index = 0;
  const auto layers = g.layers();
  for (std::size_t i = layers.size(); i-- > 0;) index = index * q + layers[i];
  return index;
}

GroupElement element_at_index(const FieldParamsPtr& params, std::uint64_t index, int log_radius) {
  const std::size_t count = static_cast<std::size_t>(log_radius) * params->d();
  std::vector<ResidueCode> layers(count);
  for (std::size_t i = 0; i < count; ++i) {
    layers[i] = static_cast<ResidueCode>(index % params->q());
    index /= params->q();
  }
  return GroupElement::from_layers(params, std::move(layers));
}

}  // namespace ultradiffuse
