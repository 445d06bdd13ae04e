#pragma once

#include <stdexcept>
#include <string>

namespace ultradiffuse {

/// Operands built from different field parameters were combined.
class ParameterMismatch : public std::invalid_argument {
 public:
  explicit ParameterMismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// Invalid field, walk, or diffusion parameters.
class InvalidParameters : public std::invalid_argument {
 public:
  explicit InvalidParameters(const std::string& what) : std::invalid_argument(what) {}
};

/// A truncated expansion does not carry enough digits for the request.
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

/// An enumeration or step count exceeded its configured cap.
class CapExceeded : public std::runtime_error {
 public:
  explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// A function was evaluated outside its domain (e.g. r >= b, norm_y > 1).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A series could not be truncated within the requested tolerance, or a
/// probability came out negative beyond the rounding slack.
class ToleranceError : public std::runtime_error {
 public:
  explicit ToleranceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ultradiffuse
