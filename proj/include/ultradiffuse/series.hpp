#pragma once

#include <cmath>
#include <limits>

namespace ultradiffuse {

/// A truncated series value with a rigorous bound on |value - exact|
/// (analytic truncation tail plus a floating-point rounding allowance).
struct SeriesValue {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Neumaier compensated summation; also tracks sum |terms| for rounding bounds.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    abs_sum_ += std::abs(x);
    ++count_;
  }
  double value() const { return sum_ + comp_; }
  double abs_sum() const { return abs_sum_; }
  /// Generous bound on accumulated rounding in the terms and the sum.
  double rounding_bound() const {
    return 16.0 * std::numeric_limits<double>::epsilon() * abs_sum_ + std::numeric_limits<double>::denorm_min();
  }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_sum_ = 0.0;
  long long count_ = 0;
};

/// Probabilities may come out as -eps from cancellation; values in
/// [-slack, 0) are reported as 0 and anything lower throws ToleranceError.
double clamp_probability(double value, double slack = 1e-12);

}  // namespace ultradiffuse
