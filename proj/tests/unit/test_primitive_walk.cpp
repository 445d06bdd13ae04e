#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "ultradiffuse/errors.hpp"
#include "ultradiffuse/primitive_walk.hpp"

namespace ultradiffuse {
namespace {

// Reference values from tests/oracle/oracle.py (mpmath, 50 digits).
constexpr double kPmfN2[] = {0.28571428571428571, 0.035714285714285714, 0.12946428571428571, 0.047433035714285714};
constexpr double kPmfN3[] = {0.057142857142857143, 0.18214285714285714, 0.11183035714285714, 0.054701450892857143};
constexpr double kPmfQ3D2[] = {0.081853954747562307, 0.071664316347917205, 0.0037811314586709629};
constexpr double kCdfN10[] = {0.044198230432383134, 0.087419898364766269, 0.17483884305521613,
                              0.34058273909270298,  0.55578391025433405,  0.73790473487968367};

WalkParams basic() { return WalkParams::make(FieldParams::padic(2, 1), 1.0); }

TEST(WalkParams, AlphaClosedForm) {
  EXPECT_DOUBLE_EQ(basic().alpha, 1.5);
  for (unsigned q : {2u, 3u, 5u}) {
    for (int d : {1, 2, 3}) {
      for (double b : {0.5, 1.0, 2.0, 3.7}) {
        const auto w = WalkParams::make(FieldParams::padic(q, d), b);
        EXPECT_GT(w.alpha - 1.0, 0.0);
        EXPECT_LT(w.alpha - 1.0, 1.0);
        EXPECT_GT(w.alpha / std::pow(q, b), 0.0);
        EXPECT_LT(w.alpha / std::pow(q, b), 1.0);
      }
    }
  }
  EXPECT_THROW(WalkParams::make(FieldParams::padic(2, 1), 0.0), InvalidParameters);
  EXPECT_THROW(WalkParams::make(FieldParams::padic(2, 1), -1.0), InvalidParameters);
}

TEST(Increment, SphereMassesAndPointMasses) {
  const auto w = basic();
  EXPECT_DOUBLE_EQ(increment_sphere_prob(w, 1), 0.5);
  EXPECT_EQ(increment_sphere_prob(w, 0), 0.0);
  EXPECT_EQ(increment_pmf_at(w, GroupElement(w.field)), 0.0);
  EXPECT_DOUBLE_EQ(increment_pmf_at(w, GroupElement::from_coordinates(w.field, {{1}})), 0.5);
  EXPECT_THROW(increment_pmf_at(w, GroupElement(FieldParams::padic(3, 1))), ParameterMismatch);
}

TEST(Increment, LawIsNormalized) {
  for (auto field : {FieldParams::padic(2, 1), FieldParams::padic(3, 2), FieldParams::laurent(2, 2, 1)}) {
    const auto w = WalkParams::make(field, 1.3);
    const RadialLaw law = increment_law(w, 40);
    EXPECT_NEAR(law.stored_mass() + law.tail_bound, 1.0, 1e-12);
    // Point masses over B_G(3) plus the tail.
    double total = 0.0;
    const int radius = 3;
    const auto count = static_cast<std::uint64_t>(std::pow(field->q(), radius * field->d()));
    for (std::uint64_t i = 0; i < count; ++i) total += increment_pmf_at(w, element_at_index(field, i, radius));
    EXPECT_NEAR(total + std::pow(field->q(), -radius * 1.3), 1.0, 1e-12);
  }
  EXPECT_THROW(increment_law(basic(), -1), InvalidParameters);
}

TEST(Increment, SamplerNeverReturnsIdentityAndMatchesShellLaw) {
  const auto w = WalkParams::make(FieldParams::padic(3, 2), 0.8);
  Rng rng(12345);
  constexpr int kDraws = 100000;
  std::map<int, int> shells;
  for (int i = 0; i < kDraws; ++i) {
    const auto g = sample_increment(w, rng);
    ASSERT_FALSE(g.is_identity());
    ++shells[g.depth()];
  }
  for (int k = 1; k <= 3; ++k) {
    const double p = increment_sphere_prob(w, k);
    const double se = std::sqrt(p * (1 - p) / kDraws);
    EXPECT_NEAR(static_cast<double>(shells[k]) / kDraws, p, 4 * se) << "shell " << k;
  }
}

TEST(Increment, RadiusSamplerIsAtLeastOne) {
  const auto w = WalkParams::make(FieldParams::padic(2, 1), 5.0);
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) EXPECT_GE(sample_increment_radius(w, rng), 1);
}

TEST(Sampling, WalksStartAtIdentityAndAreSeedDeterministic) {
  const auto w = basic();
  const WalkPath a = sample_walk(w, 50, 99);
  const WalkPath b = sample_walk(w, 50, 99);
  ASSERT_EQ(a.positions.size(), 51u);
  EXPECT_TRUE(a.positions.front().is_identity());
  EXPECT_EQ(a.positions, b.positions);
  EXPECT_EQ(a.seed, 99u);
  EXPECT_NE(sample_walk(w, 50, 100).positions, a.positions);
  Rng rng(5);
  EXPECT_EQ(sample_positions(w, 0, rng).size(), 1u);
}

TEST(CharFn, ClosedForm) {
  const auto w = basic();
  EXPECT_EQ(charfn(w, QNorm::zero()), 1.0);
  EXPECT_DOUBLE_EQ(charfn(w, QNorm::power(0)), -0.5);
  EXPECT_DOUBLE_EQ(charfn(w, QNorm::power(-1)), 0.25);
  EXPECT_THROW(charfn(w, QNorm::power(1)), DomainError);
}

TEST(CharFn, OracleAgreesWithClosedForm) {
  const auto w = WalkParams::make(FieldParams::padic(3, 2), 0.5);
  const auto o = charfn_oracle_tol(w, QNorm::power(-1), 1e-13);
  EXPECT_NEAR(o.value, charfn(w, QNorm::power(-1)), 1e-10);
  const auto zero = charfn_oracle_tol(w, QNorm::zero(), 1e-13);
  EXPECT_NEAR(zero.value, 1.0, 1e-12);
  // Fixed truncation: the gap is covered by the geometric tail q^(-Mb).
  for (int m : {5, 10, 20}) {
    const auto t = charfn_oracle(basic(), QNorm::power(0), m);
    EXPECT_LE(std::abs(t.value - (-0.5)), std::pow(2.0, -m) + 1e-12);
    EXPECT_GE(t.error_bound + 1e-15, std::abs(t.value - (-0.5)));
  }
  EXPECT_THROW(charfn_oracle(basic(), QNorm::power(1), 10), DomainError);
}

TEST(NStep, MatchesOracleValues) {
  const auto w = basic();
  const auto within_bound = [](const SeriesValue& v, double expected) {
    return std::abs(v.value - expected) <= v.error_bound + 1e-15;
  };
  for (int k = 0; k < 4; ++k) {
    EXPECT_TRUE(within_bound(nstep_pmf_shell(w, 2, k), kPmfN2[k])) << "k=" << k;
    EXPECT_TRUE(within_bound(nstep_pmf_shell(w, 3, k), kPmfN3[k])) << "k=" << k;
    EXPECT_NEAR(nstep_pmf_shell(w, 2, k, 1e-16).value, kPmfN2[k], 1e-14) << "k=" << k;
  }
  const auto w32 = WalkParams::make(FieldParams::padic(3, 2), 1.5);
  for (int k = 0; k < 3; ++k) EXPECT_TRUE(within_bound(nstep_pmf_shell(w32, 2, k), kPmfQ3D2[k]));
  for (int k = 0; k < 6; ++k) EXPECT_TRUE(within_bound(nstep_cdf(w, 10, k), kCdfN10[k]));
}

TEST(NStep, OneStepReproducesIncrement) {
  for (auto field : {FieldParams::padic(2, 1), FieldParams::padic(3, 2), FieldParams::laurent(2, 2, 1)}) {
    const auto w = WalkParams::make(field, 1.7);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(std::pow(field->q(), std::min(3, 6 / field->d()) * field->d()));
         ++i) {
      const auto g = element_at_index(field, i, std::min(3, 6 / field->d()));
      EXPECT_NEAR(nstep_pmf_at(w, 1, g).value, increment_pmf_at(w, g), 1e-10);
    }
  }
}

TEST(NStep, ErrorBoundsCoverRefinedValues) {
  const auto w = WalkParams::make(FieldParams::padic(2, 2), 0.7);
  for (std::uint64_t n : {1ull, 3ull, 40ull}) {
    for (int k = 0; k <= 4; ++k) {
      const auto coarse = nstep_pmf_shell(w, n, k, 1e-6);
      const auto fine = nstep_pmf_shell(w, n, k, 1e-15);
      EXPECT_LE(std::abs(coarse.value - fine.value), coarse.error_bound + 1e-15);
    }
  }
}

TEST(NStep, FourierInversionAgrees) {
  for (auto field : {FieldParams::padic(2, 1), FieldParams::padic(5, 1), FieldParams::laurent(3, 1, 2)}) {
    const auto w = WalkParams::make(field, 1.2);
    for (std::uint64_t n : {1ull, 2ull, 7ull, 100ull}) {
      for (int k = 0; k <= 5; ++k) {
        EXPECT_NEAR(nstep_pmf_fourier(w, n, k).value, nstep_pmf_shell(w, n, k).value, 1e-9)
            << field->describe() << " n=" << n << " k=" << k;
      }
    }
  }
}

TEST(NStep, CdfRoutesAndProperties) {
  const auto w = basic();
  for (int i = 0; i <= 10; ++i) EXPECT_NEAR(nstep_cdf(w, 1, i).value, 1.0 - std::pow(2.0, -i), 1e-13);
  EXPECT_EQ(nstep_cdf(w, 4, -3).value, nstep_cdf(w, 4, 0).value);
  for (std::uint64_t n : {1ull, 5ull, 50ull}) {
    double prev = 0.0;
    for (int k = 0; k <= 30; ++k) {
      const auto f = nstep_cdf(w, n, k);
      EXPECT_GE(f.value, prev - 1e-15);
      EXPECT_NEAR(f.value, nstep_cdf_shells(w, n, k).value, 1e-9);
      prev = f.value;
    }
    EXPECT_NEAR(nstep_cdf(w, n, 80).value, 1.0, 1e-12);
  }
}

TEST(NStep, CdfEqualsCosetSumOfPointMasses) {
  const auto field = FieldParams::padic(3, 2);
  const auto w = WalkParams::make(field, 1.0);
  for (std::uint64_t n : {1ull, 2ull, 6ull}) {
    for (int k = 0; k <= 2; ++k) {
      double sum = 0.0;
      for (const auto& g : enumerate_coset_reps(GroupBall{GroupElement(field), k}, 0)) sum += nstep_pmf_at(w, n, g).value;
      EXPECT_NEAR(sum, nstep_cdf(w, n, k).value, 1e-8);
    }
  }
}

TEST(NStep, LawIsNormalized) {
  const auto w = basic();
  for (std::uint64_t n : {1ull, 2ull, 10ull, 1000ull}) {
    const RadialLaw law = nstep_law(w, n, 60);
    EXPECT_NEAR(law.stored_mass(), 1.0, 1e-9 + n * std::pow(2.0, -60));
    for (double m : law.sphere_mass) EXPECT_GE(m, 0.0);
  }
}

TEST(NStep, LargeStepCountsStayFinite) {
  const auto w = basic();
  for (std::uint64_t n : {853ull, 1706ull, 100000ull, 10000000ull}) {
    const auto p = nstep_pmf_shell(w, n, 3);
    EXPECT_TRUE(std::isfinite(p.value));
    EXPECT_GE(p.value, 0.0);
    EXPECT_TRUE(std::isfinite(moment_exact(w, n, 0.5).value));
  }
}

TEST(NStep, InputValidation) {
  const auto w = basic();
  EXPECT_THROW(nstep_pmf_shell(w, 0, 1), InvalidParameters);
  EXPECT_THROW(nstep_pmf_shell(w, 1, -1), InvalidParameters);
  EXPECT_THROW(nstep_pmf_shell(w, 1, 1, 0.0), InvalidParameters);
  EXPECT_THROW(nstep_law(w, 1, -1), InvalidParameters);
}

TEST(ConvolutionOracle, MatchesExactRationalConvolution) {
  const auto w = basic();
  const auto o2 = nstep_convolution_oracle(w, 2, 6);
  // Exact rational two-fold convolution of the increment truncated to B_G(6).
  EXPECT_NEAR(o2.at(GroupElement(w.field)), 0.28571319580078125, 1e-16);
  EXPECT_NEAR(o2.at(GroupElement::from_coordinates(w.field, {{1}})), 0.03571319580078125, 1e-16);
  EXPECT_NEAR(o2.at(GroupElement::from_coordinates(w.field, {{0, 0, 1}})), 0.04743194580078125, 1e-16);
  EXPECT_NEAR(o2.at(GroupElement(w.field)), nstep_pmf_shell(w, 2, 0).value, 2 * std::pow(2.0, -6));
  EXPECT_GE(o2.total_mass, o2.mass_lower_bound - 1e-15);
  EXPECT_EQ(o2.at(GroupElement::from_coordinates(w.field, {{0, 0, 0, 0, 0, 0, 1}})), 0.0);
}

TEST(ConvolutionOracle, OneStepIsTruncatedIncrementAndLawIsSymmetric) {
  const auto field = FieldParams::padic(3, 1);
  const auto w = WalkParams::make(field, 1.0);
  const auto o1 = nstep_convolution_oracle(w, 1, 4);
  const auto o3 = nstep_convolution_oracle(w, 3, 4);
  for (std::uint64_t i = 0; i < o1.pmf.size(); ++i) {
    const auto g = element_at_index(field, i, 4);
    EXPECT_EQ(o1.pmf[i], increment_pmf_at(w, g));
    EXPECT_NEAR(o3.at(g), o3.at(group_neg(g)), 1e-16);
  }
}

TEST(ConvolutionOracle, SemigroupProperty) {
  const auto field = FieldParams::padic(2, 1);
  const auto w = WalkParams::make(field, 1.0);
  const int m = 8;
  const auto size = static_cast<std::uint64_t>(1) << m;
  std::vector<double> p1(size), p2(size);
  for (std::uint64_t i = 0; i < size; ++i) {
    const auto g = element_at_index(field, i, m);
    p1[i] = nstep_pmf_at(w, 1, g).value;
    p2[i] = nstep_pmf_at(w, 2, g).value;
  }
  const auto p3 = convolve_dense(field, m, p1, p2);
  for (std::uint64_t i = 0; i < size; ++i) {
    EXPECT_NEAR(p3[i], nstep_pmf_at(w, 3, element_at_index(field, i, m)).value, 3 * std::pow(2.0, -m));
  }
}

TEST(ConvolutionOracle, Limits) {
  EXPECT_THROW(nstep_convolution_oracle(basic(), 6, 3), InvalidParameters);
  EXPECT_THROW(nstep_convolution_oracle(basic(), 0, 3), InvalidParameters);
  EXPECT_THROW(nstep_convolution_oracle(basic(), 2, 13), CapExceeded);
  EXPECT_THROW(convolve_dense(basic().field, 2, std::vector<double>(4), std::vector<double>(3)), InvalidParameters);
}

TEST(Moments, OracleValues) {
  const auto w = basic();
  EXPECT_NEAR(moment_exact(w, 1, 0.5).value, std::sqrt(2.0) + 1.0, 1e-11);
  EXPECT_NEAR(moment_exact(w, 5, 0.5).value, 4.5605352885863814, 1e-11);
  const auto w32 = WalkParams::make(FieldParams::padic(3, 2), 2.0);
  EXPECT_NEAR(moment_exact(w32, 7, 1.0).value, 8.3855401446142226, 1e-11);
  const double small = moment_exact(w, 1, 0.01).value;
  EXPECT_GT(small, 0.9);
  EXPECT_LE(small, 1.0 + 0.02);
}

TEST(Moments, SmallExponentTendsToMassOffTheIdentity) {
  // As r -> 0 the moment tends to P(S_n != 0); at n = 1 that is 1.
  const auto w = basic();
  EXPECT_NEAR(moment_exact(w, 1, 1e-6).value, 1.0, 1e-4);
  EXPECT_NEAR(moment_exact(w, 2, 1e-6).value, 1.0 - kPmfN2[0], 1e-4);
}

TEST(Moments, ErrorBoundCoversRefinedValue) {
  const auto w = WalkParams::make(FieldParams::padic(3, 1), 2.0);
  for (std::uint64_t n : {1ull, 17ull, 4000ull}) {
    const auto coarse = moment_exact(w, n, 1.5, 1e-4);
    const auto fine = moment_exact(w, n, 1.5, 1e-13);
    EXPECT_LE(std::abs(coarse.value - fine.value), coarse.error_bound + fine.error_bound);
  }
}

TEST(Moments, NondecreasingAtTheBasicInstance) {
  const auto w = basic();
  double prev = 0.0;
  for (std::uint64_t n = 1; n <= 100; ++n) {
    const auto m = moment_exact(w, n, 0.5);
    EXPECT_GE(m.value, prev - m.error_bound) << "n=" << n;
    prev = m.value;
  }
}

TEST(Moments, CanDecreaseWhenTheIdentityAtomAppears) {
  // P(S_1 = 0) = 0 and P(S_2 = 0) = 2/7.
  const auto w = basic();
  EXPECT_LT(moment_exact(w, 2, 0.25).value, moment_exact(w, 1, 0.25).value);
}

TEST(Moments, BoundHoldsOnASmallGrid) {
  for (unsigned q : {2u, 3u}) {
    for (double b : {0.5, 2.0}) {
      const auto w = WalkParams::make(FieldParams::padic(q, 2), b);
      for (double f : {0.25, 0.5, 0.75}) {
        const double r = f * b;
        const double c = moment_constant_c(w, r);
        EXPECT_GT(c, 0.0);
        EXPECT_LT(c, 1.0);
        const double k = moment_bound_constant(w, r);
        EXPECT_GT(k, 0.0);
        for (std::uint64_t n : {1ull, 2ull, 10ull, 100ull, 1000ull}) {
          EXPECT_LE(moment_exact(w, n, r).value, k * std::pow(static_cast<double>(n), r / b));
        }
      }
    }
  }
}

TEST(Moments, ExponentRange) {
  EXPECT_THROW(moment_exact(basic(), 1, 1.0), DomainError);
  EXPECT_THROW(moment_exact(basic(), 1, 0.0), DomainError);
  EXPECT_THROW(moment_exact(basic(), 0, 0.5), InvalidParameters);
}

TEST(Series, ClampProbability) {
  EXPECT_EQ(clamp_probability(-1e-13), 0.0);
  EXPECT_EQ(clamp_probability(0.25), 0.25);
  EXPECT_THROW(clamp_probability(-1e-6), ToleranceError);
  CompensatedSum s;
  for (int i = 0; i < 10; ++i) s.add(0.1);
  EXPECT_NEAR(s.value(), 1.0, 1e-16);
  EXPECT_GT(s.rounding_bound(), 0.0);
}

}  // namespace
}  // namespace ultradiffuse
