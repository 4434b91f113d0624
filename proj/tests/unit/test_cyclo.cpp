#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "polyinc/cyclo.hpp"
#include "polyinc/errors.hpp"
#include "polyinc/random.hpp"

using namespace polyinc;

namespace {

CycInt random_cyc(std::uint32_t p, SeededRng& rng) {
  std::vector<std::int64_t> buckets(p);
  for (auto& b : buckets) b = static_cast<std::int64_t>(rng.below(41)) - 20;
  return CycInt::from_exponent_buckets(p, buckets);
}

/// Galois automorphism zeta -> zeta^k, applied through the exponent buckets.
CycInt galois(const CycInt& z, std::uint32_t k) {
  const std::uint32_t p = z.p();
  CycInt out(p);
  for (std::uint32_t i = 0; i < z.coeffs().size(); ++i) {
    out += CycInt(p, z.coeffs()[i]) * CycInt::root(p, static_cast<std::int64_t>(i) * k);
  }
  return out;
}

}  // namespace

TEST(CycExamples, Roots) {
  EXPECT_EQ(CycInt::root(3, 0).coeffs(), (std::vector<std::int64_t>{1, 0}));
  EXPECT_EQ(CycInt::root(3, 2).coeffs(), (std::vector<std::int64_t>{-1, -1}));
  EXPECT_EQ(CycInt::root(2, 1).as_integer(), -1);
  EXPECT_EQ(CycInt::root(5, -1), CycInt::root(5, 4));
}

TEST(CycExamples, RingOps) {
  EXPECT_EQ((CycInt::root(3, 1) + CycInt::root(3, 2)).as_integer(), -1);
  EXPECT_EQ((CycInt::root(5, 1) * CycInt::root(5, 4)).as_integer(), 1);
  EXPECT_EQ(CycInt::root(3, 1).conj(), CycInt::root(3, 2));
}

TEST(CycExamples, AsInteger) {
  EXPECT_EQ(CycInt::from_canonical(3, {7, 0}).as_integer(), 7);
  EXPECT_FALSE(CycInt::root(3, 1).as_integer().has_value());
  const auto orbit = CycInt::root(3, 0) + CycInt::root(3, 1) + CycInt::root(3, 2);
  EXPECT_EQ((orbit + CycInt(3, 5)).as_integer(), 5);
}

TEST(CycExamples, ComplexView) {
  EXPECT_NEAR(std::abs(CycInt(2, -1).to_complex() - std::complex<double>(-1.0, 0.0)), 0.0, 1e-12);
  const auto z = CycInt::root(3, 1).to_complex();
  EXPECT_NEAR(z.real(), -0.5, 1e-12);
  EXPECT_NEAR(z.imag(), std::sqrt(3.0) / 2.0, 1e-12);
  CycInt orbit(5);
  for (int e = 0; e < 5; ++e) orbit += CycInt::root(5, e);
  EXPECT_NEAR(std::abs(orbit.to_complex()), 0.0, 1e-12);
  EXPECT_TRUE(orbit.is_zero());
}

TEST(CycErrors, MismatchedOrders) {
  EXPECT_THROW(CycInt::root(3, 1) + CycInt::root(5, 1), IncompatibleOrderError);
  EXPECT_THROW(CycInt::root(3, 1) * CycInt::root(5, 1), IncompatibleOrderError);
}

TEST(CycErrors, OverflowIsReported) {
  const auto big = CycInt(3, INT64_MAX / 2 + 10);
  EXPECT_THROW(big + big, OverflowError);
  EXPECT_THROW(big * big, OverflowError);
}

TEST(CycProperties, RingAxiomsRandomTriples) {
  SeededRng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5, 7}[trial % 4];
    const auto a = random_cyc(p, rng), b = random_cyc(p, rng), c = random_cyc(p, rng);
    ASSERT_EQ(a + b, b + a);
    ASSERT_EQ(a * b, b * a);
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ((a * b) * c, a * (b * c));
    ASSERT_EQ(a * (b + c), a * b + a * c);
    ASSERT_EQ(a + (-a), CycInt(p));
    ASSERT_EQ(a * CycInt(p, 1), a);
    ASSERT_EQ(a.conj().conj(), a);
    ASSERT_EQ((a * b).conj(), a.conj() * b.conj());
    const auto za = a.to_complex(), zb = b.to_complex();
    ASSERT_NEAR(std::abs((a * b).to_complex() - za * zb), 0.0, 1e-9 * (1 + std::abs(za * zb)));
  }
}

TEST(CycProperties, NormIsRationalInteger) {
  SeededRng rng(11);
  for (std::uint32_t p : {3u, 5u, 7u}) {
    for (int trial = 0; trial < 50; ++trial) {
      const auto z = random_cyc(p, rng);
      CycInt norm(p, 1);
      for (std::uint32_t k = 1; k < p; ++k) norm = norm * galois(z, k);
      ASSERT_TRUE(norm.as_integer().has_value()) << norm.to_string();
      EXPECT_EQ(galois(z, p - 1), z.conj());
    }
  }
}

TEST(CycProperties, AbsSquaredMatchesProductWithConjugate) {
  SeededRng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint32_t p = std::vector<std::uint32_t>{2, 3, 5, 7}[trial % 4];
    const auto z = random_cyc(p, rng);
    const double lhs = std::norm(z.to_complex());
    const auto rhs = (z * z.conj()).to_complex();
    EXPECT_NEAR(rhs.imag(), 0.0, 1e-9 * (1 + lhs));
    EXPECT_NEAR(rhs.real(), lhs, 1e-9 * (1 + lhs));
  }
}

TEST(CycProperties, AsIntegerAgreesWithNumericView) {
  SeededRng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint32_t p = std::vector<std::uint32_t>{3, 5, 7}[trial % 3];
    std::vector<std::int64_t> buckets(p, 0);
    // Half the samples are integers in disguise: n + k(1 + zeta + ...).
    if (trial % 2 == 0) {
      const std::int64_t k = static_cast<std::int64_t>(rng.below(9)) - 4;
      for (auto& b : buckets) b = k;
      buckets[0] += static_cast<std::int64_t>(rng.below(11)) - 5;
    } else {
      for (auto& b : buckets) b = static_cast<std::int64_t>(rng.below(7)) - 3;
    }
    const auto z = CycInt::from_exponent_buckets(p, buckets);
    const auto c = z.to_complex();
    const bool near_integer =
        std::abs(c.imag()) < 1e-9 && std::abs(c.real() - std::round(c.real())) < 1e-9;
    EXPECT_EQ(z.as_integer().has_value(), near_integer) << z.to_string();
  }
}

TEST(CycProperties, TimesRootIsRotation) {
  SeededRng rng(19);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto z = random_cyc(p, rng);
    for (int k = 0; k < 2 * static_cast<int>(p); ++k) {
      EXPECT_EQ(z.times_root(k), z * CycInt::root(p, k));
    }
  }
}
