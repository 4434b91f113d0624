#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "polyinc/cayley.hpp"
#include "polyinc/errors.hpp"
#include "polyinc/incidence.hpp"
#include "polyinc/random.hpp"

using namespace polyinc;

namespace {

ConnectionFunction random_int_table(const GroupDesc& g, SeededRng& rng, bool hermitian) {
  std::vector<std::int64_t> t(g.order());
  for (auto& v : t) v = static_cast<std::int64_t>(rng.below(11)) - 5;
  if (hermitian) {
    for (GroupElem x = 0; x < g.order(); ++x) t[g.neg(x)] = t[x];
  }
  return ConnectionFunction(g, std::move(t));
}

std::shared_ptr<const PolySpace> space(std::uint32_t p, std::uint32_t s, std::uint32_t m,
                                       std::uint32_t r) {
  return std::make_shared<const PolySpace>(make_full_space(FieldCtx::make(p, s), m, r));
}

}  // namespace

TEST(Characters, Examples) {
  const auto g31 = GroupDesc::vector(3, 1);
  EXPECT_EQ(*character_value(g31, 0, 2).exact, CycInt(3, 1));
  EXPECT_EQ(*character_value(g31, 1, 2).exact, CycInt::root(3, 2));
  const auto g22 = GroupDesc::vector(2, 2);
  // (1,1) encodes as 3, (1,0) as 1.
  EXPECT_EQ(character_value(g22, 3, 1).exact->as_integer(), -1);
  const auto prod = GroupDesc::product({4, 6});
  EXPECT_FALSE(character_value(prod, 5, 7).exact.has_value());
  EXPECT_NEAR(std::abs(character_value(prod, 0, 7).approx - 1.0), 0.0, 1e-12);
}

TEST(Characters, FirstOrthogonalityExhaustive) {
  for (const auto& g : {GroupDesc::vector(2, 4), GroupDesc::vector(3, 3), GroupDesc::vector(5, 2),
                        GroupDesc::vector_over_field(FieldCtx::make(2, 2), 2)}) {
    ASSERT_LE(g.order(), 256u);
    for (GroupElem a = 0; a < g.order(); ++a) {
      for (GroupElem b = 0; b < g.order(); ++b) {
        CycInt sum(g.p());
        for (GroupElem x = 0; x < g.order(); ++x) {
          sum += *character_value(g, a, x).exact * character_value(g, b, x).exact->conj();
        }
        ASSERT_EQ(sum.as_integer(), a == b ? static_cast<std::int64_t>(g.order()) : 0);
      }
    }
  }
}

TEST(Fourier, Examples) {
  const auto g = GroupDesc::vector(2, 1);
  const ConnectionFunction indicator(g, std::vector<std::int64_t>{0, 1});
  EXPECT_EQ(fourier_coefficient(indicator, 1).exact->as_integer(), -1);
  EXPECT_EQ(fourier_coefficient(indicator, 0).exact->as_integer(), 1);

  SeededRng rng(1);
  const auto c = random_int_table(GroupDesc::vector(3, 2), rng, false);
  EXPECT_EQ(fourier_coefficient(c, 0).exact->as_integer(), c.int_total());
}

TEST(Fourier, EigencharactersOfIncidenceFunction) {
  const auto V = space(3, 1, 1, 2);
  const auto c = incidence_connection(*V);
  for (std::uint32_t cc = 1; cc < 3; ++cc) {
    for (std::uint64_t a = 0; a < V->num_points(); ++a) {
      const auto p = V->annihilator_poly(FieldElem{cc}, V->decode_point(a, 1));
      EXPECT_EQ(fourier_coefficient(c, V->encode(p)).exact->as_integer(), 9);
    }
  }
}

TEST(Spectrum, ConstantFunction) {
  const ConnectionFunction c(GroupDesc::vector(2, 2), std::vector<std::int64_t>(4, 1));
  const auto rep = spectrum(c);
  ASSERT_TRUE(rep.exact);
  ASSERT_EQ(rep.classes.size(), 2u);
  EXPECT_EQ(rep.classes[0].value.exact->as_integer(), 4);
  EXPECT_EQ(rep.classes[0].multiplicity, 1u);
  EXPECT_EQ(rep.classes[1].value.exact->as_integer(), 0);
  EXPECT_EQ(rep.classes[1].multiplicity, 3u);
  EXPECT_DOUBLE_EQ(rep.lambda, 0.0);
}

TEST(Spectrum, IncidenceGraphV12OverGF3) {
  const auto rep = spectrum(incidence_connection(*space(3, 1, 1, 2)));
  ASSERT_EQ(rep.classes.size(), 3u);
  EXPECT_EQ(rep.classes[0].value.exact->as_integer(), 27);
  EXPECT_EQ(rep.classes[0].multiplicity, 1u);
  EXPECT_EQ(rep.classes[1].value.exact->as_integer(), 9);
  EXPECT_EQ(rep.classes[1].multiplicity, 6u);
  EXPECT_EQ(rep.classes[2].value.exact->as_integer(), 0);
  EXPECT_EQ(rep.classes[2].multiplicity, 20u);
  EXPECT_DOUBLE_EQ(rep.lambda, 9.0);
}

TEST(Spectrum, SymmetricIndicatorIsRealAndMatchesEigencheck) {
  // Ordinary Cayley graph of Z_3^2 with generators +-(1,0), +-(0,1).
  const auto g = GroupDesc::vector(3, 2);
  std::vector<std::int64_t> t(9, 0);
  t[1] = t[2] = t[3] = t[6] = 1;
  const ConnectionFunction c(g, t);
  ASSERT_TRUE(c.hermitian());
  const auto rep = spectrum(c);
  for (GroupElem x = 0; x < g.order(); ++x) {
    EXPECT_TRUE(rep.coefficients[x].exact->as_integer().has_value());
    EXPECT_TRUE(oracle_eigencheck(c, x));
  }
}

TEST(Spectrum, HermitianTablesHaveRealSpectrum) {
  SeededRng rng(2);
  for (const auto& g : {GroupDesc::vector(3, 3), GroupDesc::vector(5, 2), GroupDesc::vector(7, 1)}) {
    const auto c = random_int_table(g, rng, true);
    ASSERT_TRUE(c.hermitian());
    for (const auto& v : spectrum(c).coefficients) {
      EXPECT_EQ(*v.exact, v.exact->conj());
    }
  }
}

TEST(Spectrum, MultiplicitiesSumToOrderAndTrivialIsRowSum) {
  SeededRng rng(3);
  for (const auto& g : {GroupDesc::vector(2, 5), GroupDesc::vector(3, 3)}) {
    const auto c = random_int_table(g, rng, false);
    const auto rep = spectrum(c);
    std::uint64_t total = 0;
    for (const auto& cls : rep.classes) total += cls.multiplicity;
    EXPECT_EQ(total, g.order());
    EXPECT_EQ(rep.trivial().exact->as_integer(), c.int_total());
  }
}

TEST(Spectrum, ParsevalExact) {
  SeededRng rng(4);
  for (const auto& g : {GroupDesc::vector(3, 6), GroupDesc::vector(2, 8), GroupDesc::vector(5, 3)}) {
    ASSERT_LE(g.order(), 729u);
    const auto c = random_int_table(g, rng, false);
    const auto coeffs = fourier_transform_fast(c);
    // Single |c^(chi)|^2 terms are real but not rational; their sum is.
    CycInt lhs(g.p());
    for (const auto& z : coeffs) lhs += z * z.conj();
    std::int64_t sq = 0;
    for (auto v : c.int_values()) sq += v * v;
    EXPECT_EQ(lhs.as_integer(), static_cast<std::int64_t>(g.order()) * sq);
  }
}

TEST(Spectrum, ParsevalNumericProductGroup) {
  SeededRng rng(5);
  const auto g = GroupDesc::product({4, 6});
  std::vector<std::complex<double>> t(g.order());
  for (auto& v : t) v = {rng.unit() - 0.5, rng.unit() - 0.5};
  const ConnectionFunction c(g, t);
  const auto coeffs = fourier_transform_naive(c);
  double lhs = 0, sq = 0;
  for (const auto& z : coeffs) lhs += std::norm(z.approx);
  for (const auto& v : t) sq += std::norm(v);
  EXPECT_NEAR(lhs, 24.0 * sq, 1e-6 * 24.0 * sq);
}

TEST(Spectrum, NaiveAgreesWithFast) {
  SeededRng rng(6);
  for (const auto& g : {GroupDesc::vector(2, 6), GroupDesc::vector(3, 4), GroupDesc::vector(5, 2),
                        GroupDesc::vector_over_field(FieldCtx::make(2, 2), 3),
                        GroupDesc::vector_over_field(FieldCtx::make(3, 2), 2)}) {
    const auto c = random_int_table(g, rng, false);
    const auto naive = fourier_transform_naive(c);
    const auto fast = fourier_transform_fast(c);
    ASSERT_EQ(naive.size(), fast.size());
    for (std::size_t i = 0; i < fast.size(); ++i) ASSERT_EQ(*naive[i].exact, fast[i]);
  }
}

TEST(Spectrum, FastRejectsProductGroups) {
  const ConnectionFunction c(GroupDesc::product({4, 6}), std::vector<std::int64_t>(24, 1));
  EXPECT_THROW(fourier_transform_fast(c), Error);
}

TEST(Spectrum, NaiveBudget) {
  const ConnectionFunction c(GroupDesc::vector(2, 6), std::vector<std::int64_t>(64, 1));
  SpectrumOptions opts;
  opts.max_naive_order = 32;
  EXPECT_THROW(spectrum(c, opts), SizeLimitError);
  opts.method = TransformMethod::fast;
  EXPECT_NO_THROW(spectrum(c, opts));
}

TEST(Spectrum, ProductGroupClustering) {
  // c = indicator of {+-1} on Z_4 x Z_6 first factor: eigenvalues 2cos(2 pi k / 4).
  const auto g = GroupDesc::product({4, 6});
  std::vector<std::int64_t> t(24, 0);
  t[1] = t[3] = 1;
  const auto rep = spectrum(ConnectionFunction(g, t));
  EXPECT_FALSE(rep.exact);
  ASSERT_EQ(rep.classes.size(), 3u);
  EXPECT_NEAR(rep.classes[0].value.approx.real(), 2.0, 1e-9);
  EXPECT_EQ(rep.classes[0].multiplicity, 6u);
  EXPECT_EQ(rep.classes[1].multiplicity, 12u);
  EXPECT_EQ(rep.classes[2].multiplicity, 6u);
}

TEST(EdgeWeight, Examples) {
  const auto g = GroupDesc::vector(2, 1);
  const ConnectionFunction c(g, std::vector<std::int64_t>{2, 1});
  const std::vector<GroupElem> zero{0}, one{1}, both{0, 1};
  EXPECT_EQ(edge_weight_exact(c, zero, zero), 2);
  EXPECT_EQ(edge_weight_exact(c, both, zero), 3);
  EXPECT_EQ(edge_weight_exact(c, both, one), 3);
  EXPECT_NEAR(edge_weight(c, both, one).real(), 3.0, 1e-12);
}

TEST(MixingBound, Examples) {
  const auto c = incidence_connection(*space(3, 1, 1, 2));
  const auto mb = mixing_bound(c, 9.0, 9, 9);
  EXPECT_NEAR(mb.main_term.real(), 81.0, 1e-9);
  EXPECT_NEAR(mb.error_term, 54.0, 1e-9);
  EXPECT_DOUBLE_EQ(mixing_bound(c, 9.0, 27, 5).error_term, 0.0);
  const auto empty = mixing_bound(c, 9.0, 0, 5);
  EXPECT_DOUBLE_EQ(std::abs(empty.main_term), 0.0);
  EXPECT_DOUBLE_EQ(empty.error_term, 0.0);
}

TEST(MixingBound, RandomPairsHold) {
  const auto c = incidence_connection(*space(3, 1, 1, 2));
  const auto rep = spectrum(c);
  SeededRng rng(8);
  std::vector<GroupElem> all(27);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_TRUE(verify_mixing(c, rep, all, all).holds);
  for (int t = 0; t < 100; ++t) {
    const auto S = rng.sample(27, rng.between(0, 27));
    const auto T = rng.sample(27, rng.between(0, 27));
    EXPECT_TRUE(verify_mixing(c, rep, S, T).holds);
  }
}

TEST(MixingBound, SingletonTMatchesMeanDeviation) {
  // T = {0}: |sum_{x in S} c(x) - mean(c)|S|| <= lambda sqrt(|S|(1-|S|/|G|)(1-1/|G|)).
  const auto c = incidence_connection(*space(2, 1, 2, 1));
  const auto rep = spectrum(c);
  const double n = 8.0;
  const std::vector<GroupElem> T{0};
  SeededRng rng(9);
  for (int t = 0; t < 50; ++t) {
    const auto S = rng.sample(8, rng.between(1, 8));
    double sum = 0;
    for (auto x : S) sum += static_cast<double>(c.int_value(x));
    const double dev = std::abs(sum - c.int_total() * S.size() / n);
    const double sz = static_cast<double>(S.size());
    EXPECT_LE(dev, rep.lambda * std::sqrt(sz * (1 - sz / n) * (1 - 1 / n)) + 1e-9);
    EXPECT_TRUE(verify_mixing(c, rep, S, T).holds);
  }
}

TEST(Variance, Examples) {
  EXPECT_DOUBLE_EQ(variance_lower_bound(ConnectionFunction(GroupDesc::vector(3, 2),
                                                           std::vector<std::int64_t>(9, 4))),
                   0.0);
  struct Case { std::uint32_t p, m, r; };
  for (const auto cs : {Case{2, 1, 2}, Case{3, 1, 2}, Case{2, 2, 1}, Case{3, 2, 1}, Case{5, 1, 1}}) {
    const auto V = space(cs.p, 1, cs.m, cs.r);
    const auto c = incidence_connection(*V);
    const double q = cs.p;
    const double expected = std::pow(q, (V->dim() + cs.m - 2) / 2.0) * std::sqrt(q - 1);
    EXPECT_NEAR(variance_lower_bound(c), expected, 1e-9 * expected);
    EXPECT_GE(spectrum(c).lambda + 1e-9, variance_lower_bound(c));
  }
}

TEST(Variance, BoundHoldsOnRandomHermitianTables) {
  SeededRng rng(10);
  for (int t = 0; t < 20; ++t) {
    const auto c = random_int_table(GroupDesc::vector(3, 3), rng, true);
    EXPECT_GE(spectrum(c).lambda + 1e-9, variance_lower_bound(c));
  }
}

TEST(Eigencheck, Examples) {
  SeededRng rng(11);
  const auto c = random_int_table(GroupDesc::vector(3, 1), rng, false);
  EXPECT_TRUE(oracle_eigencheck(c, 0));
  EXPECT_TRUE(oracle_eigencheck(c, 1));
  const auto inc = incidence_connection(*space(3, 1, 1, 2));
  for (GroupElem g = 0; g < 27; ++g) EXPECT_TRUE(oracle_eigencheck(inc, g));
}

TEST(Connection, HermitianFlagAndJson) {
  const auto g = GroupDesc::vector(3, 1);
  EXPECT_TRUE(ConnectionFunction(g, std::vector<std::int64_t>{1, 2, 2}).hermitian());
  EXPECT_FALSE(ConnectionFunction(g, std::vector<std::int64_t>{1, 2, 3}).hermitian());
  EXPECT_THROW(ConnectionFunction(g, std::vector<std::int64_t>{1, 2}), ConfigError);
  const auto parsed = ConnectionFunction::from_json(nlohmann::json{{"kind", "vector"}, {"p", 3}, {"n", 1}},
                                                    nlohmann::json{1, 2, 2});
  EXPECT_TRUE(parsed.is_exact());
  EXPECT_EQ(parsed.int_total(), 5);
  const auto prod = GroupDesc::from_json(nlohmann::json{{"kind", "product"}, {"orders", {4, 6}}});
  EXPECT_EQ(prod.order(), 24u);
  EXPECT_THROW(GroupDesc::from_json(nlohmann::json{{"kind", "torus"}}), ConfigError);
}
