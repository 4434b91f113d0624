#include <gtest/gtest.h>

#include "polyinc/errors.hpp"
#include "polyinc/polyspace.hpp"
#include "polyinc/random.hpp"

using namespace polyinc;

namespace {

std::vector<FieldElem> pt(std::initializer_list<std::uint32_t> xs) {
  std::vector<FieldElem> out;
  for (auto x : xs) out.push_back(FieldElem{x});
  return out;
}

Poly poly(std::initializer_list<std::uint32_t> xs) { return Poly{pt(xs)}; }

std::vector<PolySpace> star_spaces() {
  std::vector<PolySpace> out;
  out.push_back(make_full_space(FieldCtx::make(2, 1), 1, 2));
  out.push_back(make_full_space(FieldCtx::make(2, 1), 2, 1));
  out.push_back(make_full_space(FieldCtx::make(2, 1), 2, 2));
  out.push_back(make_full_space(FieldCtx::make(3, 1), 1, 2));
  out.push_back(make_full_space(FieldCtx::make(3, 1), 2, 1));
  out.push_back(make_full_space(FieldCtx::make(3, 1), 1, 3));
  out.push_back(make_full_space(FieldCtx::make(2, 2), 1, 2));
  out.push_back(make_full_space(FieldCtx::make(5, 1), 1, 2));
  // Pure power x^3 over GF(5): gcd(3, 4) = 1.
  out.emplace_back(FieldCtx::make(5, 1), MonomialSupport(1, {{0}, {3}}));
  return out;
}

}  // namespace

TEST(Support, FullSpaces) {
  const auto s12 = MonomialSupport::full(1, 2);
  EXPECT_EQ(s12.dim(), 3u);
  EXPECT_EQ(s12.exponents(), (std::vector<Exponent>{{0}, {1}, {2}}));
  const auto s21 = MonomialSupport::full(2, 1);
  EXPECT_EQ(s21.exponents(), (std::vector<Exponent>{{0, 0}, {1, 0}, {0, 1}}));
  EXPECT_EQ(MonomialSupport::full(2, 2).dim(), 6u);
  EXPECT_EQ(MonomialSupport::full(3, 2).dim(), 10u);
  EXPECT_EQ(s12.descriptor(), "full:1,2");
}

TEST(Support, X1ShiftedAndParse) {
  const auto s = MonomialSupport::x1_shifted(2, 2);
  EXPECT_EQ(s.dim(), 3u);
  EXPECT_TRUE(s.index_of({1, 0}).has_value());
  EXPECT_TRUE(s.index_of({2, 0}).has_value());
  EXPECT_TRUE(s.index_of({1, 1}).has_value());
  EXPECT_FALSE(s.index_of({0, 0}).has_value());
  EXPECT_EQ(MonomialSupport::parse("x1-shifted:2,2"), s);
  const auto custom = MonomialSupport::parse(nlohmann::json{{"m", 2}, {"exponents", {{0, 0}, {3, 0}, {0, 1}}}});
  EXPECT_EQ(custom.dim(), 3u);
  EXPECT_THROW(MonomialSupport::parse("bogus:1,2"), ConfigError);
  EXPECT_THROW(MonomialSupport::parse("full:x"), ConfigError);
  EXPECT_THROW(MonomialSupport(1, {{1}, {1}}), ConfigError);
}

TEST(PolySpaceBasics, SizeAndBudget) {
  auto F = FieldCtx::make(3, 1);
  const auto V = make_full_space(F, 1, 3);
  EXPECT_EQ(V.size(), 81u);
  EXPECT_EQ(V.num_points(), 3u);
  Budget tiny;
  tiny.max_elements = 80;
  EXPECT_THROW(make_full_space(F, 1, 3, tiny), SizeLimitError);
  Budget few_points;
  few_points.max_points = 8;
  const auto W = make_full_space(F, 2, 1, few_points);
  EXPECT_THROW(W.num_points(), SizeLimitError);
}

TEST(PolySpaceBasics, EncodeDecodeRoundTrip) {
  const auto V = make_full_space(FieldCtx::make(2, 2), 1, 2);
  for (std::uint64_t i = 0; i < V.size(); ++i) EXPECT_EQ(V.encode(V.decode(i)), i);
  EXPECT_THROW(V.decode(V.size()), ConfigError);
}

TEST(PropertyStar, Examples) {
  for (std::uint32_t q : {2u, 3u, 5u}) {
    const auto V = make_full_space(FieldCtx::make(q, 1), 2, 2);
    const auto star = V.property_star();
    EXPECT_TRUE(star.holds);
    EXPECT_EQ(star.k, (std::vector<std::uint32_t>{1, 1}));
  }
  const PolySpace shifted(FieldCtx::make(3, 1), MonomialSupport::x1_shifted(2, 2));
  EXPECT_FALSE(shifted.property_star().holds);
  EXPECT_EQ(shifted.property_star().reason, "no constant monomial");
  const PolySpace cube(FieldCtx::make(2, 2), MonomialSupport(2, {{0, 0}, {3, 0}, {0, 1}}));
  EXPECT_FALSE(cube.property_star().holds);
  EXPECT_NE(cube.property_star().reason.find("x_1"), std::string::npos);
}

TEST(Evaluate, Examples) {
  const auto V3 = make_full_space(FieldCtx::make(3, 1), 1, 2);
  EXPECT_EQ(V3.evaluate(V3.zero_poly(), pt({2})), FieldElem{0});
  EXPECT_EQ(V3.evaluate(poly({0, 0, 1}), pt({2})), FieldElem{1});  // x^2 at 2

  auto F4 = FieldCtx::make(2, 2);
  const auto V4 = make_full_space(F4, 1, 1);
  const auto t = F4->generator_t();
  // 1 + t x at x = t gives 1 + t^2 = t
  const Poly f{{F4->one(), t}};
  EXPECT_EQ(V4.evaluate(f, std::vector<FieldElem>{t}), t);
}

TEST(CountZeros, Examples) {
  auto F = FieldCtx::make(3, 1);
  const auto V2 = make_full_space(F, 2, 1);
  EXPECT_EQ(V2.count_zeros(V2.zero_poly()), 9u);
  EXPECT_EQ(V2.count_zeros(poly({0, 1, 0})), 3u);  // x1
  const auto V1 = make_full_space(F, 1, 2);
  EXPECT_EQ(V1.count_zeros(poly({1, 0, 1})), 0u);  // x^2 + 1
}

TEST(VanishingCount, Examples) {
  EXPECT_EQ(make_full_space(FieldCtx::make(3, 1), 1, 2).vanishing_count(pt({0})), 9u);
  const PolySpace lin(FieldCtx::make(3, 1), MonomialSupport(1, {{1}}));
  EXPECT_EQ(lin.vanishing_count(pt({0})), 3u);
  EXPECT_EQ(make_full_space(FieldCtx::make(2, 1), 2, 1).vanishing_count(pt({1, 1})), 4u);
}

TEST(Annihilator, Examples) {
  auto F3 = FieldCtx::make(3, 1);
  const auto V = make_full_space(F3, 1, 2);
  EXPECT_EQ(V.annihilator_poly(FieldElem{0}, pt({1})), V.zero_poly());
  EXPECT_EQ(V.annihilator_poly(FieldElem{1}, pt({2})), poly({1, 2, 1}));
  const auto W = make_full_space(FieldCtx::make(5, 1), 2, 1);
  EXPECT_EQ(W.annihilator_poly(FieldElem{2}, pt({1, 3})), poly({2, 2, 1}));
}

TEST(MaxDegree, Examples) {
  EXPECT_EQ(make_full_space(FieldCtx::make(2, 1), 2, 2).max_total_degree(), 2u);
  EXPECT_EQ(PolySpace(FieldCtx::make(2, 2), MonomialSupport(2, {{0, 0}, {3, 0}, {0, 1}}))
                .max_total_degree(),
            3u);
  EXPECT_EQ(PolySpace(FieldCtx::make(2, 1), MonomialSupport(1, {{0}})).max_total_degree(), 0u);
}

TEST(PolySpaceProperties, AnnihilatorInnerProductExhaustive) {
  SeededRng rng(3);
  for (const auto& V : star_spaces()) {
    if (V.size() > 243) continue;
    SCOPED_TRACE(V.describe_name());
    const auto& F = V.field();
    for (int trial = 0; trial < 100; ++trial) {
      const FieldElem C{static_cast<std::uint32_t>(rng.below(V.q()))};
      const auto alpha = V.decode_point(rng.below(V.num_points()), V.m());
      const auto p = V.annihilator_poly(C, alpha);
      for (std::uint64_t i = 0; i < V.size(); ++i) {
        const auto f = V.decode(i);
        ASSERT_EQ(V.inner(p, f), F.mul(C, V.evaluate(f, alpha)));
      }
    }
  }
}

TEST(PolySpaceProperties, VanishingCountUnderStar) {
  for (const auto& V : star_spaces()) {
    SCOPED_TRACE(V.describe_name());
    ASSERT_TRUE(V.property_star().holds);
    for (std::uint64_t a = 0; a < V.num_points(); ++a) {
      EXPECT_EQ(V.vanishing_count(V.decode_point(a, V.m())), V.size() / V.q());
    }
  }
}

TEST(PolySpaceProperties, SchwartzZippel) {
  for (const auto& V : star_spaces()) {
    if (V.size() > 243) continue;
    SCOPED_TRACE(V.describe_name());
    const std::uint64_t bound = V.max_total_degree() * (V.num_points() / V.q());
    for (std::uint64_t i = 1; i < V.size(); ++i) {
      EXPECT_LE(V.count_zeros(V.decode(i)), bound);
    }
  }
}

TEST(PolySpaceProperties, AnnihilatorsDistinctAcrossPoints) {
  for (const auto& V : star_spaces()) {
    SCOPED_TRACE(V.describe_name());
    std::map<std::uint64_t, std::uint64_t> owner;
    for (std::uint64_t a = 0; a < V.num_points(); ++a) {
      const auto alpha = V.decode_point(a, V.m());
      for (std::uint32_t c = 1; c < V.q(); ++c) {
        const auto code = V.encode(V.annihilator_poly(FieldElem{c}, alpha));
        auto [it, fresh] = owner.emplace(code, a);
        EXPECT_TRUE(fresh || it->second == a);
      }
    }
  }
}

TEST(PolySpaceProperties, EvaluationsMatchPointwise) {
  const auto V = make_full_space(FieldCtx::make(3, 1), 2, 2);
  SeededRng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = V.decode(rng.below(V.size()));
    const auto vals = V.evaluations(f);
    for (std::uint64_t a = 0; a < V.num_points(); ++a) {
      ASSERT_EQ(vals[a], V.evaluate(f, V.decode_point(a, V.m())));
    }
  }
}

TEST(PolySpaceProperties, SubIndexMatchesPolySub) {
  const auto V = make_full_space(FieldCtx::make(2, 2), 1, 2);
  for (std::uint64_t a = 0; a < V.size(); a += 5) {
    for (std::uint64_t b = 0; b < V.size(); b += 3) {
      ASSERT_EQ(V.sub_index(a, b), V.encode(V.sub(V.decode(a), V.decode(b))));
    }
  }
}
