#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"
#include "unipro/presentation.hpp"

using namespace unipro;
using unipro::testing::random_scalar;
using unipro::testing::random_vector;

namespace {

UniformGroup family_group(const PAdicContext& ctx, int m, long long d) {
  return UniformGroup::from_family(FamilyParams(ctx, m, PAdic(ctx, d)));
}

}  // namespace

TEST(SecondKind, Examples) {
  const auto& ctx = PAdicContext::get(5, 24);
  const auto G = family_group(ctx, 4, 7);
  EXPECT_TRUE(agree_mod(coords_second_kind(G, G.identity()), G.algebra().zero(), 24));
  LieVector e = G.algebra().zero();
  e(1) = PAdic(ctx, 5);
  EXPECT_TRUE(agree_mod(coords_second_kind(G, G.power(G.generator(1), PAdic(ctx, 5))), e, 24));
}

TEST(SecondKind, RoundTrip) {
  std::mt19937_64 rng(1);
  for (std::uint32_t p : {3u, 5u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    const auto G = family_group(ctx, 5, 2);
    for (int t = 0; t < 20; ++t) {
      const GroupElement g = G.element(random_vector(ctx, 5, rng));
      const LieVector lambda = coords_second_kind(G, g);
      EXPECT_TRUE(G.equal(ordered_product(G, lambda), g));
      // Independent oracle: multiply the powers out with the split law.
      GroupElement prod = G.identity(Chart::Split);
      for (int i = 0; i < 5; ++i) prod = G.mul(prod, G.power(G.generator(i), lambda(i)), Backend::Split);
      EXPECT_TRUE(G.equal(prod, g));
    }
  }
}

TEST(Presentation, CountsAndMembership) {
  for (std::uint32_t p : {3u, 5u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    for (int m = 3; m <= 8; ++m) {
      const auto P = emit_presentation(ctx, m, PAdic(ctx, 2));
      EXPECT_EQ(P.relators.size(), static_cast<std::size_t>(m * (m - 1) / 2));
      EXPECT_EQ(P.generators.size(), static_cast<std::size_t>(m));
      for (const auto& r : P.relators) {
        EXPECT_LT(r.i, r.j);
        EXPECT_GE(min_valuation(r.exponents), 2) << "m=" << m;
      }
    }
  }
  const auto& c2 = PAdicContext::get(2, 24);
  for (const auto& r : emit_presentation(c2, 3, PAdic(c2, 3)).relators) EXPECT_GE(min_valuation(r.exponents), 2);
}

TEST(Presentation, RelatorsAreTrivial) {
  const auto& ctx = PAdicContext::get(5, 24);
  const auto G = family_group(ctx, 4, 11);
  const auto P = emit_presentation(G);
  EXPECT_EQ(P.generators, (std::vector<std::string>{"y", "z2", "z3", "z4"}));
  for (const auto& r : P.relators) {
    const GroupElement word = G.mul(G.commutator(G.generator(r.i), G.generator(r.j)), ordered_product(G, r.exponents));
    EXPECT_TRUE(G.equal(word, G.identity()));
    EXPECT_TRUE(G.equal(G.commutator(G.generator(r.i), G.generator(r.j)), ordered_product(G, r.equation)));
  }
}

TEST(Presentation, LeadingOrderLaw) {
  // a(i, j) = -p^2 c(i, j) + O(p^4) with c the structure constants of L_m(d).
  for (std::uint32_t p : {3u, 5u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    for (int m = 3; m <= 6; ++m) {
      const PAdic d(ctx, 2);
      const auto L = build_family(FamilyParams(ctx, m, d));
      const auto P = emit_presentation(ctx, m, d);
      const PAdic p2 = PAdic::one(ctx).shifted(2);
      for (const auto& r : P.relators) {
        const LieVector lead = -(L.basis_bracket(r.i, r.j) * p2);
        EXPECT_GE(agreement_valuation(r.exponents, lead), 4) << "p=" << p << " m=" << m;
      }
    }
  }
}

TEST(Presentation, CommutatorExponents) {
  const auto& ctx = PAdicContext::get(5, 24);
  const PAdic d(ctx, 3);
  const auto G = family_group(ctx, 4, 3);
  // (z_2, y): -d p^2 in the z_4 slot.
  const LieVector a = commutator_exponents(G, 1, 0);
  LieVector expect = G.algebra().zero();
  expect(3) = -d * PAdic(ctx, 25);
  EXPECT_GE(agreement_valuation(a, expect), 3);
  // (z_2, z_3): the ideal is abelian.
  EXPECT_GE(min_valuation(commutator_exponents(G, 1, 2)), 24);
  EXPECT_THROW(commutator_exponents(G, 2, 2), PreconditionError);
}

TEST(Presentation, Rendering) {
  const auto& ctx = PAdicContext::get(5, 6);
  const auto P = emit_presentation(ctx, 3, PAdic(ctx, 1));
  const std::string text = render_presentation(P);
  EXPECT_NE(text.find("# mod p^6, p = 5"), std::string::npos);
  EXPECT_NE(text.find("[y, z2] = "), std::string::npos);
  EXPECT_NE(text.find("[z2, z3] = y^{0} z2^{0} z3^{0}"), std::string::npos);
  // [y, z2] = exp(-[p^2 e_2, p^2 x]) = z3^{-p^2} to leading order: digits 0.0.4...
  const auto line = text.substr(text.find("[y, z2]"));
  EXPECT_NE(line.find("z3^{0.0.4"), std::string::npos) << line;
  const auto j = presentation_to_json(P);
  EXPECT_EQ(j["relators"].size(), 3u);
  EXPECT_EQ(j["generators"][0], "y");
  // Deterministic.
  EXPECT_EQ(render_presentation(emit_presentation(ctx, 3, PAdic(ctx, 1))), text);
}

TEST(Remark, LeadingOrderAgreement) {
  for (std::uint32_t p : {3u, 5u, 7u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    for (long long d : {1LL, 2LL}) {
      const auto rep = compare_with_remark(ctx, PAdic(ctx, d));
      ASSERT_EQ(rep.pairs.size(), 6u);
      EXPECT_TRUE(rep.leading_order_match) << render_remark_report(rep);
      for (const auto& pr : rep.pairs) {
        EXPECT_GE(pr.agreement, 3);
        EXPECT_GE(pr.relator_agreement, 3);
      }
      // The abelian-ideal equations hold exactly.
      for (std::size_t k = 3; k < 6; ++k) EXPECT_EQ(rep.pairs[k].agreement, 24);
    }
  }
}
