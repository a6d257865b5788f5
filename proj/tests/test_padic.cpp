#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "unipro/padic.hpp"
#include "unipro/padic_matrix.hpp"

using namespace unipro;

namespace {

// Extended Euclid over signed 128-bit integers; test-only oracle.
__int128 inverse_mod(__int128 a, __int128 m) {
  __int128 old_r = a % m, r = m, old_s = 1, s = 0;
  if (old_r < 0) old_r += m;
  while (r != 0) {
    const __int128 q = old_r / r;
    std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
    std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
  }
  __int128 res = old_s % m;
  return res < 0 ? res + m : res;
}

// Leibniz expansion over exact integers; independent of det_cofactor.
__int128 leibniz_det(const std::vector<std::vector<long long>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  __int128 total = 0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
    __int128 prod = 1;
    for (int i = 0; i < n; ++i) prod *= a[static_cast<std::size_t>(i)][static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])];
    total += (inversions % 2 ? -prod : prod);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

PAdic from_i128(const PAdicContext& ctx, __int128 v) {
  const __int128 m = static_cast<__int128>(ctx.modulus());
  __int128 r = v % m;
  if (r < 0) r += m;
  return PAdic::from_residue(ctx, static_cast<u128>(r));
}

PAdic random_scalar(const PAdicContext& ctx, std::mt19937_64& rng) {
  const u128 r = ((static_cast<u128>(rng()) << 64) | rng()) % ctx.modulus();
  return PAdic::from_residue(ctx, r);
}

PAdic random_unit(const PAdicContext& ctx, std::mt19937_64& rng) {
  for (;;) {
    PAdic x = random_scalar(ctx, rng);
    if (!x.is_zero() && x.valuation() == 0) return x;
  }
}

}  // namespace

TEST(PAdicScalar, AdditionCarries) {
  const auto& ctx = PAdicContext::get(5, 24);
  const PAdic s = PAdic(ctx, 1) + PAdic(ctx, 4);
  EXPECT_EQ(s.valuation(), 1);
  EXPECT_EQ(s.unit(), 1u);
}

TEST(PAdicScalar, ZeroIsAbsorbing) {
  const auto& ctx = PAdicContext::get(5, 24);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const PAdic z = random_scalar(ctx, rng) * PAdic::zero(ctx);
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.valuation(), kInfiniteValuation);
    EXPECT_EQ(z.unit(), 0u);
  }
}

TEST(PAdicScalar, SmallProductsMatchIntegers) {
  const auto& ctx = PAdicContext::get(5, 4);
  const PAdic prod = PAdic(ctx, 2) * PAdic(ctx, 3);
  EXPECT_EQ(prod.residue(4), 6u);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const long long a = static_cast<long long>(rng() % 25), b = static_cast<long long>(rng() % 25);
    EXPECT_EQ((PAdic(ctx, a) * PAdic(ctx, b)).residue(4), static_cast<u128>((a * b) % 625));
  }
}

TEST(PAdicScalar, ContextMismatchThrows) {
  const PAdic a(PAdicContext::get(5, 24), 3);
  const PAdic b(PAdicContext::get(7, 24), 3);
  EXPECT_THROW(a + b, ContextMismatch);
  EXPECT_THROW(a * PAdic(PAdicContext::get(5, 12), 1), ContextMismatch);
}

TEST(PAdicScalar, LiteralsPromote) {
  const auto& ctx = PAdicContext::get(3, 10);
  const PAdic x = PAdic(ctx, 7) + PAdic(1);
  EXPECT_EQ(x.context(), &ctx);
  EXPECT_EQ(x.residue(10), 8u);
  EXPECT_TRUE((PAdic(0) * PAdic(ctx, 5)).is_zero());
}

TEST(PAdicContext, RejectsBadParameters) {
  EXPECT_THROW(PAdicContext::get(4, 10), PreconditionError);
  EXPECT_THROW(PAdicContext::get(5, 0), PreconditionError);
  EXPECT_THROW(PAdicContext::get(2, 121), PreconditionError);
  EXPECT_EQ(&PAdicContext::get(5, 24), &PAdicContext::get(5, 24));
}

TEST(PAdicScalar, RingAxioms) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    std::mt19937_64 rng(p);
    for (int i = 0; i < 300; ++i) {
      const PAdic a = random_scalar(ctx, rng), b = random_scalar(ctx, rng), c = random_scalar(ctx, rng);
      EXPECT_TRUE(agree_mod((a * b) * c, a * (b * c), 24));
      EXPECT_TRUE(agree_mod((a + b) + c, a + (b + c), 24));
      EXPECT_TRUE(agree_mod(a * (b + c), a * b + a * c, 24));
      EXPECT_TRUE(agree_mod(a - a, PAdic::zero(ctx), 24));
    }
  }
}

TEST(UnitInverse, Examples) {
  const auto& ctx = PAdicContext::get(5, 3);
  EXPECT_EQ(PAdic(ctx, 1).inverse().residue(3), 1u);
  const PAdic inv2 = PAdic(ctx, 2).inverse();
  EXPECT_EQ(inv2.residue(3), static_cast<u128>(inverse_mod(2, 125)));
  EXPECT_EQ(inv2.residue(3), 63u);
  EXPECT_THROW(PAdic::zero(ctx).inverse(), UndefinedInverse);
}

TEST(UnitInverse, NonUnitShiftsValuation) {
  const auto& ctx = PAdicContext::get(5, 6);
  const PAdic x = PAdic(ctx, 5 * 7);
  const PAdic inv = x.inverse();
  EXPECT_EQ(inv.valuation(), -1);
  EXPECT_EQ(inv.unit(), static_cast<u128>(inverse_mod(7, 15625)));
}

TEST(UnitInverse, TwoSidedOnRandomUnits) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    std::mt19937_64 rng(100 + p);
    for (int i = 0; i < 1000; ++i) {
      const PAdic u = random_unit(ctx, rng);
      EXPECT_TRUE(agree_mod(u * u.inverse(), PAdic::one(ctx), 24));
      EXPECT_TRUE(agree_mod(u.inverse() * u, PAdic::one(ctx), 24));
    }
  }
}

TEST(Valuation, Examples) {
  const auto& ctx = PAdicContext::get(3, 24);
  EXPECT_EQ(PAdic::zero(ctx).valuation(), kInfiniteValuation);
  EXPECT_EQ(PAdic(ctx, 9).valuation(), 2);
  // p^2 u + p^5 w, checked against factoring the integer directly.
  for (long long u : {1LL, 2LL, 4LL, 5LL}) {
    for (long long w : {1LL, 2LL, 7LL}) {
      long long n = 9 * u + 243 * w;
      int v = 0;
      while (n % 3 == 0) { n /= 3; ++v; }
      EXPECT_EQ((PAdic(ctx, 9 * u) + PAdic(ctx, 243 * w)).valuation(), v);
      EXPECT_EQ(v, 2);
    }
  }
}

TEST(DivideByPPower, Examples) {
  const auto& ctx = PAdicContext::get(3, 24);
  const PAdic u(ctx, 7);
  EXPECT_TRUE(agree_mod(divide_by_p_power(u.shifted(3), 3, true), u, 24));
  EXPECT_TRUE(divide_by_p_power(PAdic::zero(ctx), 4, true).is_zero());
  const PAdic r = divide_by_p_power(PAdic(ctx, 9 * 7), 1, true);
  EXPECT_TRUE(agree_mod(r * PAdic(ctx, 3), PAdic(ctx, 63), 24));
  EXPECT_TRUE(agree_mod(r, PAdic(ctx, 21), 24));
  EXPECT_THROW(divide_by_p_power(PAdic(ctx, 9), 3, true), PreconditionError);
  EXPECT_EQ(divide_by_p_power(PAdic(ctx, 9), 3).valuation(), -1);
}

TEST(DigitStrings, RoundTrip) {
  const auto& ctx = PAdicContext::get(5, 8);
  const PAdic x = from_digit_string(ctx, "1.2.3");
  EXPECT_EQ(x.residue(8), 1u + 2 * 5 + 3 * 25);
  EXPECT_EQ(to_digit_string(x, 8), "1.2.3");
  EXPECT_EQ(to_digit_string(PAdic(ctx, 25), 8), "0.0.1");
  EXPECT_TRUE(agree_mod(parse_scalar(ctx, "-3"), PAdic(ctx, -3), 8));
  EXPECT_THROW(from_digit_string(ctx, "1.7"), PreconditionError);
  EXPECT_EQ(to_string(PAdic(ctx, -3)), "-3");
}

TEST(DetTrace, Examples) {
  const auto& ctx = PAdicContext::get(5, 24);
  const auto id = mat_det_trace(identity_matrix(ctx, 3));
  EXPECT_TRUE(agree_mod(id.det, PAdic(ctx, 1), 24));
  EXPECT_TRUE(agree_mod(id.trace, PAdic(ctx, 3), 24));
  const PAdic d(ctx, 7);
  PAdicMatrix a3 = zero_matrix(ctx, 2, 2);
  a3 << PAdic::zero(ctx), d, PAdic::one(ctx), PAdic::one(ctx);
  const auto r3 = mat_det_trace(a3);
  EXPECT_TRUE(agree_mod(r3.det, -d, 24));
  EXPECT_TRUE(agree_mod(r3.trace, PAdic::one(ctx), 24));
  PAdicMatrix a4 = zero_matrix(ctx, 3, 3);
  a4(0, 2) = d;
  a4(1, 1) = PAdic::one(ctx);
  a4(2, 0) = PAdic::one(ctx);
  const auto r4 = mat_det_trace(a4);
  EXPECT_TRUE(agree_mod(r4.det, -d, 24));
  EXPECT_TRUE(agree_mod(r4.trace, PAdic::one(ctx), 24));
  EXPECT_THROW(mat_det_trace(zero_matrix(ctx, 2, 3)), DimensionError);
}

TEST(DetTrace, MatchesLeibnizOracle) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    std::mt19937_64 rng(7 * p);
    for (int n = 2; n <= 5; ++n) {
      for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::vector<long long>> ints(static_cast<std::size_t>(n), std::vector<long long>(static_cast<std::size_t>(n)));
        PAdicMatrix m(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            // Mix in multiples of p so pivots are not always units.
            long long v = static_cast<long long>(rng() % 41) - 20;
            if (rng() % 3 == 0) v *= static_cast<long long>(p * p);
            ints[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
            m(i, j) = PAdic(ctx, v);
          }
        const PAdic expect = from_i128(ctx, leibniz_det(ints));
        EXPECT_TRUE(agree_mod(det_elimination(m), expect, 24)) << "p=" << p << " n=" << n;
        EXPECT_TRUE(agree_mod(mat_det_trace(m).det, expect, 24));
      }
    }
  }
}

TEST(MatExp, ZeroGivesIdentity) {
  const auto& ctx = PAdicContext::get(5, 24);
  EXPECT_TRUE(agree_mod(mat_exp(zero_matrix(ctx, 3, 3)), identity_matrix(ctx, 3), 24));
}

TEST(MatExp, ScalarSeriesOracle) {
  const auto& ctx = PAdicContext::get(5, 6);
  PAdicMatrix m(1, 1);
  m(0, 0) = PAdic(ctx, 25);
  // Direct summation mod 5^6: terms k >= 3 have valuation >= 6.
  const __int128 mod = 15625;
  const __int128 expect = (1 + 25 + 625 * inverse_mod(2, mod)) % mod;
  EXPECT_EQ(mat_exp(m)(0, 0).residue(6), static_cast<u128>(expect));
}

TEST(MatExp, RejectsLowValuation) {
  const auto& ctx = PAdicContext::get(3, 24);
  PAdicMatrix m = zero_matrix(ctx, 2, 2);
  m(0, 1) = PAdic(ctx, 3);
  EXPECT_THROW(mat_exp(m), PreconditionError);
}

TEST(MatExp, InverseAndCommutingSums) {
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const auto& ctx = PAdicContext::get(p, 24);
    const PAdic p2(ctx, static_cast<long long>(p * p));
    std::mt19937_64 rng(11 * p);
    for (int trial = 0; trial < 20; ++trial) {
      PAdicMatrix m(3, 3), d1 = zero_matrix(ctx, 3, 3), d2 = zero_matrix(ctx, 3, 3);
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = p2 * random_scalar(ctx, rng);
        d1(i, i) = p2 * random_scalar(ctx, rng);
        d2(i, i) = p2 * random_scalar(ctx, rng);
      }
      const PAdicMatrix prod = mat_exp(m) * mat_exp((-m).eval());
      EXPECT_TRUE(agree_mod(prod, identity_matrix(ctx, 3), 24));
      const PAdicMatrix sum = d1 + d2;
      EXPECT_TRUE(agree_mod(mat_exp(sum), (mat_exp(d1) * mat_exp(d2)).eval(), 24));
    }
  }
}

TEST(SolveInRowSpan, FindsCoordinatesOrRejects) {
  const auto& ctx = PAdicContext::get(5, 24);
  PAdicMatrix basis = zero_matrix(ctx, 2, 3);
  basis(0, 0) = PAdic(ctx, 1);
  basis(0, 2) = PAdic(ctx, 2);
  basis(1, 1) = PAdic(ctx, 5);
  PAdicVector v(3);
  v << PAdic(ctx, 3), PAdic(ctx, 10), PAdic(ctx, 6);
  const auto x = solve_in_row_span(basis, v);
  ASSERT_TRUE(x.has_value());
  EXPECT_TRUE(agree_mod((*x)(0), PAdic(ctx, 3), 24));
  EXPECT_TRUE(agree_mod((*x)(1), PAdic(ctx, 2), 24));
  v(2) = PAdic(ctx, 7);
  EXPECT_FALSE(solve_in_row_span(basis, v).has_value());
}
