// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every check uses fixed seeds.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "unipro/bch.hpp"
#include "unipro/family.hpp"
#include "unipro/presentation.hpp"
#include "unipro/subgroup_growth.hpp"

using namespace unipro;
using unipro::testing::random_scalar;
using unipro::testing::random_unit;
using unipro::testing::random_vector;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

int failures = 0;

void run(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && s > limit_s) {
    std::ostringstream os;
    os << "runtime " << s << " s exceeds " << limit_s << " s";
    o.fail(os.str());
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d %-34s %7.2fs  %s\n", o.ok ? "PASS" : "FAIL", id, title, s, o.detail.c_str());
  std::fflush(stdout);
}

std::string where(std::uint32_t p, int k) { return "p=" + std::to_string(p) + " k=" + std::to_string(k); }

std::vector<LieVector> ideal_basis(const LieAlgebraZp& L) {
  std::vector<LieVector> out;
  for (int i = 1; i < L.rank(); ++i) out.push_back(L.basis_vector(i));
  return out;
}

// Truncated free associative algebra on X, Y over Q.
using Poly = std::map<std::string, mpq_class>;

Poly pmul(const Poly& a, const Poly& b, std::size_t deg) {
  Poly out;
  for (const auto& [u, x] : a)
    for (const auto& [v, y] : b)
      if (u.size() + v.size() <= deg) out[u + v] += x * y;
  return out;
}

Poly log_exp_exp(std::size_t deg) {
  auto ex = [deg](char z) {
    Poly e;
    mpq_class f = 1;
    std::string w;
    for (std::size_t i = 0; i <= deg; ++i, w += z) {
      e[w] = 1 / f;
      f *= static_cast<long>(i + 1);
    }
    return e;
  };
  Poly z = pmul(ex('X'), ex('Y'), deg), out, pw;
  z.erase("");
  pw = z;
  for (std::size_t n = 1; n <= deg; ++n) {
    for (const auto& [w, c] : pw) out[w] += mpq_class(n % 2 ? 1 : -1, static_cast<long>(n)) * c;
    pw = pmul(pw, z, deg);
  }
  return out;
}

Poly expand_left_normed(const std::string& word) {
  Poly cur{{std::string(1, word[0]), 1}};
  for (std::size_t i = 1; i < word.size(); ++i) {
    Poly next;
    for (const auto& [w, c] : cur) {
      next[w + word[i]] += c;
      next[word[i] + w] -= c;
    }
    cur = next;
  }
  return cur;
}

UniformGroup family_group(const PAdicContext& ctx, int m, const PAdic& d) {
  return UniformGroup::from_family(FamilyParams(ctx, m, d));
}

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

}  // namespace

int main() {
  std::printf("# criterion                            time    detail\n");

  run(1, "trace/determinant law", 5, [] {
    Outcome o;
    std::mt19937_64 rng(1);
    int n = 0;
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int k = 3; k <= 12; ++k)
        for (int t = 0; t < 50; ++t, ++n) {
          const PAdic d = random_unit(ctx, rng);
          const FamilyParams fp(ctx, k, d);
          const LieAlgebraZp L = build_family(fp);
          const PAdicMatrix A = adjoint_matrix(L, L.basis_vector(0), ideal_basis(L));
          if (!agree_mod(A, family_adjoint(fp), 24)) o.fail("adjoint differs from closed form at " + where(p, k));
          const auto dt = mat_det_trace(A);
          const PAdic expect = ((k - 1) / 2) % 2 ? -d : d;
          if (!agree_mod(dt.trace, PAdic(1), 24)) o.fail("trace != 1 at " + where(p, k));
          if (!agree_mod(dt.det, expect, 24)) o.fail("det != (-1)^floor((k-1)/2) d at " + where(p, k));
        }
    }
    o.detail = o.ok ? std::to_string(n) + " instances exact mod p^24" : o.detail;
    return o;
  });

  run(2, "Jacobi identity", 5, [] {
    Outcome o;
    std::mt19937_64 rng(1);  // same instances as criterion 1
    int n = 0;
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int k = 3; k <= 12; ++k)
        for (int t = 0; t < 50; ++t, ++n) {
          const LieAlgebraZp L = build_family(FamilyParams(ctx, k, random_unit(ctx, rng)));
          if (!jacobi_check(L).ok) o.fail("Jacobi fails at " + where(p, k));
        }
    }
    // Mutation: [e2, e3] = e4 in L_4(1) breaks Jacobi on (x, e2, e3).
    const auto& ctx = PAdicContext::get(5, 24);
    LieAlgebraZp M = build_family(FamilyParams(ctx, 4, PAdic(ctx, 1)));
    M.set_bracket(1, 2, M.basis_vector(3));
    const JacobiReport rep = jacobi_check(M);
    if (rep.ok) {
      o.fail("mutated table passes");
    } else {
      const LieVector a = M.basis_vector(rep.i), b = M.basis_vector(rep.j), c = M.basis_vector(rep.h);
      const LieVector cyc = M.bracket(M.bracket(a, b), c) + M.bracket(M.bracket(b, c), a) + M.bracket(M.bracket(c, a), b);
      if (min_valuation(cyc) >= 24) o.fail("reported triple is not a violation");
    }
    if (o.ok) {
      o.detail = std::to_string(n) + " instances pass; mutation caught at (" + std::to_string(rep.i) + "," +
                 std::to_string(rep.j) + "," + std::to_string(rep.h) + ")";
    }
    return o;
  });

  run(3, "invariant well-definedness", 0, [] {
    Outcome o;
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {3u, 5u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int k = 3; k <= 8; ++k) {
        const PAdic d = random_unit(ctx, rng);
        const LieAlgebraZp L = build_family(FamilyParams(ctx, k, d));
        const PAdic ref = commensurability_invariant(L).recovered_d;
        if (!agree_mod(ref, d, 24)) o.fail("recovered d wrong at " + where(p, k));
        for (int t = 0; t < 100; ++t) {
          LieVector y = random_vector(ctx, k, rng);
          y(0) = random_unit(ctx, rng);  // y = u x + e, e in L'
          if (!agree_mod(commensurability_invariant(L, y).recovered_d, ref, 24))
            o.fail("complement changes the invariant at " + where(p, k));
        }
      }
    }
    if (o.ok) o.detail = "k=3..8, p in {3,5}, 100 complements each: identical mod p^24";
    return o;
  });

  run(4, "separation", 0, [] {
    Outcome o;
    std::mt19937_64 rng(4);
    int sep = 0, same = 0;
    for (int t = 0; t < 200; ++t) {
      const std::uint32_t p = std::vector<std::uint32_t>{3, 5, 7}[t % 3];
      const auto& ctx = PAdicContext::get(p, 24);
      const int k = 3 + t % 6;
      const PAdic d = random_unit(ctx, rng);
      // l = d + p^s u with s spread over 0..23, so some pairs agree deep.
      const int s = static_cast<int>(rng() % 24);
      PAdic l = d + random_unit(ctx, rng).shifted(s);
      if (!l.is_unit()) l = d + PAdic(ctx, 1).shifted(std::max(s, 1));
      if (agree_mod(l, d, 24)) continue;
      if (distinguish(ctx, k, d, l).verdict != Verdict::Separated) o.fail("missed separation at " + where(p, k));
      ++sep;
      if (distinguish(ctx, k, d, d).verdict != Verdict::IndistinguishableAtPrecision) o.fail("d = l separated");
      ++same;
    }
    if (o.ok) o.detail = std::to_string(sep) + " pairs SEPARATED, " + std::to_string(same) + " INDISTINGUISHABLE@p^24";
    return o;
  });

  run(5, "powerfulness", 0, [] {
    Outcome o;
    std::mt19937_64 rng(5);
    int n = 0;
    for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int k = 3; k <= 12; ++k)
        for (int t = 0; t < 3; ++t, ++n) {
          const LieAlgebraZp L = build_family(FamilyParams(ctx, k, random_unit(ctx, rng)));
          if (is_powerful_algebra(L)) o.fail("unscaled algebra powerful at " + where(p, k));
          if (!is_powerful_algebra(scale(L, 2))) o.fail("scaled algebra not powerful at " + where(p, k));
        }
    }
    if (o.ok) o.detail = std::to_string(n) + " (k, p, d): p^2 L powerful, L not";
    return o;
  });

  run(6, "BCH soundness", 60, [] {
    Outcome o;
    // Degree <= 3 Lie terms expand to the associative series exactly.
    const Poly oracle = log_exp_exp(3);
    Poly lie;
    for (const auto& t : bch_coefficients(3).terms)
      for (const auto& [w, c] : expand_left_normed(t.word)) lie[w] += t.coeff * c;
    for (const auto& [w, c] : oracle)
      if (lie[w] != c) o.fail("coefficient of " + w + " differs");
    for (const auto& [w, c] : lie)
      if (oracle.count(w) == 0 && c != 0) o.fail("spurious word " + w);
    std::mt19937_64 rng(6);
    int n = 0;
    for (std::uint32_t p : {3u, 5u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int k = 3; k <= 6; ++k) {
        const BchEngine E(scale(build_family(FamilyParams(ctx, k, random_unit(ctx, rng))), 2));
        for (int t = 0; t < 25; ++t, ++n) {
          const LieVector a = random_vector(ctx, k, rng), b = random_vector(ctx, k, rng), c = random_vector(ctx, k, rng);
          if (!agree_mod(E.eval(E.eval(a, b), c), E.eval(a, E.eval(b, c)), 24)) o.fail("associativity at " + where(p, k));
        }
      }
    }
    if (o.ok) o.detail = "degree<=3 exact in Q; " + std::to_string(n) + " triples associative mod p^24";
    return o;
  });

  run(7, "backend agreement", 60, [] {
    Outcome o;
    std::mt19937_64 rng(7);
    for (std::uint32_t p : {3u, 5u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int m = 3; m <= 5; ++m) {
        const UniformGroup G = family_group(ctx, m, random_unit(ctx, rng));
        for (int t = 0; t < 500; ++t) {
          const GroupElement g = G.element(random_vector(ctx, m, rng)), h = G.element(random_vector(ctx, m, rng));
          if (!G.equal(G.mul(g, h, Backend::Bch), G.mul(g, h, Backend::Split))) o.fail("backends differ at " + where(p, m));
        }
      }
    }
    if (o.ok) o.detail = "500 pairs per (m, p) in {3,4,5} x {3,5}, equal mod p^24";
    return o;
  });

  run(8, "intrinsic limit recovery", 0, [] {
    Outcome o;
    std::mt19937_64 rng(8);
    const auto& ctx = PAdicContext::get(5, 24);
    const PAdic d = random_unit(ctx, rng);
    const UniformGroup G = family_group(ctx, 4, d);
    const LieAlgebraZp L = build_family(FamilyParams(ctx, 4, d));
    const PAdic p2(ctx, 25);
    int worst_sum = 99, worst_bracket = 99;
    for (int t = 0; t < 50; ++t) {
      const GroupElement g = G.element(random_vector(ctx, 4, rng)), h = G.element(random_vector(ctx, 4, rng));
      // Coordinates over the basis of L are p^2 times the scaled ones.
      const LieVector gl = G.log(g) * p2, hl = G.log(h) * p2;
      for (int n = 1; n <= 8; ++n) {
        const int gs = agreement_valuation((G.intrinsic_sum(g, h, n) * p2).eval(), (gl + hl).eval()) - n;
        const int gb = agreement_valuation((G.intrinsic_bracket(g, h, n) * p2).eval(), L.bracket(gl, hl)) - n;
        worst_sum = std::min(worst_sum, gs);
        worst_bracket = std::min(worst_bracket, gb);
        if (gs < 3 || gb < 3) o.fail("gap below n+3 at n=" + std::to_string(n));
      }
    }
    if (o.ok) {
      o.detail = "n=1..8, 50 pairs: min v(sum)-n = " + std::to_string(worst_sum) +
                 ", min v(bracket)-n = " + std::to_string(worst_bracket);
    }
    return o;
  });

  run(9, "uniformity of the lower p-series", 120, [] {
    Outcome o;
    const auto& ctx = PAdicContext::get(3, 24);
    const UniformGroup G = family_group(ctx, 3, PAdic(ctx, 2));
    std::string idx;
    for (int j : {2, 3}) {
      const FiniteQuotient Q(G, j);
      const LowerPSeries s = lower_p_series(Q, j + 1);
      if (!s.all_equal(3) || s.index_exponents.size() != static_cast<std::size_t>(j)) o.fail("index not p^3");
      if (!s.matches_power_image) o.fail("P_{i+1} differs from the p^i-divisible image");
      idx += " j=" + std::to_string(j) + ":";
      for (int e : s.index_exponents) idx += " 3^" + std::to_string(e);
    }
    if (o.ok) o.detail = "indices" + idx;
    return o;
  });

  run(10, "generator/relation counts", 0, [] {
    Outcome o;
    for (std::uint32_t p : {3u, 5u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int m = 3; m <= 6; ++m) {
        const UniformGroup G = family_group(ctx, m, PAdic(ctx, 2));
        const FiniteQuotient Q(G, 2, 300'000'000);  // lazy law: only Phi is enumerated
        if (frattini_rank(Q) != m) o.fail("frattini rank != m at " + where(p, m));
        const Presentation P = emit_presentation(G);
        if (P.relators.size() != static_cast<std::size_t>(m * (m - 1) / 2)) o.fail("relator count at " + where(p, m));
        for (const auto& r : P.relators)
          if (min_valuation(r.exponents) < 1) o.fail("exponent outside pZ_p at " + where(p, m));
      }
    }
    if (o.ok) o.detail = "m=3..6, p in {3,5}: d(G)=m, C(m,2) relators, exponents in pZ_p";
    return o;
  });

  run(11, "remark comparison", 0, [] {
    Outcome o;
    std::string ag;
    for (std::uint32_t p : {3u, 5u, 7u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      const RemarkReport rep = compare_with_remark(ctx, PAdic(ctx, 2));
      if (rep.pairs.size() != 6 || !rep.leading_order_match) o.fail("mismatch at p=" + std::to_string(p));
      if (p == 5)
        for (const auto& pr : rep.pairs) ag += " " + pr.lhs + ":" + std::to_string(pr.relator_agreement);
    }
    if (o.ok) o.detail = "match mod p^3 for p in {3,5,7}; p=5 agreement valuations" + ag;
    return o;
  });

  run(12, "subgroup growth", 600, [] {
    Outcome o;
    std::string got;
    for (auto [p, m] : {std::pair{2u, 3}, {3u, 3}, {3u, 4}}) {
      const auto& ctx = PAdicContext::get(p, 24);
      const GrowthTable t = zeta_coefficients(family_group(ctx, m, PAdic(ctx, 1)), 1);
      const auto& r = t.rows[1];
      const std::uint64_t expect = (ipow(p, m) - 1) / (p - 1);
      if (!r.stabilized || r.a != expect) o.fail("a_p wrong at " + where(p, m));
      if (r.a_normal != r.a) o.fail("a_p normal != a_p at " + where(p, m));
      got += " a_" + std::to_string(p) + "(G_" + std::to_string(m) + ")=" + std::to_string(r.a);
    }
    int quotients = 0;
    for (std::uint32_t p : {2u, 3u, 5u}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int m = 3; m <= 6; ++m)
        for (int j = 1; ipow(p, j * m) <= 729; ++j) {
          const FiniteQuotient Q(family_group(ctx, m, PAdic(ctx, 7)), j);
          const int top = j * m;
          const auto naive = count_subgroups_naive(Q, top);
          const auto layered = count_subgroups(Q, top);
          for (int i = 0; i <= top; ++i)
            if (naive[i].all != layered[i].all || naive[i].normal != layered[i].normal)
              o.fail("layered != naive at " + where(p, m) + " j=" + std::to_string(j));
          ++quotients;
        }
    }
    if (o.ok) o.detail = "stabilized" + got + "; layered = naive on " + std::to_string(quotients) + " quotients";
    return o;
  });

  run(13, "isospectrality probe", 0, [] {
    Outcome o;
    std::mt19937_64 rng(13);
    int compared = 0;
    for (auto [p, m, top] : {std::tuple{2u, 3, 4}, {3u, 3, 3}, {5u, 3, 2}}) {
      const auto& ctx = PAdicContext::get(p, 24);
      for (int t = 0; t < 2; ++t) {
        const PAdic d = random_unit(ctx, rng);
        const PAdic l = d + random_scalar(ctx, rng).shifted(4);
        const UniformGroup Gd = family_group(ctx, m, d), Gl = family_group(ctx, m, l);
        for (int j = 1; j <= top; ++j) {
          const auto a = count_subgroups(FiniteQuotient(Gd, j), 2), b = count_subgroups(FiniteQuotient(Gl, j), 2);
          for (int i = 0; i <= 2; ++i)
            if (a[i].all != b[i].all || a[i].normal != b[i].normal)
              o.fail("tables differ at " + where(p, m) + " level " + std::to_string(j));
          ++compared;
        }
      }
    }
    if (o.ok) o.detail = std::to_string(compared) + " (pair, level) tables equal up to index p^2";
    return o;
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
