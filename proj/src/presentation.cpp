#include "unipro/presentation.hpp"

#include <algorithm>
#include <sstream>

namespace unipro {

GroupElement ordered_product(const UniformGroup& G, const LieVector& lambda) {
  if (lambda.size() != G.rank()) throw DimensionError("exponent vector has the wrong length");
  GroupElement out = G.identity();
  for (int i = 0; i < G.rank(); ++i) {
    if (lambda(i).is_zero()) continue;
    out = G.mul(out, G.power(G.generator(i), lambda(i)));
  }
  return out;
}

LieVector coords_second_kind(const UniformGroup& G, const GroupElement& g) {
  const int n = G.context().precision();
  const LieVector target = G.log(g);
  // The ordered product agrees with the plain sum modulo brackets, so the
  // residual gains valuation every round.
  LieVector lambda = target;
  for (int iter = 0;; ++iter) {
    if (iter > n + 2) throw ConvergenceError("coordinates of the second kind did not converge");
    const LieVector diff = target - G.log(ordered_product(G, lambda));
    if (min_valuation(diff) >= n) break;
    lambda += diff;
  }
  if (!G.equal(ordered_product(G, lambda), g)) {
    throw ConvergenceError("ordered product does not reproduce the element");
  }
  return lambda;
}

LieVector commutator_exponents(const UniformGroup& G, int i, int j) {
  if (i == j) throw PreconditionError("commutator exponents need two distinct generators");
  return coords_second_kind(G, G.inv(G.commutator(G.generator(i), G.generator(j))));
}

Presentation emit_presentation(const UniformGroup& G) {
  Presentation P;
  P.p = G.context().prime();
  P.precision = G.context().precision();
  if (G.family()) {
    P.generators.push_back("y");
    for (int i = 2; i <= G.rank(); ++i) P.generators.push_back("z" + std::to_string(i));
  } else {
    for (int i = 1; i <= G.rank(); ++i) P.generators.push_back("x" + std::to_string(i));
  }
  for (int i = 0; i < G.rank(); ++i)
    for (int j = i + 1; j < G.rank(); ++j) {
      const GroupElement c = G.commutator(G.generator(i), G.generator(j));
      P.relators.push_back({i, j, coords_second_kind(G, G.inv(c)), coords_second_kind(G, c)});
    }
  return P;
}

Presentation emit_presentation(const PAdicContext& ctx, int m, const PAdic& d) {
  return emit_presentation(UniformGroup::from_family(FamilyParams(ctx, m, d)));
}

namespace {

std::string digits(const PAdic& x, int n) { return to_digit_string(x, n); }

}  // namespace

std::string render_presentation(const Presentation& P) {
  std::ostringstream os;
  os << "# mod p^" << P.precision << ", p = " << P.p << "\n";
  os << "# generators:";
  for (const auto& g : P.generators) os << ' ' << g;
  os << "\n# exponents: little-endian base-p digits d0.d1.d2...\n";
  for (const auto& r : P.relators) {
    os << '[' << P.generators[static_cast<std::size_t>(r.i)] << ", " << P.generators[static_cast<std::size_t>(r.j)]
       << "] =";
    for (std::size_t g = 0; g < P.generators.size(); ++g)
      os << ' ' << P.generators[g] << "^{" << digits(r.equation(static_cast<Eigen::Index>(g)), P.precision) << '}';
    os << '\n';
  }
  return os.str();
}

nlohmann::json presentation_to_json(const Presentation& P) {
  nlohmann::json j;
  j["p"] = P.p;
  j["precision"] = P.precision;
  j["generators"] = P.generators;
  j["relators"] = nlohmann::json::array();
  for (const auto& r : P.relators) {
    nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array(), v = nlohmann::json::array();
    for (Eigen::Index g = 0; g < r.exponents.size(); ++g) {
      a.push_back(digits(r.exponents(g), P.precision));
      b.push_back(digits(r.equation(g), P.precision));
      v.push_back(r.exponents(g).is_zero() ? -1 : r.exponents(g).valuation());
    }
    j["relators"].push_back({{"i", r.i}, {"j", r.j}, {"exponents", a}, {"equation", b}, {"valuations", v}});
  }
  return j;
}

RemarkReport compare_with_remark(const PAdicContext& ctx, const PAdic& d) {
  const UniformGroup G = UniformGroup::from_family(FamilyParams(ctx, 4, d));
  const int n = ctx.precision();
  const PAdic p2 = PAdic::one(ctx).shifted(2);
  const char* names[] = {"y", "z2", "z3", "z4"};
  auto vec = [&](int slot, const PAdic& v) {
    LieVector out = G.algebra().zero();
    if (slot >= 0) out(slot) = v;
    return out;
  };
  struct Relation {
    int i, j;
    LieVector rhs;
  };
  const std::vector<Relation> relations = {
      {1, 0, vec(3, d.in(ctx) * p2)}, {2, 0, vec(2, p2)}, {3, 0, vec(1, p2)},
      {1, 2, vec(-1, p2)},            {1, 3, vec(-1, p2)}, {2, 3, vec(-1, p2)},
  };
  RemarkReport rep;
  rep.leading_order_match = true;
  for (const auto& s : relations) {
    RemarkPair pr;
    pr.lhs = std::string("[") + names[s.i] + ", " + names[s.j] + "]";
    pr.i = s.i;
    pr.j = s.j;
    pr.expected = s.rhs;
    const GroupElement c = G.commutator(G.generator(s.i), G.generator(s.j));
    pr.computed = coords_second_kind(G, c);
    pr.relator = coords_second_kind(G, G.inv(c));
    pr.agreement = std::min(agreement_valuation(pr.computed, pr.expected), n);
    pr.relator_agreement = std::min(agreement_valuation(pr.relator, (-pr.expected).eval()), n);
    if (pr.agreement < rep.threshold || pr.relator_agreement < rep.threshold) rep.leading_order_match = false;
    rep.pairs.push_back(std::move(pr));
  }
  return rep;
}

std::string render_remark_report(const RemarkReport& r) {
  std::ostringstream os;
  for (const auto& pr : r.pairs) {
    os << pr.lhs << ": equation agrees mod p^" << pr.agreement << ", relator agrees mod p^" << pr.relator_agreement
       << (std::min(pr.agreement, pr.relator_agreement) >= r.threshold ? "  ok" : "  MISMATCH") << '\n';
  }
  os << "leading order (mod p^" << r.threshold << "): " << (r.leading_order_match ? "match" : "mismatch") << '\n';
  return os.str();
}

}  // namespace unipro
