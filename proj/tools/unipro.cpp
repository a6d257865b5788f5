// unipro: construct, verify, distinguish, present and count.
//
// Exit codes: 0 success, 1 usage, 2 precondition violation, 3 suite failure,
// 4 budget exceeded.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "unipro/bch.hpp"
#include "unipro/family.hpp"
#include "unipro/io.hpp"
#include "unipro/presentation.hpp"
#include "unipro/subgroup_growth.hpp"

using namespace unipro;

namespace {

enum Exit { kOk = 0, kUsage = 1, kPrecondition = 2, kSuiteFailure = 3, kBudget = 4 };

struct Config {
  std::uint32_t p = 5;
  int prec = 24;
  int k = 4;
  std::string d = "1";
  std::string l = "1";
  bool scaled = false;
  std::string suite = "all";
  int levels = 2;
  int max_index = 2;
  int degree = 6;
  std::uint64_t seed = 42;
  std::string out;
  bool compare_remark = false;
};

const PAdicContext& context(const Config& c) { return PAdicContext::get(c.p, c.prec); }

FamilyParams family(const Config& c) {
  const auto& ctx = context(c);
  FamilyParams fp(ctx, c.k, parse_scalar(ctx, c.d));
  fp.validate();
  return fp;
}

std::string show(const PAdic& x) {
  if (auto v = to_small_integer(x)) {
    std::ostringstream os;
    os << std::showpos << *v;
    return os.str();
  }
  return to_string(x);
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw PreconditionError("cannot write '" + path + "'");
  f << text;
}

int cmd_construct(const Config& c) {
  const FamilyParams fp = family(c);
  LieAlgebraZp L = build_family(fp);
  if (c.scaled) L = scale(L, 2);
  const JacobiReport jac = jacobi_check(L);
  std::cout << (c.scaled ? "p^2 L_" : "L_") << c.k << "(" << show(fp.d) << ") over Z_" << c.p << " mod p^" << c.prec
            << "\n";
  std::cout << "jacobi=" << (jac.ok ? "true" : "false") << "\n";
  std::cout << "powerful=" << (is_powerful_algebra(L) ? "true" : "false") << "\n";
  std::cout << "metabelian=" << (is_metabelian(L) ? "true" : "false") << "\n";
  const auto j = algebra_to_json(L);
  if (c.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    save_json(c.out, j);
    std::cout << "wrote " << c.out << "\n";
  }
  return kOk;
}

int cmd_invariant(const Config& c) {
  const FamilyParams fp = family(c);
  const InvariantValue v = commensurability_invariant(build_family(fp));
  std::cout << "invariant value " << show(v.value) << "\n";
  std::cout << "sign (-1)^" << v.sign_exponent << "\n";
  std::cout << "recovered d " << show(v.recovered_d) << "\n";
  return kOk;
}

int cmd_distinguish(const Config& c) {
  const auto& ctx = context(c);
  const Distinction r = distinguish(ctx, c.k, parse_scalar(ctx, c.d), parse_scalar(ctx, c.l));
  if (r.verdict == Verdict::Separated) {
    std::cout << "SEPARATED\n";
  } else {
    std::cout << "INDISTINGUISHABLE@p^" << r.precision << "\n";
  }
  std::cout << "recovered d " << show(r.first.recovered_d) << "\n";
  std::cout << "recovered l " << show(r.second.recovered_d) << "\n";
  std::cout << "agreement v_p(d - l) >= " << r.agreement << "\n";
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct SuiteResult {
  bool ok = true;
  std::vector<std::string> lines;
  void note(const std::string& s) { lines.push_back(s); }
  void check(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      lines.push_back("failed: " + what);
    }
  }
};

LieVector random_coords(const PAdicContext& ctx, int n, std::mt19937_64& rng) {
  LieVector v(n);
  for (int i = 0; i < n; ++i) v(i) = PAdic::from_residue(ctx, ((static_cast<u128>(rng()) << 64) | rng()) % ctx.modulus());
  return v;
}

SuiteResult suite_jacobi(const Config& c, std::mt19937_64&) {
  SuiteResult r;
  const LieAlgebraZp L = build_family(family(c));
  const JacobiReport a = jacobi_check(L), b = jacobi_check(scale(L, 2));
  r.check(a.ok && b.ok, "Jacobi identity");
  r.check(!is_powerful_algebra(L), "L_k(d) is not powerful");
  r.check(is_powerful_algebra(scale(L, 2)), "p^2 L_k(d) is powerful");
  r.note("jacobi exact on L and p^2 L; powerful(L)=false, powerful(p^2 L)=true");
  return r;
}

SuiteResult suite_backend(const Config& c, std::mt19937_64& rng) {
  SuiteResult r;
  const UniformGroup G = UniformGroup::from_family(family(c));
  int bad = 0;
  for (int t = 0; t < 100; ++t) {
    const auto g = G.element(random_coords(G.context(), G.rank(), rng)), h = G.element(random_coords(G.context(), G.rank(), rng));
    if (!G.equal(G.mul(g, h, Backend::Bch), G.mul(g, h, Backend::Split))) ++bad;
  }
  r.check(bad == 0, std::to_string(bad) + " of 100 pairs differ");
  r.note("bch vs split on 100 pairs: " + std::to_string(100 - bad) + " agree mod p^" + std::to_string(c.prec));
  return r;
}

SuiteResult suite_axioms(const Config& c, std::mt19937_64& rng) {
  SuiteResult r;
  const UniformGroup G = UniformGroup::from_family(family(c));
  int bad = 0;
  for (Backend be : {Backend::Bch, Backend::Split})
    for (int t = 0; t < 20; ++t) {
      const auto a = G.element(random_coords(G.context(), G.rank(), rng));
      const auto b = G.element(random_coords(G.context(), G.rank(), rng));
      const auto e = G.element(random_coords(G.context(), G.rank(), rng));
      if (!G.equal(G.mul(G.mul(a, b, be), e, be), G.mul(a, G.mul(b, e, be), be))) ++bad;
      if (!G.equal(G.mul(a, G.inv(a), be), G.identity())) ++bad;
    }
  r.check(bad == 0, "group axioms in the p-adic group");
  r.note("p-adic group: associativity and inverses on 40 triples");
  int level = c.levels;
  while (level > 1 && std::pow(double(c.p), level * c.k) > double(FiniteQuotient::kDefaultBudget)) --level;
  const FiniteQuotient Q(G, level);
  const AxiomReport ax = check_group_axioms(Q, 20000, c.seed);
  r.check(ax.ok, ax.failure);
  r.note("quotient mod p^" + std::to_string(level) + " (order " + std::to_string(Q.order()) + "): " +
         (ax.exhaustive ? "exhaustive" : "sampled") + " check of " + std::to_string(ax.checked) + " triples");
  const int hom = check_homomorphism(G, Q, 20, rng);
  r.check(hom == 0, "quotient map is not a homomorphism");
  r.note("quotient law matches the reduced BCH law on 20 pairs");
  return r;
}

SuiteResult suite_uniformity(const Config& c, std::mt19937_64&) {
  SuiteResult r;
  const UniformGroup G = UniformGroup::from_family(family(c));
  const FiniteQuotient Q(G, c.levels);
  const LowerPSeries s = lower_p_series(Q, c.levels + 1);
  std::string idx;
  for (int e : s.index_exponents) idx += (idx.empty() ? "" : ", ") + std::string("p^") + std::to_string(e);
  r.note("G/G^{p^" + std::to_string(c.levels) + "}: indices " + idx);
  r.check(s.all_equal(c.k), "lower p-series index differs from p^m");
  r.check(s.matches_power_image, "P_{i+1} differs from the p^i-divisible image");
  r.check(is_powerful_group(Q), "quotient is not powerful");
  const int d = frattini_rank(Q);
  r.check(d == c.k, "frattini rank " + std::to_string(d));
  r.note("powerful, frattini rank " + std::to_string(d));
  return r;
}

SuiteResult suite_intrinsic(const Config& c, std::mt19937_64& rng) {
  SuiteResult r;
  const FamilyParams fp = family(c);
  const UniformGroup G = UniformGroup::from_family(fp);
  const LieAlgebraZp L = build_family(fp);
  const PAdic p2 = PAdic::one(G.context()).shifted(2);
  const int nmax = std::min(8, c.prec - 4);
  int ws = 99, wb = 99;
  for (int t = 0; t < 10; ++t) {
    const auto g = G.element(random_coords(G.context(), G.rank(), rng)), h = G.element(random_coords(G.context(), G.rank(), rng));
    const LieVector gl = G.log(g) * p2, hl = G.log(h) * p2;
    for (int n = 1; n <= nmax; ++n) {
      ws = std::min(ws, agreement_valuation((G.intrinsic_sum(g, h, n) * p2).eval(), (gl + hl).eval()) - n);
      wb = std::min(wb, agreement_valuation((G.intrinsic_bracket(g, h, n) * p2).eval(), L.bracket(gl, hl)) - n);
    }
  }
  r.check(ws >= 3 && wb >= 3, "limit gap below n+3");
  r.note("n=1.." + std::to_string(nmax) + ", 10 pairs: min v(sum)-n = " + std::to_string(ws) +
         ", min v(bracket)-n = " + std::to_string(wb));
  return r;
}

SuiteResult suite_presentation(const Config& c, std::mt19937_64& rng) {
  SuiteResult r;
  const UniformGroup G = UniformGroup::from_family(family(c));
  const Presentation P = emit_presentation(G);
  r.check(P.relators.size() == static_cast<std::size_t>(c.k * (c.k - 1) / 2), "relator count");
  for (const auto& rel : P.relators) {
    const auto w = G.mul(G.commutator(G.generator(rel.i), G.generator(rel.j)), ordered_product(G, rel.exponents));
    r.check(G.equal(w, G.identity()), "relator " + std::to_string(rel.i) + "," + std::to_string(rel.j) + " not trivial");
    r.check(min_valuation(rel.exponents) >= 1, "exponent outside pZ_p");
  }
  for (int t = 0; t < 10; ++t) {
    const auto g = G.element(random_coords(G.context(), G.rank(), rng));
    r.check(G.equal(ordered_product(G, coords_second_kind(G, g)), g), "second-kind round trip");
  }
  r.note(std::to_string(P.relators.size()) + " relators trivial, exponents in pZ_p; 10 second-kind round trips");
  return r;
}

int cmd_verify(const Config& c) {
  using Suite = SuiteResult (*)(const Config&, std::mt19937_64&);
  const std::vector<std::pair<std::string, Suite>> suites = {
      {"jacobi", suite_jacobi},       {"backend-agreement", suite_backend},   {"group-axioms", suite_axioms},
      {"uniformity", suite_uniformity}, {"intrinsic-limits", suite_intrinsic}, {"presentation-roundtrip", suite_presentation},
  };
  bool known = c.suite == "all";
  for (const auto& s : suites) known = known || s.first == c.suite;
  if (!known) throw CLI::ValidationError("--suite", "unknown suite '" + c.suite + "'");
  std::ostringstream report;
  report << "# verify p=" << c.p << " N=" << c.prec << " m=" << c.k << " d=" << c.d << " seed=" << c.seed << "\n";
  bool all_ok = true;
  for (const auto& [name, fn] : suites) {
    if (c.suite != "all" && c.suite != name) continue;
    std::mt19937_64 rng(c.seed);
    const SuiteResult r = fn(c, rng);
    all_ok = all_ok && r.ok;
    report << name << ": " << (r.ok ? "PASS" : "FAIL") << "\n";
    for (const auto& line : r.lines) report << "  " << line << "\n";
  }
  std::cout << report.str();
  if (!c.out.empty()) write_text(c.out, report.str());
  return all_ok ? kOk : kSuiteFailure;
}

int cmd_present(const Config& c) {
  const FamilyParams fp = family(c);
  const Presentation P = emit_presentation(UniformGroup::from_family(fp));
  const std::string text = render_presentation(P);
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
    save_json(c.out + ".json", presentation_to_json(P));
    std::cout << "wrote " << c.out << " and " << c.out << ".json (" << P.relators.size() << " relators)\n";
  }
  if (c.compare_remark) {
    if (c.k != 4) throw PreconditionError("--compare-remark needs m = 4");
    std::cout << render_remark_report(compare_with_remark(context(c), fp.d));
  }
  return kOk;
}

int cmd_growth(const Config& c, bool levels_given) {
  const UniformGroup G = UniformGroup::from_family(family(c));
  GrowthOptions opts;
  opts.max_level = levels_given ? c.levels : c.max_index + 1;
  const GrowthTable t = zeta_coefficients(G, c.max_index, opts);
  const std::string csv = growth_csv(t);
  if (c.out.empty()) {
    std::cout << csv;
  } else {
    write_text(c.out, csv);
    std::cout << "wrote " << c.out << "\n";
  }
  bool provisional = false;
  for (const auto& r : t.rows) provisional = provisional || !r.stabilized;
  if (provisional) {
    std::cerr << "some counts did not stabilize within the budget (rows marked provisional)\n";
    return kBudget;
  }
  return kOk;
}

int cmd_series(const Config& c) {
  const std::string text = dump_series(bch_coefficients(c.degree));
  if (c.out.empty()) {
    std::cout << text;
  } else {
    write_text(c.out, text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uniform pro-p groups from Z_p-Lie algebras"};
  app.require_subcommand(1);
  Config c;

  auto common = [&c](CLI::App* s) {
    s->add_option("--p", c.p, "prime")->capture_default_str();
    s->add_option("--prec", c.prec, "p-adic precision N")->capture_default_str()->check(CLI::Range(1, 120));
    s->add_option("--k,--m", c.k, "rank of the algebra / group (>= 3)")->capture_default_str()->check(CLI::Range(3, 64));
    s->add_option("--d", c.d, "unit d: decimal integer or digits d0.d1.d2...")->capture_default_str();
    s->add_option("--out", c.out, "output file");
  };

  auto* construct = app.add_subcommand("construct", "write the structure constants of L_k(d) or p^2 L_k(d)");
  common(construct);
  construct->add_flag("--scaled", c.scaled, "build p^2 L_k(d)");
  auto* invariant = app.add_subcommand("invariant", "commensurability invariant of L_k(d)");
  common(invariant);
  auto* dist = app.add_subcommand("distinguish", "decide L_k(d) vs L_k(l)");
  common(dist);
  dist->add_option("--l", c.l, "second parameter")->capture_default_str();
  auto* verify = app.add_subcommand("verify", "run verification suites");
  common(verify);
  verify->add_option("--suite", c.suite,
                     "jacobi | backend-agreement | group-axioms | uniformity | intrinsic-limits | "
                     "presentation-roundtrip | all")
      ->capture_default_str();
  verify->add_option("--levels", c.levels, "quotient level for the finite checks")->capture_default_str()->check(CLI::Range(1, 16));
  verify->add_option("--seed", c.seed, "seed of the random samples")->capture_default_str();
  auto* present = app.add_subcommand("present", "finite presentation of G_m(d)");
  common(present);
  present->add_flag("--compare-remark", c.compare_remark, "compare G_4(d) with the reference relations");
  auto* growth = app.add_subcommand("growth", "subgroup counts of index p^i");
  common(growth);
  growth->add_option("--max-index", c.max_index, "largest i")->capture_default_str()->check(CLI::Range(0, 8));
  auto* levels_opt = growth->add_option("--levels", c.levels, "deepest quotient level (default max-index + 1)");
  auto* series = app.add_subcommand("series", "dump the BCH series");
  series->add_option("--degree", c.degree, "maximal degree")->capture_default_str()->check(CLI::Range(1, kMaxGeneralDegree));
  series->add_option("--out", c.out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*construct) return cmd_construct(c);
    if (*invariant) return cmd_invariant(c);
    if (*dist) return cmd_distinguish(c);
    if (*verify) return cmd_verify(c);
    if (*present) return cmd_present(c);
    if (*growth) return cmd_growth(c, levels_opt->count() > 0);
    if (*series) return cmd_series(c);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return kBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPrecondition;
  }
  return kUsage;
}
