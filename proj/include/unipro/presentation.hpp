#pragma once

// Coordinates of the second kind and the finite presentation
//   < x_1, ..., x_m | [x_i, x_j] x_1^{a_1(i,j)} ... x_m^{a_m(i,j)}, i < j >
// of a uniform group, with x_i = exp(b_i) for the algebra basis b_i.

#include <string>
#include <vector>

#include <json.hpp>

#include "unipro/uniform_group.hpp"

namespace unipro {

/// x_1^{l_1} ... x_m^{l_m}.
GroupElement ordered_product(const UniformGroup& G, const LieVector& lambda);

/// The unique lambda in Z_p^m with ordered_product(G, lambda) = g mod p^N,
/// by successive approximation (each round fixes at least the next
/// structure-constant-valuation many digits). The result is re-multiplied
/// and checked; ConvergenceError if it does not reproduce g.
LieVector coords_second_kind(const UniformGroup& G, const GroupElement& g);

/// a(i, j) = coords_second_kind([x_i, x_j]^-1), so that the relator
/// [x_i, x_j] x_1^{a_1} ... x_m^{a_m} is trivial. Requires i != j.
LieVector commutator_exponents(const UniformGroup& G, int i, int j);

struct Relator {
  int i, j;
  LieVector exponents;  // a(i, j)
  LieVector equation;   // b with [x_i, x_j] = x_1^{b_1} ... x_m^{b_m}
};

struct Presentation {
  std::uint32_t p = 0;
  int precision = 0;
  std::vector<std::string> generators;
  std::vector<Relator> relators;  // pairs i < j in lexicographic order
};

Presentation emit_presentation(const UniformGroup& G);
/// Presentation of G_m(d): generators (y, z_2, ..., z_m).
Presentation emit_presentation(const PAdicContext& ctx, int m, const PAdic& d);

/// One line per relator in equation form, exponents as little-endian digit
/// strings, preceded by a "mod p^N" banner.
std::string render_presentation(const Presentation& P);
nlohmann::json presentation_to_json(const Presentation& P);

struct RemarkPair {
  std::string lhs;             // e.g. "[z2, y]"
  int i, j;                    // generator indices of the commutator
  LieVector expected;          // exponents of the reference right-hand side
  LieVector computed;          // coords_second_kind([x_i, x_j])
  LieVector relator;           // a for the relator [x_i, x_j] w
  int agreement;               // v_p(computed - expected), capped at N
  int relator_agreement;       // v_p(relator + expected), capped at N
};

struct RemarkReport {
  std::vector<RemarkPair> pairs;
  int threshold = 3;  // leading order: agreement mod p^3
  bool leading_order_match = false;
};

/// Compares G_4(d) against [z_2, y] = z_4^{d p^2}, [z_3, y] = z_3^{p^2},
/// [z_4, y] = z_2^{p^2}, [z_i, z_j] = 1.
RemarkReport compare_with_remark(const PAdicContext& ctx, const PAdic& d);
std::string render_remark_report(const RemarkReport& r);

}  // namespace unipro
