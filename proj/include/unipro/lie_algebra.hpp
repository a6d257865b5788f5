#pragma once

// Z_p-Lie algebras given by structure constants over a named basis.

#include <optional>
#include <string>
#include <vector>

#include "unipro/padic_matrix.hpp"

namespace unipro {

/// Coordinates of an element over the algebra's basis.
using LieVector = PAdicVector;

/// [b_i, b_j] = sum_l c(i, j, l) b_l. Only pairs i < j are stored, so the
/// table is antisymmetric by construction.
class LieAlgebraZp {
 public:
  LieAlgebraZp(const PAdicContext& ctx, std::vector<std::string> basis_names);

  /// Builds from a full k x k table of bracket vectors, rejecting any pair
  /// with table[i][j] != -table[j][i] or table[i][i] != 0.
  static LieAlgebraZp from_full_table(const PAdicContext& ctx, std::vector<std::string> basis_names,
                                      const std::vector<std::vector<LieVector>>& table);

  /// Sets [b_i, b_j] (and implicitly [b_j, b_i]). i != j.
  void set_bracket(int i, int j, const LieVector& coords);

  const PAdicContext& context() const { return *ctx_; }
  int rank() const { return rank_; }
  const std::vector<std::string>& basis_names() const { return names_; }

  /// c(i, j, l), synthesized for i >= j.
  PAdic constant(int i, int j, int l) const;
  /// Coordinates of [b_i, b_j].
  LieVector basis_bracket(int i, int j) const;
  LieVector basis_vector(int i) const;
  LieVector zero() const { return zero_vector(*ctx_, rank_); }

  LieVector bracket(const LieVector& u, const LieVector& v) const;
  /// Matrix of w -> [w, y]; row i holds the coordinates of [b_i, y].
  PAdicMatrix right_bracket_matrix(const LieVector& y) const;

  /// Minimum valuation over all structure constants (infinite if abelian).
  int min_constant_valuation() const;

 private:
  std::size_t slot(int i, int j) const;
  void check(const LieVector& v) const;

  const PAdicContext* ctx_;
  int rank_;
  std::vector<std::string> names_;
  std::vector<LieVector> upper_;
  // Sparse copy of upper_: per pair, the nonzero (l, c) entries.
  std::vector<std::vector<std::pair<int, PAdic>>> sparse_;
};

struct JacobiReport {
  bool ok = true;
  int i = -1, j = -1, h = -1;  // first violating basis triple
  LieVector residual;
};

/// Checks sum_cyc [[b_i, b_j], b_h] = 0 mod p^N for all i < j < h.
JacobiReport jacobi_check(const LieAlgebraZp& L);

struct DerivedSubalgebra {
  std::vector<LieVector> basis;  // echelonized, pivots normalized to p^v
  std::vector<int> pivot_rows;
  bool saturated = true;  // span is a direct summand of Z_p^k
};

/// Z_p-span of all [b_i, b_j].
DerivedSubalgebra derived_subalgebra(const LieAlgebraZp& L);

/// Echelon generating set of the Z_p-span of arbitrary vectors.
DerivedSubalgebra echelon_span(const PAdicContext& ctx, int dim, std::vector<LieVector> vectors);

/// Matrix of v -> [v, y] restricted to the span of ideal_basis, in that
/// basis; row i holds the coordinates of [ideal_basis[i], y]. Throws
/// PreconditionError if the span is not invariant.
PAdicMatrix adjoint_matrix(const LieAlgebraZp& L, const LieVector& y,
                           const std::vector<LieVector>& ideal_basis);

/// (L, L) in pL (in 4L for p = 2).
bool is_powerful_algebra(const LieAlgebraZp& L);

/// The algebra p^n L in the basis {p^n b_i}.
LieAlgebraZp scale(const LieAlgebraZp& L, int n);

/// [L', L'] = 0.
bool is_metabelian(const LieAlgebraZp& L);

}  // namespace unipro
