#pragma once

// The metabelian families L_k(d) and the commensurability invariant
// (tr A(y))^{1-k} det A(y) that separates them.
//
// Basis order is (x, e_2, ..., e_k); e_i sits at index i - 1. The ideal
// L' = span(e_2, ..., e_k) is abelian and x acts by
//   k odd : [e_2, x] = d e_k, [e_i, x] = e_{k+2-i} (3 <= i <= k-1),
//           [e_k, x] = e_2 + e_k
//   k even: [e_2, x] = d e_k, [e_i, x] = e_{k+2-i} (3 <= i <= k).

#include <optional>

#include "unipro/lie_algebra.hpp"

namespace unipro {

/// tr A(y) is not a unit (or is zero at the Q_p level), so the invariant's
/// normalization is undefined.
class NonUnitTrace : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

struct FamilyParams {
  const PAdicContext* ctx = nullptr;
  int k = 0;
  PAdic d;

  FamilyParams(const PAdicContext& c, int k_, PAdic d_) : ctx(&c), k(k_), d(d_.in(c)) {}
  /// Throws PreconditionError unless k >= 3 and d is a unit.
  void validate() const;
  /// floor((k-1)/2) mod 2.
  int sign_exponent() const { return ((k - 1) / 2) % 2; }
};

LieAlgebraZp build_family(const FamilyParams& params);

/// A_k(d), built directly from its closed form.
PAdicMatrix family_adjoint(const FamilyParams& params);

/// True iff L has exactly the structure constants of build_family(params).
bool matches_family(const LieAlgebraZp& L, const FamilyParams& params);

struct InvariantValue {
  PAdic value;
  int sign_exponent = 0;
  PAdic recovered_d;
};

/// Invariant with an automatically chosen complement y of L'. Requires L'
/// of corank 1, saturated, and a unit trace of A(y).
InvariantValue commensurability_invariant(const LieAlgebraZp& L);

/// Invariant with a caller-chosen complement y (Z_p-level: L = L' + Z_p y
/// must hold and tr A(y) must be a unit).
InvariantValue commensurability_invariant(const LieAlgebraZp& L, const LieVector& y);

/// Q_p-level variant: A(y) is taken on the given basis of L' (tensored with
/// Q_p); only det A(y) != 0 and tr A(y) != 0 are required.
InvariantValue commensurability_invariant(const LieAlgebraZp& L, const LieVector& y,
                                          const std::vector<LieVector>& ideal_basis);

enum class Verdict { Separated, IndistinguishableAtPrecision };

struct Distinction {
  Verdict verdict;
  InvariantValue first;
  InvariantValue second;
  int precision;  // N of the context
  int agreement;  // v_p(recovered_d - recovered_l), capped at N
};

Distinction distinguish(const PAdicContext& ctx, int k, const PAdic& d, const PAdic& l);

}  // namespace unipro
