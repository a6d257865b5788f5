#include "unipro/family.hpp"

#include <algorithm>

namespace unipro {

void FamilyParams::validate() const {
  if (k < 3) throw PreconditionError("family index k must be at least 3 (got " + std::to_string(k) + ")");
  if (d.is_zero() || d.valuation() != 0) throw PreconditionError("d must be a unit in Z_p");
}

namespace {

std::vector<std::string> family_names(int k) {
  std::vector<std::string> names{"x"};
  for (int i = 2; i <= k; ++i) names.push_back("e" + std::to_string(i));
  return names;
}

// Index of e_i in the basis (x, e_2, ..., e_k).
int e(int i) { return i - 1; }

InvariantValue normalize(const PAdicMatrix& a) {
  const auto [det, trace] = mat_det_trace(a);
  const int r = static_cast<int>(a.rows());
  PAdic value = det;
  const PAdic tinv = trace.inverse();
  for (int i = 0; i < r; ++i) value *= tinv;
  InvariantValue out;
  out.value = value;
  out.sign_exponent = (r / 2) % 2;
  out.recovered_d = out.sign_exponent ? -value : value;
  return out;
}

}  // namespace

LieAlgebraZp build_family(const FamilyParams& params) {
  params.validate();
  const int k = params.k;
  const PAdicContext& ctx = *params.ctx;
  LieAlgebraZp L(ctx, family_names(k));
  auto image = [&](std::initializer_list<std::pair<int, PAdic>> terms) {
    LieVector v = L.zero();
    for (const auto& [idx, c] : terms) v(idx) += c;
    return v;
  };
  const PAdic one = PAdic::one(ctx);
  L.set_bracket(e(2), 0, image({{e(k), params.d}}));
  if (k % 2 == 1) {
    for (int i = 3; i <= k - 1; ++i) L.set_bracket(e(i), 0, image({{e(k + 2 - i), one}}));
    L.set_bracket(e(k), 0, image({{e(2), one}, {e(k), one}}));
  } else {
    for (int i = 3; i <= k; ++i) L.set_bracket(e(i), 0, image({{e(k + 2 - i), one}}));
  }
  return L;
}

PAdicMatrix family_adjoint(const FamilyParams& params) {
  params.validate();
  const int n = params.k - 1;
  const PAdicContext& ctx = *params.ctx;
  PAdicMatrix a = zero_matrix(ctx, n, n);
  a(0, n - 1) = params.d;
  for (int r = 1; r < n; ++r) a(r, n - 1 - r) = PAdic::one(ctx);
  if (params.k % 2 == 1) a(n - 1, n - 1) = PAdic::one(ctx);
  return a;
}

bool matches_family(const LieAlgebraZp& L, const FamilyParams& params) {
  if (L.rank() != params.k || &L.context() != params.ctx) return false;
  const LieAlgebraZp ref = build_family(params);
  const int n = L.context().precision();
  for (int i = 0; i < L.rank(); ++i)
    for (int j = i + 1; j < L.rank(); ++j)
      if (!agree_mod(L.basis_bracket(i, j), ref.basis_bracket(i, j), n)) return false;
  return true;
}

InvariantValue commensurability_invariant(const LieAlgebraZp& L) {
  const DerivedSubalgebra der = derived_subalgebra(L);
  if (static_cast<int>(der.basis.size()) != L.rank() - 1) {
    throw PreconditionError("derived subalgebra has corank " +
                            std::to_string(L.rank() - static_cast<int>(der.basis.size())) + ", expected 1");
  }
  int free_row = 0;
  while (std::find(der.pivot_rows.begin(), der.pivot_rows.end(), free_row) != der.pivot_rows.end()) ++free_row;
  return commensurability_invariant(L, L.basis_vector(free_row));
}

InvariantValue commensurability_invariant(const LieAlgebraZp& L, const LieVector& y) {
  const DerivedSubalgebra der = derived_subalgebra(L);
  const int k = L.rank();
  if (static_cast<int>(der.basis.size()) != k - 1) {
    throw PreconditionError("derived subalgebra has corank " + std::to_string(k - static_cast<int>(der.basis.size())) +
                            ", expected 1");
  }
  if (!der.saturated) throw PreconditionError("derived subalgebra is not saturated; no Z_p complement exists");
  PAdicMatrix frame(k, k);
  for (int i = 0; i < k - 1; ++i) frame.row(i) = der.basis[static_cast<std::size_t>(i)].transpose();
  frame.row(k - 1) = y.transpose();
  const PAdic frame_det = mat_det_trace(frame).det;
  if (frame_det.is_zero() || frame_det.valuation() != 0) {
    throw PreconditionError("y does not span a complement of L' over Z_p");
  }
  const PAdicMatrix a = adjoint_matrix(L, y, der.basis);
  const PAdic trace = mat_det_trace(a).trace;
  if (trace.is_zero() || trace.valuation() != 0) throw NonUnitTrace("tr A(y) is not a unit");
  return normalize(a);
}

InvariantValue commensurability_invariant(const LieAlgebraZp& L, const LieVector& y,
                                          const std::vector<LieVector>& ideal_basis) {
  const PAdicMatrix a = adjoint_matrix(L, y, ideal_basis);
  const auto [det, trace] = mat_det_trace(a);
  if (det.is_zero()) throw PreconditionError("det A(y) vanishes; y does not act invertibly on the ideal");
  if (trace.is_zero()) throw NonUnitTrace("tr A(y) vanishes");
  return normalize(a);
}

Distinction distinguish(const PAdicContext& ctx, int k, const PAdic& d, const PAdic& l) {
  const FamilyParams pd(ctx, k, d), pl(ctx, k, l);
  pd.validate();
  pl.validate();
  Distinction out{Verdict::IndistinguishableAtPrecision,
                  commensurability_invariant(build_family(pd)),
                  commensurability_invariant(build_family(pl)),
                  ctx.precision(),
                  ctx.precision()};
  const PAdic diff = out.first.recovered_d - out.second.recovered_d;
  if (!diff.is_zero()) out.agreement = std::min(diff.valuation(), ctx.precision());
  if (out.agreement < ctx.precision()) out.verdict = Verdict::Separated;
  return out;
}

}  // namespace unipro
