#include "unipro/lie_algebra.hpp"

#include <algorithm>
#include <numeric>

namespace unipro {

LieAlgebraZp::LieAlgebraZp(const PAdicContext& ctx, std::vector<std::string> basis_names)
    : ctx_(&ctx), rank_(static_cast<int>(basis_names.size())), names_(std::move(basis_names)) {
  if (rank_ < 1) throw DimensionError("Lie algebra of rank 0");
  const std::size_t pairs = static_cast<std::size_t>(rank_) * static_cast<std::size_t>(rank_ - 1) / 2;
  upper_.assign(pairs, zero_vector(ctx, rank_));
  sparse_.assign(pairs, {});
}

std::size_t LieAlgebraZp::slot(int i, int j) const {
  // i < j; row-major over the strict upper triangle.
  return static_cast<std::size_t>(i) * static_cast<std::size_t>(2 * rank_ - i - 1) / 2 +
         static_cast<std::size_t>(j - i - 1);
}

void LieAlgebraZp::check(const LieVector& v) const {
  if (v.size() != rank_) {
    throw DimensionError("vector of length " + std::to_string(v.size()) + " in an algebra of rank " +
                         std::to_string(rank_));
  }
}

void LieAlgebraZp::set_bracket(int i, int j, const LieVector& coords) {
  if (i < 0 || j < 0 || i >= rank_ || j >= rank_) throw DimensionError("basis index out of range");
  if (i == j) throw PreconditionError("[b_i, b_i] is always zero");
  check(coords);
  LieVector c = coords.unaryExpr([this](const PAdic& x) { return x.in(*ctx_); });
  if (i > j) {
    std::swap(i, j);
    c = -c;
  }
  const std::size_t s = slot(i, j);
  upper_[s] = c;
  sparse_[s].clear();
  for (int l = 0; l < rank_; ++l)
    if (!c(l).is_zero()) sparse_[s].emplace_back(l, c(l));
}

LieAlgebraZp LieAlgebraZp::from_full_table(const PAdicContext& ctx, std::vector<std::string> basis_names,
                                           const std::vector<std::vector<LieVector>>& table) {
  LieAlgebraZp L(ctx, std::move(basis_names));
  const int k = L.rank();
  if (static_cast<int>(table.size()) != k) throw DimensionError("structure table has the wrong size");
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(table[static_cast<std::size_t>(i)].size()) != k) {
      throw DimensionError("structure table has the wrong size");
    }
  }
  for (int i = 0; i < k; ++i) {
    const LieVector& diag = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    L.check(diag);
    for (int l = 0; l < k; ++l)
      if (!diag(l).is_zero()) {
        throw PreconditionError("antisymmetry violated: [b_" + std::to_string(i) + ", b_" + std::to_string(i) +
                                "] != 0");
      }
    for (int j = i + 1; j < k; ++j) {
      const LieVector& a = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      const LieVector& b = table[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      L.check(a);
      L.check(b);
      for (int l = 0; l < k; ++l) {
        if (!((a(l) + b(l)).is_zero())) {
          throw PreconditionError("antisymmetry violated at pair (" + std::to_string(i) + ", " + std::to_string(j) +
                                  "), coordinate " + std::to_string(l));
        }
      }
      L.set_bracket(i, j, a);
    }
  }
  return L;
}

PAdic LieAlgebraZp::constant(int i, int j, int l) const {
  if (i == j) return PAdic::zero(*ctx_);
  if (i < j) return upper_[slot(i, j)](l);
  return -upper_[slot(j, i)](l);
}

LieVector LieAlgebraZp::basis_bracket(int i, int j) const {
  if (i == j) return zero();
  if (i < j) return upper_[slot(i, j)];
  return -upper_[slot(j, i)];
}

LieVector LieAlgebraZp::basis_vector(int i) const {
  LieVector v = zero();
  v(i) = PAdic::one(*ctx_);
  return v;
}

LieVector LieAlgebraZp::bracket(const LieVector& u, const LieVector& v) const {
  check(u);
  check(v);
  LieVector out = zero();
  for (int i = 0; i < rank_; ++i) {
    for (int j = i + 1; j < rank_; ++j) {
      const auto& entries = sparse_[slot(i, j)];
      if (entries.empty()) continue;
      const PAdic w = u(i) * v(j) - u(j) * v(i);
      if (w.is_zero()) continue;
      for (const auto& [l, c] : entries) out(l) += w * c;
    }
  }
  return out;
}

PAdicMatrix LieAlgebraZp::right_bracket_matrix(const LieVector& y) const {
  check(y);
  PAdicMatrix m = zero_matrix(*ctx_, rank_, rank_);
  for (int i = 0; i < rank_; ++i) {
    for (int j = i + 1; j < rank_; ++j) {
      // [b_i, y] gains y_j [b_i, b_j]; [b_j, y] gains -y_i [b_i, b_j].
      for (const auto& [l, c] : sparse_[slot(i, j)]) {
        if (!y(j).is_zero()) m(i, l) += y(j) * c;
        if (!y(i).is_zero()) m(j, l) -= y(i) * c;
      }
    }
  }
  return m;
}

int LieAlgebraZp::min_constant_valuation() const {
  int v = kInfiniteValuation;
  for (const auto& entries : sparse_)
    for (const auto& [l, c] : entries) v = std::min(v, c.valuation());
  return v;
}

// ---------------------------------------------------------------------------

JacobiReport jacobi_check(const LieAlgebraZp& L) {
  const int k = L.rank();
  const int n = L.context().precision();
  JacobiReport report;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int h = j + 1; h < k; ++h) {
        const LieVector bi = L.basis_vector(i), bj = L.basis_vector(j), bh = L.basis_vector(h);
        const LieVector sum = L.bracket(L.basis_bracket(i, j), bh) + L.bracket(L.basis_bracket(j, h), bi) +
                              L.bracket(L.basis_bracket(h, i), bj);
        if (!agree_mod(sum, L.zero(), n)) {
          report.ok = false;
          report.i = i;
          report.j = j;
          report.h = h;
          report.residual = sum;
          return report;
        }
      }
  return report;
}

DerivedSubalgebra echelon_span(const PAdicContext& ctx, int dim, std::vector<LieVector> cols) {
  // Lattice vectors are only known modulo p^N, so anything at or beyond
  // valuation N is rounding residue, not a pivot candidate.
  const int n = ctx.precision();
  auto negligible = [n](const PAdic& x) { return x.is_zero() || x.valuation() >= n; };
  DerivedSubalgebra out;
  std::vector<bool> row_used(static_cast<std::size_t>(dim), false);
  for (;;) {
    std::size_t pc = cols.size();
    int pr = -1;
    int best = kInfiniteValuation;
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (int r = 0; r < dim; ++r)
        if (!row_used[static_cast<std::size_t>(r)] && !negligible(cols[c](r)) && cols[c](r).valuation() < best) {
          best = cols[c](r).valuation();
          pc = c;
          pr = r;
        }
    if (pr < 0) break;
    LieVector pivot_col = cols[pc];
    // Normalize the pivot entry to exactly p^v.
    const PAdic unit_part = PAdic::from_parts(ctx, 0, pivot_col(pr).unit());
    pivot_col *= unit_part.inverse();
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(pc));
    const PAdic pivot_inv = pivot_col(pr).inverse();
    for (auto& c : cols) {
      if (negligible(c(pr))) {
        c(pr) = PAdic::zero(ctx);
        continue;
      }
      const PAdic f = c(pr) * pivot_inv;  // integral: pivot has minimal valuation
      c -= f * pivot_col;
      c(pr) = PAdic::zero(ctx);
    }
    if (best != 0) out.saturated = false;
    row_used[static_cast<std::size_t>(pr)] = true;
    out.basis.push_back(pivot_col);
    out.pivot_rows.push_back(pr);
  }
  // Sort by pivot row and clear pivot rows in the other vectors where the
  // multiplier stays integral.
  std::vector<std::size_t> order(out.basis.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return out.pivot_rows[a] < out.pivot_rows[b]; });
  DerivedSubalgebra sorted;
  sorted.saturated = out.saturated;
  for (std::size_t idx : order) {
    sorted.basis.push_back(out.basis[idx]);
    sorted.pivot_rows.push_back(out.pivot_rows[idx]);
  }
  for (std::size_t s = 0; s < sorted.basis.size(); ++s) {
    const int r = sorted.pivot_rows[s];
    const PAdic piv = sorted.basis[s](r);
    for (std::size_t t = 0; t < sorted.basis.size(); ++t) {
      if (t == s) continue;
      const PAdic e = sorted.basis[t](r);
      if (e.is_zero() || e.valuation() < piv.valuation()) continue;
      sorted.basis[t] -= (e / piv) * sorted.basis[s];
      sorted.basis[t](r) = PAdic::zero(ctx);
    }
  }
  return sorted;
}

DerivedSubalgebra derived_subalgebra(const LieAlgebraZp& L) {
  std::vector<LieVector> cols;
  for (int i = 0; i < L.rank(); ++i)
    for (int j = i + 1; j < L.rank(); ++j) cols.push_back(L.basis_bracket(i, j));
  return echelon_span(L.context(), L.rank(), std::move(cols));
}

PAdicMatrix adjoint_matrix(const LieAlgebraZp& L, const LieVector& y, const std::vector<LieVector>& ideal_basis) {
  const Eigen::Index r = static_cast<Eigen::Index>(ideal_basis.size());
  PAdicMatrix basis(r, L.rank());
  for (Eigen::Index i = 0; i < r; ++i) basis.row(i) = ideal_basis[static_cast<std::size_t>(i)].transpose();
  PAdicMatrix a = zero_matrix(L.context(), r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    const LieVector image = L.bracket(ideal_basis[static_cast<std::size_t>(i)], y);
    const auto coords = solve_in_row_span(basis, image);
    if (!coords) {
      throw PreconditionError("subspace is not invariant under ad y (basis vector " + std::to_string(i) + ")");
    }
    a.row(i) = coords->transpose();
  }
  return a;
}

bool is_powerful_algebra(const LieAlgebraZp& L) {
  const int need = L.context().prime() == 2 ? 2 : 1;
  return L.min_constant_valuation() >= need;
}

LieAlgebraZp scale(const LieAlgebraZp& L, int n) {
  if (n < 0) throw PreconditionError("scale: negative exponent");
  std::vector<std::string> names = L.basis_names();
  if (n > 0)
    for (auto& s : names) s = "p^" + std::to_string(n) + "*" + s;
  LieAlgebraZp out(L.context(), names);
  // [p^n b_i, p^n b_j] = p^{2n} [b_i, b_j] = p^n * sum c p^n b_l.
  for (int i = 0; i < L.rank(); ++i)
    for (int j = i + 1; j < L.rank(); ++j) {
      LieVector c = L.basis_bracket(i, j);
      for (Eigen::Index l = 0; l < c.size(); ++l) c(l) = c(l).shifted(n);
      out.set_bracket(i, j, c);
    }
  return out;
}

bool is_metabelian(const LieAlgebraZp& L) {
  const DerivedSubalgebra der = derived_subalgebra(L);
  const int n = L.context().precision();
  for (std::size_t a = 0; a < der.basis.size(); ++a)
    for (std::size_t b = a + 1; b < der.basis.size(); ++b)
      if (!agree_mod(L.bracket(der.basis[a], der.basis[b]), L.zero(), n)) return false;
  return true;
}

}  // namespace unipro
