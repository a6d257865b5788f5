#include "unipro/padic_matrix.hpp"

#include <utility>

namespace unipro {

PAdicMatrix zero_matrix(const PAdicContext& ctx, Eigen::Index rows, Eigen::Index cols) {
  return PAdicMatrix::Constant(rows, cols, PAdic::zero(ctx));
}

PAdicMatrix identity_matrix(const PAdicContext& ctx, Eigen::Index n) {
  PAdicMatrix m = zero_matrix(ctx, n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = PAdic::one(ctx);
  return m;
}

PAdicVector zero_vector(const PAdicContext& ctx, Eigen::Index n) {
  return PAdicVector::Constant(n, PAdic::zero(ctx));
}

PAdic det_elimination(const PAdicMatrix& input) {
  if (input.rows() != input.cols()) throw DimensionError("determinant of a non-square matrix");
  const PAdicContext* ctx = context_of(input);
  if (ctx == nullptr) return det_cofactor(input);
  PAdicMatrix a = input.unaryExpr([ctx](const PAdic& x) { return x.in(*ctx); });
  const Eigen::Index n = a.rows();
  PAdic det = PAdic::one(*ctx);
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pr = -1, pc = -1;
    int best = kInfiniteValuation;
    for (Eigen::Index j = k; j < n; ++j)
      for (Eigen::Index i = k; i < n; ++i)
        if (!a(i, j).is_zero() && a(i, j).valuation() < best) {
          best = a(i, j).valuation();
          pr = i;
          pc = j;
        }
    if (pr < 0) return PAdic::zero(*ctx);
    if (pr != k) {
      a.row(pr).swap(a.row(k));
      det = -det;
    }
    if (pc != k) {
      a.col(pc).swap(a.col(k));
      det = -det;
    }
    const PAdic pivot = a(k, k);
    det *= pivot;
    // Multipliers a(i,k)/pivot are integral because the pivot has minimal
    // valuation in the trailing block.
    const PAdic pivot_inv = pivot.inverse();
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      const PAdic f = a(i, k) * pivot_inv;
      for (Eigen::Index j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
      a(i, k) = PAdic::zero(*ctx);
    }
  }
  return det;
}

DetTrace mat_det_trace(const PAdicMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("determinant/trace of a non-square matrix");
  PAdic trace(0);
  for (Eigen::Index i = 0; i < m.rows(); ++i) trace += m(i, i);
  PAdic det = m.rows() <= 3 ? det_cofactor(m) : det_elimination(m);
  if (const PAdicContext* ctx = context_of(m)) {
    det = det.in(*ctx);
    trace = trace.in(*ctx);
  }
  return {det, trace};
}

PAdicMatrix mat_exp(const PAdicMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("mat_exp of a non-square matrix");
  const PAdicContext* ctx = context_of(m);
  if (ctx == nullptr) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (!m(i, j).is_zero()) throw PreconditionError("mat_exp needs a p-adic context");
    PAdicMatrix id = PAdicMatrix::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) id(i, i) = PAdic(1);
    return id;
  }
  const int vmin = min_valuation(m);
  PAdicMatrix result = identity_matrix(*ctx, m.rows());
  if (vmin == kInfiniteValuation) return result;
  if (vmin < 2) {
    throw PreconditionError("mat_exp requires every entry to have valuation >= 2 (found " +
                            std::to_string(vmin) + ")");
  }
  const int p = static_cast<int>(ctx->prime());
  const int n = ctx->precision();
  PAdicMatrix term = identity_matrix(*ctx, m.rows());
  for (int k = 1;; ++k) {
    if (static_cast<long long>(k) * vmin - (k - 1) / (p - 1) >= n) break;
    term = (term * m).eval();
    term /= PAdic(*ctx, k);
    result += term;
  }
  return result;
}

std::optional<PAdicVector> solve_in_row_span(const PAdicMatrix& basis, const PAdicVector& v) {
  const Eigen::Index r = basis.rows();
  const Eigen::Index k = basis.cols();
  if (v.size() != k) throw DimensionError("solve_in_row_span: length mismatch");
  const PAdicContext* ctx = context_of(basis);
  if (ctx == nullptr) ctx = context_of(v);
  if (ctx == nullptr) throw PreconditionError("solve_in_row_span needs a p-adic context");
  // Columns of the system are basis rows: B^T x = v.
  PAdicMatrix a(k, r + 1);
  a.leftCols(r) = basis.transpose().unaryExpr([ctx](const PAdic& x) { return x.in(*ctx); });
  a.col(r) = v.unaryExpr([ctx](const PAdic& x) { return x.in(*ctx); });
  std::vector<Eigen::Index> pivot_row(static_cast<std::size_t>(r), -1);
  Eigen::Index next = 0;
  for (Eigen::Index c = 0; c < r; ++c) {
    Eigen::Index pr = -1;
    int best = kInfiniteValuation;
    for (Eigen::Index i = next; i < k; ++i)
      if (!a(i, c).is_zero() && a(i, c).valuation() < best) {
        best = a(i, c).valuation();
        pr = i;
      }
    if (pr < 0) throw PreconditionError("solve_in_row_span: basis rows are dependent");
    a.row(pr).swap(a.row(next));
    const PAdic inv = a(next, c).inverse();
    for (Eigen::Index i = 0; i < k; ++i) {
      if (i == next || a(i, c).is_zero()) continue;
      const PAdic f = a(i, c) * inv;
      for (Eigen::Index j = c; j <= r; ++j) a(i, j) -= f * a(next, j);
      a(i, c) = PAdic::zero(*ctx);
    }
    pivot_row[static_cast<std::size_t>(c)] = next++;
  }
  PAdicVector x(r);
  for (Eigen::Index c = 0; c < r; ++c) {
    const Eigen::Index row = pivot_row[static_cast<std::size_t>(c)];
    x(c) = a(row, r) / a(row, c);
  }
  // Consistency: the residual must vanish at working precision.
  const PAdicVector residual = v - (x.transpose() * basis).transpose();
  int ref = std::min(min_valuation(v), min_valuation(basis));
  if (ref == kInfiniteValuation) ref = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!residual(i).is_zero() && residual(i).valuation() < ref + ctx->precision() / 2) {
      return std::nullopt;
    }
  }
  return x;
}

}  // namespace unipro
