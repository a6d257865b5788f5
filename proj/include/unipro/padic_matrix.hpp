#pragma once

// Dense p-adic linear algebra on Eigen containers.

#include <algorithm>
#include <optional>

#include <Eigen/Core>

#include "unipro/padic.hpp"

namespace unipro {

using PAdicMatrix = Eigen::Matrix<PAdic, Eigen::Dynamic, Eigen::Dynamic>;
using PAdicVector = Eigen::Matrix<PAdic, Eigen::Dynamic, 1>;

/// Matrix of contextful zeros.
PAdicMatrix zero_matrix(const PAdicContext& ctx, Eigen::Index rows, Eigen::Index cols);
PAdicMatrix identity_matrix(const PAdicContext& ctx, Eigen::Index n);
PAdicVector zero_vector(const PAdicContext& ctx, Eigen::Index n);

/// First context found among the entries, or nullptr if all are literals.
template <typename Derived>
const PAdicContext* context_of(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (const PAdicContext* c = m(i, j).context()) return c;
  return nullptr;
}

/// Minimum entry valuation (kInfiniteValuation for the zero matrix).
template <typename Derived>
int min_valuation(const Eigen::MatrixBase<Derived>& m) {
  int v = kInfiniteValuation;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!m(i, j).is_zero()) v = std::min(v, m(i, j).valuation());
  return v;
}

/// Entrywise agreement modulo p^m.
template <typename A, typename B>
bool agree_mod(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b, int m) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (!agree_mod(a(i, j), b(i, j), m)) return false;
  return true;
}

/// min_i v_p(a_i - b_i).
template <typename A, typename B>
int agreement_valuation(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  int v = kInfiniteValuation;
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const PAdic d = a(i, j) - b(i, j);
      if (!d.is_zero()) v = std::min(v, d.valuation());
    }
  return v;
}

/// Laplace expansion along the first row. Generic over the scalar type;
/// intended for small matrices.
template <typename Derived>
typename Derived::Scalar det_cofactor(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = m.rows();
  if (n == 0) return Scalar(1);
  if (n == 1) return m(0, 0);
  Scalar total(0);
  Dense minor(n - 1, n - 1);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index i = 1; i < n; ++i)
      for (Eigen::Index j = 0, jj = 0; j < n; ++j)
        if (j != c) minor(i - 1, jj++) = m(i, j);
    const Scalar term = m(0, c) * det_cofactor(minor);
    total = (c % 2 == 0) ? Scalar(total + term) : Scalar(total - term);
  }
  return total;
}

/// Determinant by elimination with minimal-valuation full pivoting. Every
/// multiplier is an integral p-adic number; no non-unit is ever inverted on
/// its own.
PAdic det_elimination(const PAdicMatrix& m);

struct DetTrace {
  PAdic det;
  PAdic trace;
};

/// Determinant and trace of a square matrix. Cofactor expansion up to 3x3,
/// elimination beyond.
DetTrace mat_det_trace(const PAdicMatrix& m);

/// Sum of M^k / k! with every entry of M of valuation >= 2. The series is
/// cut once k * v_min - floor((k-1)/(p-1)) >= N, which bounds every later
/// term as well.
PAdicMatrix mat_exp(const PAdicMatrix& m);

/// Solves x * basis = v for a row vector x, where the rows of `basis` are
/// linearly independent. Returns nullopt if v is not in the Q_p-span.
std::optional<PAdicVector> solve_in_row_span(const PAdicMatrix& basis, const PAdicVector& v);

}  // namespace unipro
