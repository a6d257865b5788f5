#pragma once

// Truncated Baker-Campbell-Hausdorff series log(exp X exp Y) with exact
// rational coefficients, and its evaluation on powerful Z_p-Lie algebras.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "unipro/lie_algebra.hpp"

namespace unipro {

/// One Dynkin term coeff * [[...[w_1, w_2], w_3], ..., w_m] (left-normed).
struct BchTerm {
  int degree;
  mpq_class coeff;
  std::string word;  // letters 'X' / 'Y'
};

/// All terms through max_degree. Degree 1 is X + Y; from degree 2 on only
/// words starting with "XY" appear (the "YX" mirror is folded in with a sign,
/// words starting "XX"/"YY" vanish).
struct BchSeries {
  int max_degree = 0;
  std::vector<BchTerm> terms;
};

inline constexpr int kMaxGeneralDegree = 20;

/// Coefficients of the associative series log(exp X exp Y) for all words of
/// length m (index = word bits, first letter most significant, X = 0).
const std::vector<mpq_class>& associative_log_coefficients(int m);

/// Cached; D <= kMaxGeneralDegree, otherwise BudgetExceeded.
const BchSeries& bch_coefficients(int D);

/// Coefficients of the metabelian normal form: in a Lie algebra whose derived
/// algebra is abelian, the degree-m part of BCH(X, Y) equals
///   sum_{i+j=m-2} C(m, i) ad_X^i ad_Y^j [X, Y]   (ad_Z(w) = [w, Z]).
/// Returned table: c[m][i] for 2 <= m <= D.
const std::vector<std::vector<mpq_class>>& metabelian_coefficients(int D);

/// floor((m-1)/(p-1)) + floor(log_p m): bound on v_p of degree-m denominators.
int denominator_envelope(std::uint32_t p, int m);

struct TruncationCertificate {
  std::uint32_t p = 0;
  int precision = 0;  // N the bound is certified against
  int v0 = 0;         // valuation floor of the inputs
  int degree = 0;     // D
  // Indexed by degree m = 0 .. D + 2 (entry 0 unused).
  std::vector<int> term_bound;               // m * v0 - envelope(m)
  std::vector<int> denominator_valuation;    // actual, from the metabelian table
};

/// Smallest D such that every m > D has m * v0 - envelope(m) >= N. Needs
/// v0 >= 1 (v0 >= 2 for p = 2). Also cross-checks the envelope against the
/// actual denominators through degree D + 2 (ConsistencyError on failure).
TruncationCertificate truncation_degree(std::uint32_t p, int precision, int v0);
TruncationCertificate truncation_degree(const PAdicContext& ctx, int v0);

/// Exact image of a rational in Q_p. Throws UndefinedInverse for 0 denominators.
PAdic rational_to_padic(const PAdicContext& ctx, const mpq_class& q);

enum class BchPath { Auto, General, Metabelian };

/// BCH evaluation on a fixed powerful algebra. Inputs are coordinate vectors
/// in Z_p^k. With c the minimum valuation of the structure constants, the
/// degree-m part has valuation >= (m-1)c - envelope(m), so the series is cut
/// at D = truncation_degree(p, N + c, c).
class BchEngine {
 public:
  explicit BchEngine(const LieAlgebraZp& L, BchPath path = BchPath::Auto);

  const LieAlgebraZp& algebra() const { return L_; }
  const TruncationCertificate& certificate() const { return cert_; }
  int degree() const { return cert_.degree; }
  BchPath path() const { return path_; }

  /// BCH(u, v) through the certified degree.
  LieVector eval(const LieVector& u, const LieVector& v) const;
  /// Through an explicit degree, on either path. Degree-by-degree parts are
  /// written to parts (index m) if given.
  LieVector eval_general(const LieVector& u, const LieVector& v, int D,
                         std::vector<LieVector>* parts = nullptr) const;
  LieVector eval_metabelian(const LieVector& u, const LieVector& v, int D,
                            std::vector<LieVector>* parts = nullptr) const;

 private:
  struct Rows {
    std::mutex mu;
    std::map<int, std::unique_ptr<const std::vector<PAdic>>> general;     // m -> [suffix bits]
    std::map<int, std::unique_ptr<const std::vector<PAdic>>> metabelian;  // m -> [i]
  };

  void check_input(const LieVector& u) const;
  void check_parts(const std::vector<LieVector>& parts) const;
  const std::vector<PAdic>& general_row(int m) const;
  const std::vector<PAdic>& metabelian_row(int m) const;
  bool negligible(const LieVector& v, int D) const;

  LieAlgebraZp L_;
  BchPath path_;
  int c_;  // min structure-constant valuation, capped
  TruncationCertificate cert_;
  std::shared_ptr<Rows> rows_;
};

/// Text dump: one line per term, "degree numerator/denominator word".
std::string dump_series(const BchSeries& s);

}  // namespace unipro
