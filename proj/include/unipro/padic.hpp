#pragma once

// Fixed-precision p-adic scalars.
//
// An element of Q_p is stored as p^v * u with u a unit residue modulo p^N
// (N significant digits). Zero is canonical. Elements carry a pointer to an
// interned PAdicContext, so contexts compare by address.
//
// A scalar without a context is an exact integer literal. Literals exist so
// that generic code (Eigen in particular) can write Scalar(0) and Scalar(1);
// they are promoted to the other operand's context on first contact.

#include <climits>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "unipro/errors.hpp"

namespace unipro {

using u128 = unsigned __int128;

inline constexpr int kInfiniteValuation = INT_MAX;

class PAdicContext {
 public:
  /// Interned context for (p, N). Throws PreconditionError if p is not prime,
  /// N < 1, or p^N does not fit the 120-bit residue budget.
  static const PAdicContext& get(std::uint32_t p, int precision);

  std::uint32_t prime() const { return p_; }
  int precision() const { return n_; }
  u128 modulus() const { return pow_.back(); }
  /// p^e for 0 <= e <= N.
  u128 power(int e) const { return pow_[static_cast<std::size_t>(e)]; }

  u128 mul_mod(u128 a, u128 b) const;
  u128 add_mod(u128 a, u128 b) const;
  /// Inverse of a residue coprime to p, modulo p^N.
  u128 inverse_unit(u128 u) const;

  PAdicContext(const PAdicContext&) = delete;
  PAdicContext& operator=(const PAdicContext&) = delete;

 private:
  PAdicContext(std::uint32_t p, int precision);

  std::uint32_t p_;
  int n_;
  std::vector<u128> pow_;
};

bool is_prime(std::uint64_t n);

class PAdic {
 public:
  PAdic() = default;
  // NOLINTNEXTLINE(google-explicit-constructor): Eigen relies on Scalar(int).
  PAdic(long long literal) : lit_(literal) {}
  PAdic(int literal) : lit_(literal) {}
  PAdic(const PAdicContext& ctx, long long value);

  /// p^valuation * unit; unit is reduced mod p^N and must be coprime to p
  /// (a multiple of p is renormalized).
  static PAdic from_parts(const PAdicContext& ctx, int valuation, u128 unit);
  /// Integral element from a residue r in [0, p^N).
  static PAdic from_residue(const PAdicContext& ctx, u128 residue);
  static PAdic zero(const PAdicContext& ctx);
  static PAdic one(const PAdicContext& ctx) { return {ctx, 1}; }

  const PAdicContext* context() const { return ctx_; }
  bool is_literal() const { return ctx_ == nullptr; }
  long long literal() const { return lit_; }

  bool is_zero() const { return ctx_ == nullptr ? lit_ == 0 : val_ == kInfiniteValuation; }
  /// v_p; kInfiniteValuation for zero. Throws for a nonzero literal.
  int valuation() const;
  bool is_unit() const { return valuation() == 0; }
  bool is_integral() const { return valuation() >= 0; }
  u128 unit() const { return unit_; }

  /// Same value promoted into ctx (identity if already there).
  PAdic in(const PAdicContext& ctx) const;

  PAdic operator-() const;
  PAdic& operator+=(const PAdic& o);
  PAdic& operator-=(const PAdic& o);
  PAdic& operator*=(const PAdic& o);
  PAdic& operator/=(const PAdic& o);

  /// Multiplicative inverse in Q_p. Throws UndefinedInverse for zero.
  PAdic inverse() const;
  /// this * p^n, n of either sign.
  PAdic shifted(int n) const;

  /// Value modulo p^m as a residue in [0, p^m). Requires an integral value
  /// and 0 <= m <= N.
  u128 residue(int m) const;

  friend PAdic operator+(PAdic a, const PAdic& b) { return a += b; }
  friend PAdic operator-(PAdic a, const PAdic& b) { return a -= b; }
  friend PAdic operator*(PAdic a, const PAdic& b) { return a *= b; }
  friend PAdic operator/(PAdic a, const PAdic& b) { return a /= b; }
  /// Equality at working precision: the difference rounds to zero.
  friend bool operator==(const PAdic& a, const PAdic& b) { return (a - b).is_zero(); }

 private:
  static const PAdicContext& common(const PAdic& a, const PAdic& b);

  const PAdicContext* ctx_ = nullptr;
  long long lit_ = 0;
  int val_ = kInfiniteValuation;
  u128 unit_ = 0;
};

/// v_p(a - b) >= m.
bool agree_mod(const PAdic& a, const PAdic& b, int m);

/// a / p^n. With integral_required the result must stay in Z_p.
PAdic divide_by_p_power(const PAdic& a, int n, bool integral_required = false);

/// Little-endian digits d0.d1.d2... of an integral element modulo p^ndigits.
std::string to_digit_string(const PAdic& a, int ndigits);
/// Parses "d0.d1.d2..." (little-endian digits, each in [0, p)).
PAdic from_digit_string(const PAdicContext& ctx, const std::string& digits);
/// Parses either a decimal integer or a digit string (contains '.').
PAdic parse_scalar(const PAdicContext& ctx, const std::string& text);

/// Symmetric integer representative of an integral element modulo p^N, if
/// it fits in a long long.
std::optional<long long> to_small_integer(const PAdic& a);
/// Human-readable form: signed integer when small, digit string otherwise,
/// "p^-k*(...)" for non-integral values.
std::string to_string(const PAdic& a);

std::string u128_to_string(u128 v);

}  // namespace unipro

namespace Eigen {

template <>
struct NumTraits<unipro::PAdic> : GenericNumTraits<unipro::PAdic> {
  using Real = unipro::PAdic;
  using NonInteger = unipro::PAdic;
  using Literal = unipro::PAdic;
  using Nested = unipro::PAdic;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 8,
    MulCost = 16
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline Real highest() { return Real(0); }
  static inline Real lowest() { return Real(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen
