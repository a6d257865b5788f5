#include "unipro/padic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <utility>

namespace unipro {

namespace {

constexpr u128 kResidueLimit = static_cast<u128>(1) << 120;

u128 mul_mod_raw(u128 a, u128 b, u128 m) {
  if (m <= UINT64_MAX) return (a * b) % m;
  // Byte-wise Horner; m < 2^120 keeps every intermediate below 2^128.
  u128 r = 0;
  for (int shift = 112; shift >= 0; shift -= 8) {
    r = (r << 8) % m;
    r = (r + a * ((b >> shift) & 0xff)) % m;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q = 2; q * q <= n; ++q) {
    if (n % q == 0) return false;
  }
  return true;
}

PAdicContext::PAdicContext(std::uint32_t p, int precision) : p_(p), n_(precision) {
  pow_.reserve(static_cast<std::size_t>(precision) + 1);
  pow_.push_back(1);
  for (int i = 0; i < precision; ++i) pow_.push_back(pow_.back() * p);
}

const PAdicContext& PAdicContext::get(std::uint32_t p, int precision) {
  if (!is_prime(p)) throw PreconditionError("p = " + std::to_string(p) + " is not prime");
  if (precision < 1) throw PreconditionError("precision must be at least 1");
  u128 m = 1;
  for (int i = 0; i < precision; ++i) {
    m *= p;
    if (m >= kResidueLimit) {
      throw PreconditionError("p^N exceeds the 120-bit residue budget (p = " + std::to_string(p) +
                              ", N = " + std::to_string(precision) + ")");
    }
  }
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, int>, std::unique_ptr<PAdicContext>> interned;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = interned[{p, precision}];
  if (!slot) slot.reset(new PAdicContext(p, precision));
  return *slot;
}

u128 PAdicContext::mul_mod(u128 a, u128 b) const { return mul_mod_raw(a, b, modulus()); }

u128 PAdicContext::add_mod(u128 a, u128 b) const {
  const u128 m = modulus();
  u128 s = a + b;
  return s >= m ? s - m : s;
}

u128 PAdicContext::inverse_unit(u128 u) const {
  if (u % p_ == 0) throw UndefinedInverse("residue is not a unit");
  // Inverse mod p by brute force over small p is too slow for large p;
  // use Fermat on the 64-bit residue instead.
  const std::uint64_t up = static_cast<std::uint64_t>(u % p_);
  std::uint64_t x = 1, base = up, e = p_ - 2;
  while (e) {
    if (e & 1) x = static_cast<std::uint64_t>((static_cast<u128>(x) * base) % p_);
    base = static_cast<std::uint64_t>((static_cast<u128>(base) * base) % p_);
    e >>= 1;
  }
  // Newton lifting: x <- x (2 - u x), doubling correct digits each step.
  u128 inv = x;
  const u128 m = modulus();
  for (int digits = 1; digits < n_; digits *= 2) {
    const u128 ux = mul_mod(u % m, inv);
    const u128 two_minus = add_mod(2 % m, m - ux);
    inv = mul_mod(inv, two_minus);
  }
  return inv % m;
}

// ---------------------------------------------------------------------------

PAdic::PAdic(const PAdicContext& ctx, long long value) : ctx_(&ctx) {
  if (value == 0) return;
  const bool negative = value < 0;
  unsigned long long mag = negative ? 0ULL - static_cast<unsigned long long>(value)
                                    : static_cast<unsigned long long>(value);
  int v = 0;
  while (mag % ctx.prime() == 0) {
    mag /= ctx.prime();
    ++v;
  }
  val_ = v;
  const u128 m = ctx.modulus();
  unit_ = static_cast<u128>(mag) % m;
  if (negative) unit_ = (m - unit_) % m;
}

PAdic PAdic::zero(const PAdicContext& ctx) {
  PAdic z;
  z.ctx_ = &ctx;
  return z;
}

PAdic PAdic::from_parts(const PAdicContext& ctx, int valuation, u128 unit) {
  const u128 m = ctx.modulus();
  unit %= m;
  PAdic r = zero(ctx);
  if (unit == 0) return r;
  int v = valuation;
  while (unit % ctx.prime() == 0) {
    unit /= ctx.prime();
    ++v;
  }
  r.val_ = v;
  r.unit_ = unit;
  return r;
}

PAdic PAdic::from_residue(const PAdicContext& ctx, u128 residue) {
  return from_parts(ctx, 0, residue);
}

int PAdic::valuation() const {
  if (ctx_ == nullptr) {
    if (lit_ == 0) return kInfiniteValuation;
    throw PreconditionError("valuation of a context-free literal is undefined");
  }
  return val_;
}

PAdic PAdic::in(const PAdicContext& ctx) const {
  if (ctx_ == &ctx) return *this;
  if (ctx_ != nullptr) throw ContextMismatch("cannot move a scalar between p-adic contexts");
  return PAdic(ctx, lit_);
}

const PAdicContext& PAdic::common(const PAdic& a, const PAdic& b) {
  if (a.ctx_ && b.ctx_ && a.ctx_ != b.ctx_) {
    throw ContextMismatch("scalars from different p-adic contexts");
  }
  return a.ctx_ ? *a.ctx_ : *b.ctx_;
}

PAdic PAdic::operator-() const {
  PAdic r = *this;
  if (ctx_ == nullptr) {
    if (lit_ == LLONG_MIN) throw PreconditionError("literal overflow");
    r.lit_ = -lit_;
  } else if (val_ != kInfiniteValuation) {
    r.unit_ = ctx_->modulus() - unit_;
  }
  return r;
}

PAdic& PAdic::operator+=(const PAdic& o) {
  if (ctx_ == nullptr && o.ctx_ == nullptr) {
    if (__builtin_add_overflow(lit_, o.lit_, &lit_)) throw PreconditionError("literal overflow");
    return *this;
  }
  const PAdicContext& ctx = common(*this, o);
  PAdic a = in(ctx);
  const PAdic b = o.in(ctx);
  if (b.is_zero()) return *this = a;
  if (a.is_zero()) return *this = b;
  const PAdic* lo = &a;
  const PAdic* hi = &b;
  if (hi->val_ < lo->val_) std::swap(lo, hi);
  const int gap = hi->val_ - lo->val_;
  if (gap >= ctx.precision()) return *this = *lo;
  const u128 s = ctx.add_mod(lo->unit_, ctx.mul_mod(ctx.power(gap), hi->unit_));
  return *this = from_parts(ctx, lo->val_, s);
}

PAdic& PAdic::operator-=(const PAdic& o) { return *this += -o; }

PAdic& PAdic::operator*=(const PAdic& o) {
  if (ctx_ == nullptr && o.ctx_ == nullptr) {
    if (__builtin_mul_overflow(lit_, o.lit_, &lit_)) throw PreconditionError("literal overflow");
    return *this;
  }
  const PAdicContext& ctx = common(*this, o);
  const PAdic a = in(ctx);
  const PAdic b = o.in(ctx);
  if (a.is_zero() || b.is_zero()) return *this = zero(ctx);
  PAdic r = zero(ctx);
  r.val_ = a.val_ + b.val_;
  r.unit_ = ctx.mul_mod(a.unit_, b.unit_);
  return *this = r;
}

PAdic& PAdic::operator/=(const PAdic& o) {
  if (ctx_ == nullptr && o.ctx_ == nullptr) {
    if (o.lit_ == 0) throw UndefinedInverse("division by zero");
    if (lit_ % o.lit_ != 0) throw PreconditionError("inexact literal division needs a context");
    lit_ /= o.lit_;
    return *this;
  }
  const PAdicContext& ctx = common(*this, o);
  return *this *= o.in(ctx).inverse();
}

PAdic PAdic::inverse() const {
  if (is_zero()) throw UndefinedInverse("inverse of zero");
  if (ctx_ == nullptr) {
    if (lit_ == 1 || lit_ == -1) return *this;
    throw PreconditionError("inverse of a context-free literal needs a context");
  }
  PAdic r = zero(*ctx_);
  r.val_ = -val_;
  r.unit_ = ctx_->inverse_unit(unit_);
  return r;
}

PAdic PAdic::shifted(int n) const {
  if (ctx_ == nullptr) throw PreconditionError("shift of a context-free literal needs a context");
  if (is_zero()) return *this;
  PAdic r = *this;
  r.val_ += n;
  return r;
}

u128 PAdic::residue(int m) const {
  if (ctx_ == nullptr) throw PreconditionError("residue of a context-free literal needs a context");
  if (m < 0 || m > ctx_->precision()) throw PrecisionError("residue modulus exceeds precision");
  if (is_zero() || val_ >= m) return 0;
  if (val_ < 0) throw PreconditionError("residue of a non-integral p-adic number");
  const u128 pm = ctx_->power(m);
  return (ctx_->power(val_) * (unit_ % ctx_->power(m - val_))) % pm;
}

// ---------------------------------------------------------------------------

bool agree_mod(const PAdic& a, const PAdic& b, int m) {
  const PAdic diff = a - b;
  if (diff.is_zero()) return true;
  return diff.valuation() >= m;
}

PAdic divide_by_p_power(const PAdic& a, int n, bool integral_required) {
  if (n < 0) throw PreconditionError("divide_by_p_power: negative exponent");
  if (a.is_zero()) return a;
  if (integral_required && a.valuation() < n) {
    throw PreconditionError("element is not divisible by p^" + std::to_string(n) + " in Z_p");
  }
  return a.shifted(-n);
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_digit_string(const PAdic& a, int ndigits) {
  const PAdicContext* ctx = a.context();
  if (ctx == nullptr) throw PreconditionError("digit string of a context-free literal");
  if (!a.is_zero() && a.valuation() < 0) throw PreconditionError("digit string of a non-integral value");
  std::vector<int> digits;
  const int v = a.is_zero() ? ndigits : std::min(a.valuation(), ndigits);
  digits.assign(static_cast<std::size_t>(v), 0);
  u128 u = a.unit();
  for (int i = v; i < ndigits && i - v < ctx->precision(); ++i) {
    digits.push_back(static_cast<int>(u % ctx->prime()));
    u /= ctx->prime();
  }
  while (digits.size() > 1 && digits.back() == 0) digits.pop_back();
  if (digits.empty()) digits.push_back(0);
  std::ostringstream os;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i) os << '.';
    os << digits[i];
  }
  return os.str();
}

PAdic from_digit_string(const PAdicContext& ctx, const std::string& text) {
  u128 residue = 0;
  int pos = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, '.')) {
    if (item.empty()) throw PreconditionError("empty digit in p-adic digit string '" + text + "'");
    long long digit = 0;
    try {
      std::size_t used = 0;
      digit = std::stoll(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw PreconditionError("bad digit '" + item + "' in p-adic digit string");
    }
    if (digit < 0 || digit >= static_cast<long long>(ctx.prime())) {
      throw PreconditionError("digit " + item + " out of range for p = " + std::to_string(ctx.prime()));
    }
    if (pos < ctx.precision()) residue += static_cast<u128>(digit) * ctx.power(pos);
    ++pos;
  }
  return PAdic::from_residue(ctx, residue);
}

PAdic parse_scalar(const PAdicContext& ctx, const std::string& text) {
  if (text.find('.') != std::string::npos) return from_digit_string(ctx, text);
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return PAdic(ctx, v);
  } catch (const std::exception&) {
    throw PreconditionError("cannot parse p-adic scalar '" + text + "'");
  }
}

std::optional<long long> to_small_integer(const PAdic& a) {
  if (a.is_literal()) return a.literal();
  if (a.is_zero()) return 0;
  if (a.valuation() < 0) return std::nullopt;
  const PAdicContext& ctx = *a.context();
  const u128 m = ctx.modulus();
  const u128 r = a.residue(ctx.precision());
  const u128 limit = static_cast<u128>(1) << 62;
  if (r <= m / 2) {
    if (r < limit) return static_cast<long long>(r);
  } else if (m - r < limit) {
    return -static_cast<long long>(m - r);
  }
  return std::nullopt;
}

std::string to_string(const PAdic& a) {
  if (a.is_literal()) return std::to_string(a.literal());
  if (a.is_zero()) return "0";
  const PAdicContext& ctx = *a.context();
  if (a.valuation() < 0) {
    return "p^" + std::to_string(a.valuation()) + "*(" +
           to_string(PAdic::from_parts(ctx, 0, a.unit())) + ")";
  }
  if (auto small = to_small_integer(a); small && *small > -1000000000000LL && *small < 1000000000000LL) {
    return std::to_string(*small);
  }
  return to_digit_string(a, ctx.precision());
}

}  // namespace unipro
