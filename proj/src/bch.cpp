#include "unipro/bch.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace unipro {

namespace {

using i128 = __int128;

mpz_class to_mpz(i128 v) {
  const bool neg = v < 0;
  u128 mag = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  mpz_class out(static_cast<unsigned long>(static_cast<std::uint64_t>(mag >> 64)));
  out <<= 64;
  out += mpz_class(static_cast<unsigned long>(static_cast<std::uint64_t>(mag)));
  return neg ? mpz_class(-out) : out;
}

mpz_class to_mpz(u128 v) {
  mpz_class out(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  out <<= 64;
  out += mpz_class(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return out;
}

u128 to_u128(const mpz_class& v) {
  // v in [0, 2^128).
  const mpz_class hi = v >> 64;
  const mpz_class lo = v - (hi << 64);
  return (static_cast<u128>(hi.get_ui()) << 64) | static_cast<u128>(lo.get_ui());
}

std::uint64_t binom(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

i128 checked_mul_add(i128 acc, i128 a, i128 b) {
  i128 prod;
  if (__builtin_mul_overflow(a, b, &prod) || __builtin_add_overflow(acc, prod, &acc)) {
    throw ConsistencyError("BCH coefficient expansion overflowed 128 bits");
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Associative coefficients. Z = exp(X) exp(Y) - 1 = sum_{a+b>=1} X^a Y^b/(a!b!).
// cur[l][w] holds l! * coeff(Z^n, w), an integer; appending a block X^a Y^b to
// a word of length l multiplies by the multinomial (l+a+b)!/(l! a! b!).

struct AssocCache {
  std::mutex mu;
  int max_len = 0;
  std::vector<std::unique_ptr<const std::vector<mpq_class>>> by_len;
};

AssocCache& assoc_cache() {
  static AssocCache c;
  return c;
}

void compute_associative(int D, AssocCache& cache) {
  const std::size_t L = static_cast<std::size_t>(D);
  std::vector<std::vector<i128>> cur(L + 1), next(L + 1);
  std::vector<std::vector<mpz_class>> acc(L + 1);
  for (std::size_t l = 0; l <= L; ++l) {
    cur[l].assign(std::size_t{1} << l, 0);
    acc[l].assign(std::size_t{1} << l, 0);
  }
  unsigned long lcm = 1;
  for (unsigned long n = 2; n <= static_cast<unsigned long>(D); ++n) lcm = std::lcm(lcm, n);

  cur[0][0] = 1;  // Z^0
  for (int n = 1; n <= D; ++n) {
    for (std::size_t l = 0; l <= L; ++l) next[l].assign(std::size_t{1} << l, 0);
    for (int l = n - 1; l < D; ++l) {
      for (std::size_t w = 0; w < cur[static_cast<std::size_t>(l)].size(); ++w) {
        const i128 g = cur[static_cast<std::size_t>(l)][w];
        if (g == 0) continue;
        for (int a = 0; l + a <= D; ++a)
          for (int b = (a == 0 ? 1 : 0); l + a + b <= D; ++b) {
            const int l2 = l + a + b;
            const i128 mult = static_cast<i128>(binom(l2, l)) * static_cast<i128>(binom(a + b, a));
            const std::size_t w2 = (w << (a + b)) | ((std::size_t{1} << b) - 1);
            auto& slot = next[static_cast<std::size_t>(l2)][w2];
            slot = checked_mul_add(slot, g, mult);
          }
      }
    }
    std::swap(cur, next);
    const unsigned long scale = lcm / static_cast<unsigned long>(n);
    for (int l = n; l <= D; ++l)
      for (std::size_t w = 0; w < cur[static_cast<std::size_t>(l)].size(); ++w) {
        const i128 g = cur[static_cast<std::size_t>(l)][w];
        if (g == 0) continue;
        const mpz_class t = to_mpz(g) * scale;
        if (n % 2 == 1) {
          acc[static_cast<std::size_t>(l)][w] += t;
        } else {
          acc[static_cast<std::size_t>(l)][w] -= t;
        }
      }
  }
  cache.by_len.resize(L + 1);
  mpz_class fact = 1;
  for (int l = 1; l <= D; ++l) {
    fact *= l;
    if (l <= cache.max_len) continue;
    auto row = std::make_unique<std::vector<mpq_class>>(acc[static_cast<std::size_t>(l)].size());
    const mpz_class den = fact * lcm;
    for (std::size_t w = 0; w < row->size(); ++w) {
      (*row)[w] = mpq_class(acc[static_cast<std::size_t>(l)][w], den);
      (*row)[w].canonicalize();
    }
    cache.by_len[static_cast<std::size_t>(l)] = std::move(row);
  }
  cache.max_len = D;
}

// ---------------------------------------------------------------------------
// Metabelian aggregation. Words are tracked only through their first two
// letters (XY or YX; XX and YY give vanishing brackets) and the number of X's
// among the remaining letters.

enum : int { kEmpty = 0, kX = 1, kY = 2, kXY = 3, kYX = 4 };

struct MetaState {
  int len, kind, xs;
  bool operator<(const MetaState& o) const {
    return std::tie(len, kind, xs) < std::tie(o.len, o.kind, o.xs);
  }
};

std::vector<std::vector<mpq_class>> compute_metabelian(int D) {
  // counts: len! * coefficient in Z^n, aggregated per state.
  std::map<MetaState, mpz_class> cur{{{0, kEmpty, 0}, 1}};
  std::map<MetaState, mpq_class> acc;
  for (int n = 1; n <= D; ++n) {
    std::map<MetaState, mpz_class> next;
    for (const auto& [s, g] : cur) {
      for (int a = 0; s.len + a <= D; ++a)
        for (int b = (a == 0 ? 1 : 0); s.len + a + b <= D; ++b) {
          MetaState t{s.len + a + b, -1, 0};
          switch (s.kind) {
            case kEmpty:
              if (a + b == 1) {
                t.kind = a == 1 ? kX : kY;
              } else if (a == 1) {
                t.kind = kXY;
              }
              break;
            case kX:
              if (a == 0) t.kind = kXY;
              break;
            case kY:
              if (a >= 1) {
                t.kind = kYX;
                t.xs = a - 1;
              }
              break;
            default:
              t.kind = s.kind;
              t.xs = s.xs + a;
          }
          if (t.kind < 0) continue;
          mpz_class mult;
          mpz_bin_uiui(mult.get_mpz_t(), static_cast<unsigned long>(t.len), static_cast<unsigned long>(s.len));
          mpz_class m2;
          mpz_bin_uiui(m2.get_mpz_t(), static_cast<unsigned long>(a + b), static_cast<unsigned long>(a));
          next[t] += g * mult * m2;
        }
    }
    cur = std::move(next);
    for (const auto& [s, g] : cur) {
      if (s.len < 2) continue;
      mpz_class fact;
      mpz_fac_ui(fact.get_mpz_t(), static_cast<unsigned long>(s.len));
      mpq_class term(g, fact * n);
      term.canonicalize();
      if (n % 2 == 1) {
        acc[s] += term;
      } else {
        acc[s] -= term;
      }
    }
  }
  std::vector<std::vector<mpq_class>> out(static_cast<std::size_t>(D) + 1);
  for (int m = 2; m <= D; ++m) out[static_cast<std::size_t>(m)].assign(static_cast<std::size_t>(m - 1), 0);
  for (const auto& [s, q] : acc) {
    auto& c = out[static_cast<std::size_t>(s.len)][static_cast<std::size_t>(s.xs)];
    if (s.kind == kXY) {
      c += q / s.len;
    } else {
      c -= q / s.len;
    }
  }
  return out;
}

int vp(const mpz_class& z, std::uint32_t p) {
  if (z == 0) return kInfiniteValuation;
  mpz_class t = z;
  return static_cast<int>(mpz_remove(t.get_mpz_t(), t.get_mpz_t(), mpz_class(p).get_mpz_t()));
}

}  // namespace

const std::vector<mpq_class>& associative_log_coefficients(int m) {
  if (m < 1) throw PreconditionError("word length must be positive");
  if (m > kMaxGeneralDegree) {
    throw BudgetExceeded("general BCH expansion is limited to degree " + std::to_string(kMaxGeneralDegree));
  }
  auto& cache = assoc_cache();
  std::lock_guard lock(cache.mu);
  if (m > cache.max_len) compute_associative(m, cache);
  return *cache.by_len[static_cast<std::size_t>(m)];
}

const BchSeries& bch_coefficients(int D) {
  if (D < 1) throw PreconditionError("BCH degree must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const BchSeries>> cache;
  const auto& top = associative_log_coefficients(D);  // computes all lengths <= D
  (void)top;
  std::lock_guard lock(mu);
  auto it = cache.find(D);
  if (it != cache.end()) return *it->second;
  auto s = std::make_unique<BchSeries>();
  s->max_degree = D;
  s->terms.push_back({1, 1, "X"});
  s->terms.push_back({1, 1, "Y"});
  for (int m = 2; m <= D; ++m) {
    const auto& c = associative_log_coefficients(m);
    const std::size_t rest = static_cast<std::size_t>(m - 2);
    for (std::size_t suf = 0; suf < (std::size_t{1} << rest); ++suf) {
      const mpq_class q = (c[(std::size_t{1} << rest) | suf] - c[(std::size_t{2} << rest) | suf]) / m;
      if (q == 0) continue;
      std::string word = "XY";
      for (std::size_t b = rest; b-- > 0;) word += ((suf >> b) & 1) ? 'Y' : 'X';
      s->terms.push_back({m, q, std::move(word)});
    }
  }
  return *cache.emplace(D, std::move(s)).first->second;
}

const std::vector<std::vector<mpq_class>>& metabelian_coefficients(int D) {
  if (D < 1) throw PreconditionError("BCH degree must be positive");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<const std::vector<std::vector<mpq_class>>>> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(D);
  if (it != cache.end()) return *it->second;
  auto t = std::make_unique<const std::vector<std::vector<mpq_class>>>(compute_metabelian(D));
  return *cache.emplace(D, std::move(t)).first->second;
}

int denominator_envelope(std::uint32_t p, int m) {
  int lg = 0;
  for (std::uint64_t q = p; q <= static_cast<std::uint64_t>(m); q *= p) ++lg;
  return (m - 1) / static_cast<int>(p - 1) + lg;
}

TruncationCertificate truncation_degree(std::uint32_t p, int precision, int v0) {
  if (!is_prime(p)) throw PreconditionError("p must be prime");
  if (precision < 1) throw PreconditionError("precision must be positive");
  const int need = p == 2 ? 2 : 1;
  if (v0 < need) {
    throw PreconditionError("valuation floor " + std::to_string(v0) + " is too small for BCH convergence (need " +
                            std::to_string(need) + ")");
  }
  TruncationCertificate cert;
  cert.p = p;
  cert.precision = precision;
  cert.v0 = v0;
  // m * v0 - envelope(m) >= m/2 - log2(m) >= N once m >= 4N + 64.
  const int limit = 4 * precision + 64;
  int D = 1;
  for (int m = 2; m <= limit; ++m) {
    const long long bound = static_cast<long long>(m) * v0 - denominator_envelope(p, m);
    if (bound < precision) D = m;
  }
  cert.degree = D;
  cert.term_bound.assign(static_cast<std::size_t>(D) + 3, 0);
  cert.denominator_valuation.assign(static_cast<std::size_t>(D) + 3, 0);
  const auto& table = metabelian_coefficients(D + 2);
  for (int m = 1; m <= D + 2; ++m) {
    cert.term_bound[static_cast<std::size_t>(m)] =
        static_cast<int>(std::min<long long>(static_cast<long long>(m) * v0, INT_MAX / 2)) - denominator_envelope(p, m);
    int worst = 0;
    if (m >= 2)
      for (const auto& q : table[static_cast<std::size_t>(m)])
        if (q != 0) worst = std::max(worst, vp(q.get_den(), p));
    cert.denominator_valuation[static_cast<std::size_t>(m)] = worst;
    if (worst > denominator_envelope(p, m)) {
      throw ConsistencyError("degree-" + std::to_string(m) + " denominators exceed the valuation envelope");
    }
  }
  return cert;
}

TruncationCertificate truncation_degree(const PAdicContext& ctx, int v0) {
  return truncation_degree(ctx.prime(), ctx.precision(), v0);
}

PAdic rational_to_padic(const PAdicContext& ctx, const mpq_class& q) {
  if (q.get_den() == 0) throw UndefinedInverse("rational with zero denominator");
  if (q == 0) return PAdic::zero(ctx);
  mpz_class num = q.get_num(), den = q.get_den();
  const mpz_class P(ctx.prime());
  const int vn = static_cast<int>(mpz_remove(num.get_mpz_t(), num.get_mpz_t(), P.get_mpz_t()));
  const int vd = static_cast<int>(mpz_remove(den.get_mpz_t(), den.get_mpz_t(), P.get_mpz_t()));
  const mpz_class mod = to_mpz(ctx.modulus());
  mpz_class rn, rd;
  mpz_mod(rn.get_mpz_t(), num.get_mpz_t(), mod.get_mpz_t());
  mpz_mod(rd.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  const u128 unit = ctx.mul_mod(to_u128(rn), ctx.inverse_unit(to_u128(rd)));
  return PAdic::from_parts(ctx, vn - vd, unit);
}

// ---------------------------------------------------------------------------

BchEngine::BchEngine(const LieAlgebraZp& L, BchPath path)
    : L_(L), path_(path), rows_(std::make_shared<Rows>()) {
  if (!is_powerful_algebra(L_)) {
    throw PreconditionError("BCH evaluation needs a powerful algebra ((L,L) in pL, in 4L for p = 2)");
  }
  const int n = L_.context().precision();
  c_ = std::min(L_.min_constant_valuation(), n + 1);
  cert_ = truncation_degree(L_.context().prime(), n + c_, c_);
  if (path_ == BchPath::Auto) path_ = is_metabelian(L_) ? BchPath::Metabelian : BchPath::General;
  if (path_ == BchPath::Metabelian && !is_metabelian(L_)) {
    throw PreconditionError("metabelian BCH path requested for a non-metabelian algebra");
  }
  if (path_ == BchPath::General && cert_.degree > kMaxGeneralDegree) {
    throw BudgetExceeded("general BCH path would need degree " + std::to_string(cert_.degree) +
                         "; lower the precision");
  }
}

void BchEngine::check_input(const LieVector& u) const {
  if (u.size() != L_.rank()) throw DimensionError("BCH input has the wrong length");
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (!u(i).is_zero() && u(i).valuation() < 0) throw PreconditionError("BCH inputs must have coordinates in Z_p");
}

bool BchEngine::negligible(const LieVector& v, int D) const {
  // Later brackets never lower the valuation and coefficients lose at most
  // the envelope, so such a vector cannot reach p^N any more.
  const int n = L_.context().precision();
  return min_valuation(v) >= n + denominator_envelope(L_.context().prime(), D);
}

void BchEngine::check_parts(const std::vector<LieVector>& parts) const {
  const std::uint32_t p = L_.context().prime();
  for (std::size_t m = 2; m < parts.size(); ++m) {
    const int v = min_valuation(parts[m]);
    if (v == kInfiniteValuation) continue;
    const long long floor = static_cast<long long>(m - 1) * c_ - denominator_envelope(p, static_cast<int>(m));
    if (v < floor) {
      throw ConsistencyError("BCH degree-" + std::to_string(m) + " part has valuation " + std::to_string(v) +
                             ", below the certified floor " + std::to_string(floor));
    }
  }
}

const std::vector<PAdic>& BchEngine::general_row(int m) const {
  std::lock_guard lock(rows_->mu);
  auto it = rows_->general.find(m);
  if (it != rows_->general.end()) return *it->second;
  const auto& c = associative_log_coefficients(m);
  const std::size_t rest = static_cast<std::size_t>(m - 2);
  auto row = std::make_unique<std::vector<PAdic>>(std::size_t{1} << rest);
  const std::uint32_t p = L_.context().prime();
  for (std::size_t suf = 0; suf < row->size(); ++suf) {
    const mpq_class q = (c[(std::size_t{1} << rest) | suf] - c[(std::size_t{2} << rest) | suf]) / m;
    if (q != 0 && vp(q.get_den(), p) > denominator_envelope(p, m)) {
      throw ConsistencyError("degree-" + std::to_string(m) + " Dynkin denominator exceeds the envelope");
    }
    (*row)[suf] = rational_to_padic(L_.context(), q);
  }
  return *rows_->general.emplace(m, std::move(row)).first->second;
}

const std::vector<PAdic>& BchEngine::metabelian_row(int m) const {
  std::lock_guard lock(rows_->mu);
  auto it = rows_->metabelian.find(m);
  if (it != rows_->metabelian.end()) return *it->second;
  const auto& table = metabelian_coefficients(std::max(m, cert_.degree + 2));
  auto row = std::make_unique<std::vector<PAdic>>();
  for (const auto& q : table[static_cast<std::size_t>(m)]) row->push_back(rational_to_padic(L_.context(), q));
  return *rows_->metabelian.emplace(m, std::move(row)).first->second;
}

LieVector BchEngine::eval(const LieVector& u, const LieVector& v) const {
  return path_ == BchPath::Metabelian ? eval_metabelian(u, v, cert_.degree) : eval_general(u, v, cert_.degree);
}

LieVector BchEngine::eval_general(const LieVector& u, const LieVector& v, int D,
                                  std::vector<LieVector>* parts_out) const {
  check_input(u);
  check_input(v);
  if (D < 1) throw PreconditionError("BCH degree must be positive");
  if (D > kMaxGeneralDegree) throw BudgetExceeded("general BCH path is limited to degree 20");
  std::vector<LieVector> parts(static_cast<std::size_t>(D) + 1, L_.zero());
  parts[1] = u + v;
  std::vector<const std::vector<PAdic>*> rows(static_cast<std::size_t>(D) + 1, nullptr);
  for (int m = 2; m <= D; ++m) rows[static_cast<std::size_t>(m)] = &general_row(m);

  // Depth-first walk over left-normed words XY w_3 ... w_m.
  struct Frame {
    LieVector value;
    int depth;
    std::size_t suffix;
  };
  std::vector<Frame> stack;
  if (D >= 2) {
    LieVector w = L_.bracket(u, v);
    if (!negligible(w, D)) stack.push_back({std::move(w), 2, 0});
  }
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    const PAdic& coeff = (*rows[static_cast<std::size_t>(f.depth)])[f.suffix];
    if (!coeff.is_zero()) parts[static_cast<std::size_t>(f.depth)] += f.value * coeff;
    if (f.depth == D) continue;
    for (int letter = 0; letter < 2; ++letter) {
      LieVector next = L_.bracket(f.value, letter ? v : u);
      if (negligible(next, D)) continue;
      stack.push_back({std::move(next), f.depth + 1, (f.suffix << 1) | static_cast<std::size_t>(letter)});
    }
  }
  check_parts(parts);
  LieVector out = L_.zero();
  for (const auto& part : parts) out += part;
  if (min_valuation(out) < 0) throw ConsistencyError("BCH result left Z_p");
  if (parts_out) *parts_out = std::move(parts);
  return out;
}

LieVector BchEngine::eval_metabelian(const LieVector& u, const LieVector& v, int D,
                                     std::vector<LieVector>* parts_out) const {
  check_input(u);
  check_input(v);
  if (D < 1) throw PreconditionError("BCH degree must be positive");
  std::vector<LieVector> parts(static_cast<std::size_t>(D) + 1, L_.zero());
  parts[1] = u + v;
  // ad_u and ad_v commute on the abelian derived algebra, so the degree-m
  // part is sum_i C(m, i) ad_u^i ad_v^(m-2-i) [u, v].
  LieVector wj = L_.bracket(u, v);
  for (int j = 0; j + 2 <= D; ++j) {
    if (negligible(wj, D)) break;
    LieVector t = wj;
    for (int i = 0; i + j + 2 <= D; ++i) {
      if (negligible(t, D)) break;
      const int m = i + j + 2;
      const PAdic& coeff = metabelian_row(m)[static_cast<std::size_t>(i)];
      if (!coeff.is_zero()) parts[static_cast<std::size_t>(m)] += t * coeff;
      if (m < D) t = L_.bracket(t, u);
    }
    if (j + 3 <= D) wj = L_.bracket(wj, v);
  }
  check_parts(parts);
  LieVector out = L_.zero();
  for (const auto& part : parts) out += part;
  if (min_valuation(out) < 0) throw ConsistencyError("BCH result left Z_p");
  if (parts_out) *parts_out = std::move(parts);
  return out;
}

std::string dump_series(const BchSeries& s) {
  std::ostringstream os;
  for (const auto& t : s.terms) os << t.degree << ' ' << t.coeff.get_num() << '/' << t.coeff.get_den() << ' ' << t.word << '\n';
  return os.str();
}

}  // namespace unipro
