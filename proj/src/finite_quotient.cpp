#include "unipro/finite_quotient.hpp"

#include <sstream>

namespace unipro {

namespace {

std::uint64_t checked_power(std::uint64_t base, int e, std::uint64_t budget) {
  std::uint64_t out = 1;
  for (int i = 0; i < e; ++i) {
    if (out > budget / base) throw BudgetExceeded("quotient order exceeds the enumeration budget");
    out *= base;
  }
  return out;
}

}  // namespace

FiniteQuotient::FiniteQuotient(const UniformGroup& G, int level, std::uint64_t budget) {
  if (!G.has_split()) throw PreconditionError("finite quotients need a split chart");
  if (level < 0 || level > G.context().precision()) throw PrecisionError("quotient level outside the working precision");
  p_ = G.context().prime();
  level_ = level;
  m_ = G.rank();
  q_ = static_cast<std::uint32_t>(checked_power(p_, level, budget));
  order_ = checked_power(q_, m_, std::min<std::uint64_t>(budget, 0xffffffffULL));
  slot_ = G.split_index();
  for (int i = 0; i < m_; ++i)
    if (i != slot_) ideal_.push_back(i);
  const std::size_t r = ideal_.size();
  const PAdicMatrix E = G.split_exp(PAdic::one(G.context()));
  std::vector<std::uint32_t> e1(r * r), cur(r * r, 0);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 0; k < r; ++k)
      e1[i * r + k] = static_cast<std::uint32_t>(E(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)).residue(level));
    cur[i * r + i] = 1 % q_;
  }
  twist_.reserve(q_);
  for (std::uint32_t t = 0; t < q_; ++t) {
    twist_.push_back(cur);
    std::vector<std::uint32_t> next(r * r, 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t k = 0; k < r; ++k) {
        std::uint64_t acc = 0;
        for (std::size_t l = 0; l < r; ++l) acc = (acc + std::uint64_t{cur[i * r + l]} * e1[l * r + k]) % q_;
        next[i * r + k] = static_cast<std::uint32_t>(acc);
      }
    cur = std::move(next);
  }
  finish();
}

FiniteQuotient FiniteQuotient::abelian(std::uint32_t p, int m, int level, std::uint64_t budget) {
  if (!is_prime(p)) throw PreconditionError("p must be prime");
  if (m < 1 || level < 0) throw PreconditionError("abelian quotient needs m >= 1 and level >= 0");
  FiniteQuotient Q;
  Q.p_ = p;
  Q.level_ = level;
  Q.m_ = m;
  Q.q_ = static_cast<std::uint32_t>(checked_power(p, level, budget));
  Q.order_ = checked_power(Q.q_, m, std::min<std::uint64_t>(budget, 0xffffffffULL));
  Q.finish();
  return Q;
}

void FiniteQuotient::finish() {
  if (m_ > 32) throw BudgetExceeded("quotients are limited to rank 32");
  if (order_ > kTableLimit) return;
  const auto n = static_cast<Elem>(order_);
  table_.resize(std::size_t{n} * n);
  inv_table_.resize(n);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      const Elem z = mul_raw(x, y);
      table_[std::size_t{x} * n + y] = z;
      if (z == 0) inv_table_[x] = y;
    }
}

std::vector<std::uint32_t> FiniteQuotient::coords(Elem x) const {
  std::vector<std::uint32_t> c(static_cast<std::size_t>(m_));
  for (int i = 0; i < m_; ++i) {
    c[static_cast<std::size_t>(i)] = x % q_;
    x /= q_;
  }
  return c;
}

FiniteQuotient::Elem FiniteQuotient::encode(const std::vector<std::uint32_t>& c) const {
  if (c.size() != static_cast<std::size_t>(m_)) throw DimensionError("coordinate vector has the wrong length");
  std::uint64_t x = 0;
  for (int i = m_ - 1; i >= 0; --i) x = x * q_ + c[static_cast<std::size_t>(i)] % q_;
  return static_cast<Elem>(x);
}

FiniteQuotient::Elem FiniteQuotient::mul_raw(Elem x, Elem y) const {
  std::uint32_t a[32], b[32];
  for (int i = 0; i < m_; ++i) {
    a[i] = x % q_;
    x /= q_;
    b[i] = y % q_;
    y /= q_;
  }
  if (slot_ >= 0) {
    const auto& E = twist_[a[slot_]];
    const std::size_t r = ideal_.size();
    for (std::size_t k = 0; k < r; ++k) {
      std::uint64_t acc = a[ideal_[k]];
      for (std::size_t l = 0; l < r; ++l) acc += std::uint64_t{b[ideal_[l]]} * E[l * r + k];
      a[ideal_[k]] = static_cast<std::uint32_t>(acc % q_);
    }
    a[slot_] = (a[slot_] + b[slot_]) % q_;
  } else {
    for (int i = 0; i < m_; ++i) a[i] = (a[i] + b[i]) % q_;
  }
  std::uint64_t z = 0;
  for (int i = m_ - 1; i >= 0; --i) z = z * q_ + a[i];
  return static_cast<Elem>(z);
}

FiniteQuotient::Elem FiniteQuotient::mul(Elem x, Elem y) const {
  if (!table_.empty()) return table_[std::size_t{x} * order_ + y];
  return mul_raw(x, y);
}

FiniteQuotient::Elem FiniteQuotient::inv(Elem x) const {
  if (!inv_table_.empty()) return inv_table_[x];
  auto c = coords(x);
  if (slot_ < 0) {
    for (auto& v : c) v = (q_ - v) % q_;
    return encode(c);
  }
  // (a, t)^-1 = (-a E(-t), -t).
  const std::uint32_t nt = (q_ - c[static_cast<std::size_t>(slot_)]) % q_;
  const auto& E = twist_[nt];
  const std::size_t r = ideal_.size();
  std::vector<std::uint32_t> out(c.size());
  for (std::size_t k = 0; k < r; ++k) {
    std::uint64_t acc = 0;
    for (std::size_t l = 0; l < r; ++l) acc += std::uint64_t{c[static_cast<std::size_t>(ideal_[l])]} * E[l * r + k];
    out[static_cast<std::size_t>(ideal_[k])] = static_cast<std::uint32_t>((q_ - acc % q_) % q_);
  }
  out[static_cast<std::size_t>(slot_)] = nt;
  return encode(out);
}

FiniteQuotient::Elem FiniteQuotient::pow(Elem x, std::uint64_t e) const {
  Elem out = identity(), base = x;
  while (e) {
    if (e & 1) out = mul(out, base);
    base = mul(base, base);
    e >>= 1;
  }
  return out;
}

FiniteQuotient::Elem FiniteQuotient::commutator(Elem x, Elem y) const {
  return mul(mul(inv(x), inv(y)), mul(x, y));
}

FiniteQuotient::Elem FiniteQuotient::generator(int i) const {
  if (i < 0 || i >= m_) throw DimensionError("generator index out of range");
  std::vector<std::uint32_t> c(static_cast<std::size_t>(m_), 0);
  c[static_cast<std::size_t>(i)] = 1;
  return encode(c);
}

std::vector<FiniteQuotient::Elem> FiniteQuotient::generators() const {
  std::vector<Elem> out;
  for (int i = 0; i < m_; ++i) out.push_back(generator(i));
  return out;
}

bool FiniteQuotient::divisible(Elem x, int e) const {
  std::uint64_t pe = 1;
  for (int i = 0; i < e; ++i) pe *= p_;
  if (pe >= q_) return x == 0;
  for (int i = 0; i < m_; ++i, x /= q_)
    if ((x % q_) % pe != 0) return false;
  return true;
}

FiniteQuotient::Elem quotient_image(const UniformGroup& G, const FiniteQuotient& Q, const GroupElement& g) {
  const GroupElement s = G.to_chart(g, Chart::Split);
  std::vector<std::uint32_t> c(static_cast<std::size_t>(Q.rank()));
  for (int i = 0; i < Q.rank(); ++i) c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(s.coords(i).residue(Q.level()));
  return Q.encode(c);
}

int check_homomorphism(const UniformGroup& G, const FiniteQuotient& Q, int samples, std::mt19937_64& rng) {
  const auto& ctx = G.context();
  std::uniform_int_distribution<long long> dist(0, 1'000'000'000LL);
  auto random = [&] {
    LieVector v = G.algebra().zero();
    for (int i = 0; i < G.rank(); ++i) v(i) = PAdic(ctx, dist(rng));
    return G.element(v);
  };
  int failures = 0;
  for (int s = 0; s < samples; ++s) {
    const GroupElement g = random(), h = random();
    const auto lhs = quotient_image(G, Q, G.mul(g, h, Backend::Bch));
    const auto rhs = Q.mul(quotient_image(G, Q, g), quotient_image(G, Q, h));
    if (lhs != rhs) ++failures;
  }
  return failures;
}

AxiomReport check_group_axioms(const FiniteQuotient& Q, int samples, std::uint64_t seed) {
  using Elem = FiniteQuotient::Elem;
  AxiomReport rep;
  std::uint64_t p4 = std::uint64_t{Q.prime()} * Q.prime() * Q.prime() * Q.prime();
  rep.exhaustive = Q.order() <= p4;
  const auto n = static_cast<Elem>(Q.order());
  auto fail = [&](const char* what, Elem a, Elem b, Elem c) {
    if (!rep.ok) return;
    rep.ok = false;
    std::ostringstream os;
    os << what << " fails at (" << a << ", " << b << ", " << c << ")";
    rep.failure = os.str();
  };
  auto unary = [&](Elem a) {
    if (Q.mul(a, 0) != a || Q.mul(0, a) != a) fail("identity", a, 0, 0);
    if (Q.mul(a, Q.inv(a)) != 0 || Q.mul(Q.inv(a), a) != 0) fail("inverse", a, 0, 0);
  };
  auto assoc = [&](Elem a, Elem b, Elem c) {
    ++rep.checked;
    if (Q.mul(Q.mul(a, b), c) != Q.mul(a, Q.mul(b, c))) fail("associativity", a, b, c);
  };
  if (rep.exhaustive) {
    for (Elem a = 0; a < n; ++a) {
      unary(a);
      for (Elem b = 0; b < n; ++b)
        for (Elem c = 0; c < n; ++c) assoc(a, b, c);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Elem> dist(0, n - 1);
    for (int s = 0; s < samples; ++s) {
      const Elem a = dist(rng), b = dist(rng), c = dist(rng);
      unary(a);
      assoc(a, b, c);
    }
  }
  return rep;
}

}  // namespace unipro
