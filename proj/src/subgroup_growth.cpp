#include "unipro/subgroup_growth.hpp"

#include <map>
#include <random>
#include <sstream>
#include <unordered_map>

namespace unipro {

using Elem = FiniteQuotient::Elem;

namespace {

std::size_t words_for(std::uint64_t order) { return static_cast<std::size_t>((order + 63) / 64); }

void set_bit(std::vector<std::uint64_t>& bits, Elem x) { bits[x >> 6] |= std::uint64_t{1} << (x & 63); }

int log_p(std::uint64_t n, std::uint32_t p) {
  int e = 0;
  while (n > 1) {
    n /= p;
    ++e;
  }
  return e;
}

// Grows a subgroup (bits + element list) by one generator: the old elements
// are closed under the old generators, so they only need the new one.
void adjoin(const FiniteQuotient& Q, Subgroup& H, std::vector<Elem>& elems, Elem c) {
  H.gens.push_back(c);
  auto visit = [&](Elem y) {
    if (!H.contains(y)) {
      set_bit(H.bits, y);
      elems.push_back(y);
    }
  };
  const std::size_t old = elems.size();
  for (std::size_t i = 0; i < old; ++i) visit(Q.mul(elems[i], c));
  for (std::size_t i = old; i < elems.size(); ++i)
    for (Elem g : H.gens) visit(Q.mul(elems[i], g));
  H.order = elems.size();
}

// Union of right cosets T x^e, e < p, for x normalizing T with x^p in T.
void extend_by_cosets(const FiniteQuotient& Q, std::vector<Elem>& elems, Elem x) {
  const std::size_t n = elems.size();
  Elem xe = x;
  for (std::uint32_t e = 1; e < Q.prime(); ++e, xe = Q.mul(xe, x))
    for (std::size_t i = 0; i < n; ++i) elems.push_back(Q.mul(elems[i], xe));
}

class Zobrist {
 public:
  explicit Zobrist(std::uint64_t order) : keys_(order) {
    std::mt19937_64 rng(0x5eed);
    for (auto& k : keys_) k = rng();
  }
  std::uint64_t operator()(const std::vector<Elem>& elems) const {
    std::uint64_t h = 0;
    for (Elem x : elems) h ^= keys_[x];
    return h;
  }

 private:
  std::vector<std::uint64_t> keys_;
};

// Deduplicating store of subgroups.
class SubgroupSet {
 public:
  explicit SubgroupSet(const Zobrist& z) : z_(z) {}
  /// Inserts; returns false for a duplicate.
  bool insert(Subgroup H, const std::vector<Elem>& elems) {
    const std::uint64_t h = z_(elems);
    auto& bucket = index_[h];
    for (std::size_t k : bucket)
      if (items_[k].bits == H.bits) return false;
    bucket.push_back(items_.size());
    items_.push_back(std::move(H));
    return true;
  }
  std::vector<Subgroup>& items() { return items_; }

 private:
  const Zobrist& z_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index_;
  std::vector<Subgroup> items_;
};

Subgroup from_elements(const FiniteQuotient& Q, const std::vector<Elem>& elems, std::vector<Elem> gens) {
  Subgroup H;
  H.bits.assign(words_for(Q.order()), 0);
  for (Elem x : elems) set_bit(H.bits, x);
  H.gens = std::move(gens);
  H.order = elems.size();
  return H;
}

// Maximal subgroups of K: preimages of the hyperplanes of K / Phi(K).
template <class Sink>
void for_each_maximal(const FiniteQuotient& Q, const Subgroup& K, Sink&& sink) {
  if (K.order <= 1) return;
  const std::uint32_t p = Q.prime();
  const Subgroup Phi = frattini_subgroup(Q, K);
  const std::vector<Elem> phi = Phi.elements();
  // Basis of K / Phi chosen among the generators of K.
  std::vector<Elem> basis;
  std::vector<Elem> span = phi;
  Subgroup T = Phi;
  for (Elem x : K.gens) {
    if (T.contains(x)) continue;
    basis.push_back(x);
    extend_by_cosets(Q, span, x);
    for (Elem y : span) set_bit(T.bits, y);
  }
  if (span.size() != K.order) throw ConsistencyError("generators of K do not span K / Phi(K)");
  const std::size_t r = basis.size();
  // Normalized functionals: leading nonzero coordinate 1.
  std::vector<std::uint32_t> f(r, 0);
  for (std::size_t l = 0; l < r; ++l) {
    std::fill(f.begin(), f.end(), 0);
    f[l] = 1;
    std::uint64_t tails = 1;
    for (std::size_t k = l + 1; k < r; ++k) tails *= p;
    for (std::uint64_t code = 0; code < tails; ++code) {
      std::uint64_t c = code;
      for (std::size_t k = l + 1; k < r; ++k, c /= p) f[k] = static_cast<std::uint32_t>(c % p);
      // Kernel basis: x_k x_l^{-f_k}, k != l.
      std::vector<Elem> elems = phi;
      std::vector<Elem> gens = Phi.gens;
      for (std::size_t k = 0; k < r; ++k) {
        if (k == l) continue;
        const Elem w = Q.mul(basis[k], Q.pow(basis[l], (p - f[k]) % p));
        extend_by_cosets(Q, elems, w);
        gens.push_back(w);
      }
      sink(from_elements(Q, elems, std::move(gens)), elems);
    }
  }
}

std::vector<LayerCount> layered(const FiniteQuotient& Q, int i_max, bool normal_only, std::uint64_t max_subgroups) {
  if (i_max < 0) throw PreconditionError("index exponent must be non-negative");
  const Zobrist z(Q.order());
  std::vector<LayerCount> out;
  std::vector<Subgroup> layer{whole_group(Q)};
  out.push_back({0, 1, 1});
  std::uint64_t held = 1;
  for (int i = 1; i <= i_max; ++i) {
    SubgroupSet next(z);
    for (const Subgroup& K : layer) {
      for_each_maximal(Q, K, [&](Subgroup M, const std::vector<Elem>& elems) {
        if (normal_only && !is_normal(Q, M)) return;
        if (next.insert(std::move(M), elems) && ++held > max_subgroups)
          throw BudgetExceeded("subgroup enumeration exceeds the budget");
      });
    }
    layer = std::move(next.items());
    LayerCount lc{i, 0, 0};
    for (const Subgroup& H : layer) {
      ++lc.all;
      if (normal_only || is_normal(Q, H)) ++lc.normal;
    }
    if (normal_only) lc.all = 0;
    out.push_back(lc);
  }
  return out;
}

}  // namespace

std::vector<Elem> Subgroup::elements() const {
  std::vector<Elem> out;
  out.reserve(order);
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word) {
      const int b = __builtin_ctzll(word);
      out.push_back(static_cast<Elem>(w * 64 + static_cast<std::size_t>(b)));
      word &= word - 1;
    }
  }
  return out;
}

Subgroup closure(const FiniteQuotient& Q, const std::vector<Elem>& seeds, const std::vector<Elem>& normalizers) {
  Subgroup H;
  H.bits.assign(words_for(Q.order()), 0);
  set_bit(H.bits, 0);
  H.order = 1;
  std::vector<Elem> elems{0};
  std::vector<Elem> pending(seeds.rbegin(), seeds.rend());
  while (!pending.empty()) {
    const Elem c = pending.back();
    pending.pop_back();
    if (H.contains(c)) continue;
    adjoin(Q, H, elems, c);
    for (Elem x : normalizers) pending.push_back(Q.conjugate(c, x));
  }
  return H;
}

Subgroup whole_group(const FiniteQuotient& Q) {
  Subgroup H;
  H.bits.assign(words_for(Q.order()), ~std::uint64_t{0});
  if (Q.order() % 64) H.bits.back() = (std::uint64_t{1} << (Q.order() % 64)) - 1;
  H.order = Q.order();
  for (Elem g : Q.generators())
    if (g != 0) H.gens.push_back(g);
  return H;
}

Subgroup frattini_subgroup(const FiniteQuotient& Q, const Subgroup& K) {
  std::vector<Elem> seeds;
  for (Elem x : K.gens) {
    seeds.push_back(Q.pow(x, Q.prime()));
    for (Elem y : K.gens) seeds.push_back(Q.commutator(x, y));
  }
  return closure(Q, seeds, K.gens);
}

bool is_normal(const FiniteQuotient& Q, const Subgroup& H) {
  for (Elem g : Q.generators())
    for (Elem h : H.gens)
      if (!H.contains(Q.conjugate(h, g))) return false;
  return true;
}

bool LowerPSeries::all_equal(int e) const {
  for (int x : index_exponents)
    if (x != e) return false;
  return true;
}

LowerPSeries lower_p_series(const FiniteQuotient& Q, int i_max) {
  LowerPSeries s;
  const std::vector<Elem> gens = Q.generators();
  Subgroup P = whole_group(Q);
  s.orders.push_back(P.order);
  for (int i = 1; i <= i_max && P.order > 1; ++i) {
    std::vector<Elem> seeds;
    for (Elem x : P.elements()) {
      seeds.push_back(Q.pow(x, Q.prime()));
      for (Elem g : gens) seeds.push_back(Q.commutator(x, g));
    }
    const Subgroup next = closure(Q, seeds, gens);
    for (Elem x = 0; x < Q.order(); ++x)
      if (next.contains(x) != Q.divisible(x, i)) {
        s.matches_power_image = false;
        break;
      }
    s.index_exponents.push_back(log_p(P.order / next.order, Q.prime()));
    s.orders.push_back(next.order);
    P = next;
  }
  return s;
}

bool is_powerful_group(const FiniteQuotient& Q) {
  const std::uint64_t e = Q.prime() == 2 ? 4 : Q.prime();
  std::vector<Elem> seeds;
  for (Elem x = 0; x < Q.order(); ++x) seeds.push_back(Q.pow(x, e));
  const Subgroup powers = closure(Q, seeds);
  const auto gens = Q.generators();
  for (Elem a : gens)
    for (Elem b : gens)
      if (!powers.contains(Q.commutator(a, b))) return false;
  return true;
}

int frattini_rank(const FiniteQuotient& Q) {
  const Subgroup G = whole_group(Q);
  return log_p(G.order / frattini_subgroup(Q, G).order, Q.prime());
}

std::vector<LayerCount> count_subgroups(const FiniteQuotient& Q, int i_max, std::uint64_t max_subgroups) {
  return layered(Q, i_max, false, max_subgroups);
}

std::vector<LayerCount> count_normal_subgroups(const FiniteQuotient& Q, int i_max) {
  return layered(Q, i_max, true, 200'000);
}

std::vector<LayerCount> count_subgroups_naive(const FiniteQuotient& Q, int i_max) {
  if (Q.order() > 729) throw BudgetExceeded("naive enumeration is limited to groups of order <= 729");
  const std::uint32_t p = Q.prime();
  const auto n = static_cast<Elem>(Q.order());
  const Zobrist z(Q.order());
  SubgroupSet all(z);
  {
    Subgroup one = from_elements(Q, {0}, {});
    all.insert(std::move(one), {0});
  }
  // Every nontrivial subgroup K is H<c> for a maximal (normal, index p) H.
  for (std::size_t k = 0; k < all.items().size(); ++k) {
    const Subgroup H = all.items()[k];
    const std::vector<Elem> hel = H.elements();
    std::vector<std::uint64_t> done = H.bits;
    for (Elem c = 0; c < n; ++c) {
      if ((done[c >> 6] >> (c & 63)) & 1u) continue;
      if (!H.contains(Q.pow(c, p))) continue;
      bool normalizes = true;
      for (Elem h : H.gens)
        if (!H.contains(Q.conjugate(h, c))) {
          normalizes = false;
          break;
        }
      if (!normalizes) continue;
      std::vector<Elem> elems = hel;
      extend_by_cosets(Q, elems, c);
      for (Elem y : elems) set_bit(done, y);
      std::vector<Elem> gens = H.gens;
      gens.push_back(c);
      all.insert(from_elements(Q, elems, std::move(gens)), elems);
    }
  }
  std::vector<LayerCount> out;
  for (int i = 0; i <= i_max; ++i) out.push_back({i, 0, 0});
  for (const Subgroup& H : all.items()) {
    const int i = log_p(Q.order() / H.order, p);
    if (i > i_max) continue;
    ++out[static_cast<std::size_t>(i)].all;
    if (is_normal(Q, H)) ++out[static_cast<std::size_t>(i)].normal;
  }
  return out;
}

GrowthTable zeta_coefficients(const UniformGroup& G, int i_max, const GrowthOptions& opts) {
  if (i_max < 0) throw PreconditionError("index exponent must be non-negative");
  GrowthTable t;
  t.p = G.context().prime();
  t.m = G.rank();
  t.d_digest = G.family() ? to_digit_string(G.family()->d, std::min(8, G.context().precision())) : "-";
  std::map<int, std::optional<std::vector<LayerCount>>> cache;  // node-based: references stay valid
  auto at = [&](int j) -> const std::optional<std::vector<LayerCount>>& {
    auto [it, fresh] = cache.try_emplace(j);
    if (fresh && j <= opts.max_level) {
      try {
        const FiniteQuotient Q(G, j, opts.budget);
        it->second = count_subgroups(Q, i_max);
      } catch (const BudgetExceeded&) {
      }
    }
    return it->second;
  };
  for (int i = 0; i <= i_max; ++i) {
    GrowthRow row;
    row.i = i;
    for (int e = 0; e < i; ++e) row.index *= t.p;
    row.level = i;
    const auto* prev = &at(i);
    if (*prev) {
      row.a = (**prev)[static_cast<std::size_t>(i)].all;
      row.a_normal = (**prev)[static_cast<std::size_t>(i)].normal;
      for (int j = i;; ++j) {
        const auto& next = at(j + 1);
        if (!next) break;
        const auto& a = (**prev)[static_cast<std::size_t>(i)];
        const auto& b = (*next)[static_cast<std::size_t>(i)];
        row.a = b.all;
        row.a_normal = b.normal;
        row.level = j + 1;
        if (a.all == b.all && a.normal == b.normal) {
          row.level = j;
          row.stabilized = true;
          break;
        }
        prev = &next;
      }
    }
    t.rows.push_back(row);
  }
  return t;
}

std::string growth_csv(const GrowthTable& t) {
  std::ostringstream os;
  os << "p,m,d,i,index,a,a_normal,level,stabilized\n";
  for (const auto& r : t.rows)
    os << t.p << ',' << t.m << ',' << t.d_digest << ',' << r.i << ',' << r.index << ',' << r.a << ',' << r.a_normal
       << ',' << r.level << ',' << (r.stabilized ? "stabilized" : "provisional") << '\n';
  return os.str();
}

}  // namespace unipro
