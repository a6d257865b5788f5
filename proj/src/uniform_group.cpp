#include "unipro/uniform_group.hpp"

namespace unipro {

namespace {

bool vanishes(const LieVector& v, int n) { return min_valuation(v) >= n; }

}  // namespace

UniformGroup UniformGroup::from_family(const FamilyParams& params) {
  params.validate();
  UniformGroup g(scale(build_family(params), 2));
  if (g.split_index_ != 0) throw ConsistencyError("family algebra does not split along x");
  g.family_ = params;
  return g;
}

UniformGroup::UniformGroup(const LieAlgebraZp& powerful, BchPath path) : bch_(powerful, path) {
  const LieAlgebraZp& L = algebra();
  const int k = L.rank();
  const int n = context().precision();
  // Look for z = b_c such that the other basis vectors span an abelian ideal.
  for (int c = 0; c < k && split_index_ < 0; ++c) {
    bool ok = k > 1;
    for (int i = 0; i < k && ok; ++i) {
      if (i == c) continue;
      if (!L.constant(i, c, c).is_zero() && L.constant(i, c, c).valuation() < n) ok = false;
      for (int j = i + 1; j < k && ok; ++j)
        if (j != c && !vanishes(L.basis_bracket(i, j), n)) ok = false;
    }
    if (!ok) continue;
    std::vector<int> slots;
    for (int i = 0; i < k; ++i)
      if (i != c) slots.push_back(i);
    const Eigen::Index r = static_cast<Eigen::Index>(slots.size());
    PAdicMatrix adj = zero_matrix(context(), r, r);
    for (Eigen::Index a = 0; a < r; ++a)
      for (Eigen::Index b = 0; b < r; ++b) adj(a, b) = L.constant(slots[static_cast<std::size_t>(a)], c, slots[static_cast<std::size_t>(b)]);
    if (min_valuation(adj) < 2) continue;  // mat_exp would not converge
    split_index_ = c;
    ideal_slots_ = std::move(slots);
    adj_ = std::move(adj);
  }
  if (has_split()) pin_sign();
}

void UniformGroup::pin_sign() {
  const int n = context().precision();
  int probe = -1;
  for (Eigen::Index a = 0; a < adj_.rows() && probe < 0; ++a)
    if (!vanishes(adj_.row(a).transpose(), n)) probe = static_cast<int>(a);
  if (probe < 0) return;  // R = 0: both orientations coincide
  const GroupElement z = generator(split_index_);
  const GroupElement b = generator(ideal_slots_[static_cast<std::size_t>(probe)]);
  const GroupElement want = mul(z, b, Backend::Bch);
  for (int s : {-1, 1}) {
    sigma_ = s;
    const GroupElement got = split_mul(to_chart(z, Chart::Split), to_chart(b, Chart::Split));
    if (equal(got, want)) return;
  }
  throw ConsistencyError("split law agrees with the BCH law for neither orientation of the adjoint action");
}

void UniformGroup::require_split() const {
  if (!has_split()) throw PreconditionError("this group has no split chart (no abelian ideal of corank one)");
}

void UniformGroup::check(const GroupElement& g) const {
  if (g.coords.size() != rank()) throw DimensionError("group element has the wrong number of coordinates");
  if (g.chart == Chart::Split) require_split();
  if (min_valuation(g.coords) < 0) throw PreconditionError("group element coordinates must lie in Z_p");
}

LieVector UniformGroup::ideal_part(const LieVector& v) const {
  LieVector out = v;
  out(split_index_) = PAdic::zero(context());
  return out;
}

PAdicMatrix UniformGroup::split_exp(const PAdic& t) const {
  require_split();
  return mat_exp((adj_ * (PAdic(sigma_) * t.in(context()))).eval());
}

GroupElement UniformGroup::identity(Chart chart) const {
  if (chart == Chart::Split) require_split();
  return {chart, algebra().zero()};
}

GroupElement UniformGroup::element(const LieVector& coords, Chart chart) const {
  GroupElement g{chart, coords.unaryExpr([this](const PAdic& x) { return x.in(context()); })};
  check(g);
  return g;
}

GroupElement UniformGroup::generator(int i) const {
  if (i < 0 || i >= rank()) throw DimensionError("generator index out of range");
  return {Chart::Bch, algebra().basis_vector(i)};
}

GroupElement UniformGroup::to_chart(const GroupElement& g, Chart chart) const {
  check(g);
  if (g.chart == chart) return g;
  const int c = split_index_;
  const PAdic t = g.coords(c);
  LieVector tz = algebra().zero();
  tz(c) = t;
  if (chart == Chart::Bch) return {Chart::Bch, bch_.eval(ideal_part(g.coords), tz)};

  // Solve BCH(a, t z) = g for a in the ideal; each correction gains at least
  // the valuation of the structure constants.
  const int n = context().precision();
  const LieVector target = ideal_part(g.coords);
  LieVector a = target;
  for (int iter = 0;; ++iter) {
    if (iter > n + 2) throw ConvergenceError("split chart conversion did not converge");
    const LieVector diff = target - ideal_part(bch_.eval(a, tz));
    if (vanishes(diff, n)) break;
    a += diff;
  }
  a(c) = t;
  return {Chart::Split, a};
}

GroupElement UniformGroup::split_mul(const GroupElement& g, const GroupElement& h) const {
  const int c = split_index_;
  const Eigen::Index r = static_cast<Eigen::Index>(ideal_slots_.size());
  PAdicVector b(r);
  for (Eigen::Index i = 0; i < r; ++i) b(i) = h.coords(ideal_slots_[static_cast<std::size_t>(i)]);
  const PAdicVector moved = (b.transpose() * split_exp(g.coords(c))).transpose();
  GroupElement out{Chart::Split, g.coords};
  for (Eigen::Index i = 0; i < r; ++i) out.coords(ideal_slots_[static_cast<std::size_t>(i)]) += moved(i);
  out.coords(c) += h.coords(c);
  return out;
}

GroupElement UniformGroup::mul(const GroupElement& g, const GroupElement& h, Backend backend) const {
  if (backend == Backend::Split) {
    require_split();
    return split_mul(to_chart(g, Chart::Split), to_chart(h, Chart::Split));
  }
  return {Chart::Bch, bch_.eval(log(g), log(h))};
}

GroupElement UniformGroup::inv(const GroupElement& g) const {
  check(g);
  if (g.chart == Chart::Bch) return {Chart::Bch, -g.coords};
  // (a, t)^-1 = (0, -t)(-a, 0) = (-a E(-t), -t).
  GroupElement back{Chart::Split, algebra().zero()};
  back.coords(split_index_) = -g.coords(split_index_);
  return split_mul(back, {Chart::Split, -ideal_part(g.coords)});
}

GroupElement UniformGroup::commutator(const GroupElement& g, const GroupElement& h, Backend backend) const {
  return mul(mul(inv(g), inv(h), backend), mul(g, h, backend), backend);
}

GroupElement UniformGroup::power(const GroupElement& g, const PAdic& z) const {
  const PAdic s = z.in(context());
  if (!s.is_zero() && s.valuation() < 0) throw PreconditionError("power: exponent must lie in Z_p");
  return {Chart::Bch, log(g) * s};
}

GroupElement UniformGroup::root(const GroupElement& g, int n) const {
  if (n < 0) throw PreconditionError("root: negative exponent");
  const LieVector v = log(g);
  if (min_valuation(v) < n) {
    throw PreconditionError("element is not in G^{p^" + std::to_string(n) + "}; no p^" + std::to_string(n) +
                            "-th root");
  }
  return {Chart::Bch, v.unaryExpr([n](const PAdic& x) { return divide_by_p_power(x, n, true); })};
}

bool UniformGroup::equal(const GroupElement& g, const GroupElement& h, int m) const {
  return agree_mod(log(g), log(h), m < 0 ? context().precision() : m);
}

LieVector UniformGroup::intrinsic_sum(const GroupElement& g, const GroupElement& h, int n) const {
  const int N = context().precision();
  if (n < 1 || n > N - 4) throw PrecisionError("intrinsic sum needs 1 <= n <= N - 4");
  const PAdic pn = PAdic::one(context()).shifted(n);
  return log(root(mul(power(g, pn), power(h, pn)), n));
}

LieVector UniformGroup::intrinsic_bracket(const GroupElement& g, const GroupElement& h, int n) const {
  const int N = context().precision();
  if (n < 1 || n > N - 4) throw PrecisionError("intrinsic bracket needs 1 <= n <= N - 4");
  const PAdic pn = PAdic::one(context()).shifted(n);
  return log(root(commutator(power(g, pn), power(h, pn)), 2 * n));
}

}  // namespace unipro
