#pragma once

// Uniform pro-p groups on the underlying set of a powerful Z_p-Lie algebra,
// with two independent group laws:
//  - the BCH chart: g = exp(v), g h = BCH(v, w);
//  - the split chart (for algebras with an abelian ideal I of corank one,
//    spanned by all basis vectors but one, z): g = exp(a) exp(t z) with a in I,
//    and (a, t)(b, s) = (a + b E(t), t + s), E(t) = mat_exp(sigma t R), R the
//    matrix of v -> [v, z] on I. The sign sigma is pinned against the BCH law
//    when the group is built.
//
// Coordinates always refer to the algebra's basis; for G_m(d) that is the
// p^2-scaled basis (y, z_2, ..., z_m) = p^2 (x, e_2, ..., e_m).

#include <optional>

#include "unipro/bch.hpp"
#include "unipro/family.hpp"

namespace unipro {

enum class Chart { Bch, Split };
using Backend = Chart;

struct GroupElement {
  Chart chart = Chart::Bch;
  /// Bch: coordinates of log g. Split: the ideal part a in the ideal slots
  /// and t in the complement slot.
  LieVector coords;
};

class UniformGroup {
 public:
  /// G_m(d): the algebra p^2 L_m(d), split along x.
  static UniformGroup from_family(const FamilyParams& params);

  /// Group on an arbitrary powerful algebra. The split backend is enabled
  /// when a suitable complement basis vector exists.
  explicit UniformGroup(const LieAlgebraZp& powerful, BchPath path = BchPath::Auto);

  const LieAlgebraZp& algebra() const { return bch_.algebra(); }
  const BchEngine& engine() const { return bch_; }
  const PAdicContext& context() const { return algebra().context(); }
  int rank() const { return algebra().rank(); }
  const std::optional<FamilyParams>& family() const { return family_; }

  bool has_split() const { return split_index_ >= 0; }
  int split_index() const { return split_index_; }
  int split_sign() const { return sigma_; }
  /// R on the ideal (rows/cols ordered as the ideal slots).
  const PAdicMatrix& split_adjoint() const { return adj_; }
  /// E(t) = mat_exp(sigma t R).
  PAdicMatrix split_exp(const PAdic& t) const;

  GroupElement identity(Chart chart = Chart::Bch) const;
  GroupElement element(const LieVector& coords, Chart chart = Chart::Bch) const;
  /// exp of the i-th basis vector (the generator x_i).
  GroupElement generator(int i) const;

  GroupElement to_chart(const GroupElement& g, Chart chart) const;
  /// Product computed with the given law; the result is in that law's chart.
  GroupElement mul(const GroupElement& g, const GroupElement& h, Backend backend = Backend::Bch) const;
  GroupElement inv(const GroupElement& g) const;
  /// g^-1 h^-1 g h.
  GroupElement commutator(const GroupElement& g, const GroupElement& h, Backend backend = Backend::Bch) const;
  /// g^z for z in Z_p (bch chart: scalar multiple).
  GroupElement power(const GroupElement& g, const PAdic& z) const;
  /// The unique p^n-th root; g must lie in G^{p^n}.
  GroupElement root(const GroupElement& g, int n) const;

  /// BCH-chart coordinates of g.
  LieVector log(const GroupElement& g) const { return to_chart(g, Chart::Bch).coords; }
  /// Equality modulo p^m (default: working precision).
  bool equal(const GroupElement& g, const GroupElement& h, int m = -1) const;

  /// (g^{p^n} h^{p^n})^{p^-n} and [g^{p^n}, h^{p^n}]^{p^-2n}, as BCH-chart
  /// coordinates. 1 <= n <= N - 4.
  LieVector intrinsic_sum(const GroupElement& g, const GroupElement& h, int n) const;
  LieVector intrinsic_bracket(const GroupElement& g, const GroupElement& h, int n) const;

 private:
  void require_split() const;
  void check(const GroupElement& g) const;
  LieVector ideal_part(const LieVector& v) const;
  GroupElement split_mul(const GroupElement& g, const GroupElement& h) const;
  void pin_sign();

  BchEngine bch_;
  std::optional<FamilyParams> family_;
  int split_index_ = -1;
  std::vector<int> ideal_slots_;
  PAdicMatrix adj_;
  int sigma_ = -1;
};

}  // namespace unipro
