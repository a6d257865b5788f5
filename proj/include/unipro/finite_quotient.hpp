#pragma once

// Finite quotients G / G^{p^j} of a split uniform group, realized on split
// chart coordinates modulo p^j:
//   (a, t)(b, s) = (a + b E(1)^t, t + s)   (mod p^j),
// where E(t) = exp(sigma t R) from the split chart. E(t) only depends on
// t mod p^j modulo p^{j+2}, so the law is well defined. Elements are packed
// into 32-bit mixed-radix integers.

#include <cstdint>
#include <random>
#include <vector>

#include "unipro/uniform_group.hpp"

namespace unipro {

class FiniteQuotient {
 public:
  using Elem = std::uint32_t;
  static constexpr std::uint64_t kDefaultBudget = 1'000'000;
  /// Orders up to this size get a full multiplication table.
  static constexpr std::uint64_t kTableLimit = 1024;

  /// G / G^{p^j}. Requires a split chart; BudgetExceeded when p^{jm}
  /// exceeds the budget.
  FiniteQuotient(const UniformGroup& G, int level, std::uint64_t budget = kDefaultBudget);
  /// (Z/p^j)^m with the additive law.
  static FiniteQuotient abelian(std::uint32_t p, int m, int level = 1, std::uint64_t budget = kDefaultBudget);

  std::uint32_t prime() const { return p_; }
  int level() const { return level_; }
  int rank() const { return m_; }
  std::uint32_t modulus() const { return q_; }
  std::uint64_t order() const { return order_; }
  /// Slot of the complement coordinate t, -1 for an abelian quotient.
  int complement_slot() const { return slot_; }

  Elem identity() const { return 0; }
  Elem mul(Elem x, Elem y) const;
  Elem inv(Elem x) const;
  Elem pow(Elem x, std::uint64_t e) const;
  /// x^-1 y^-1 x y.
  Elem commutator(Elem x, Elem y) const;
  /// y^-1 x y.
  Elem conjugate(Elem x, Elem y) const { return mul(inv(y), mul(x, y)); }
  /// Image of the i-th basis generator.
  Elem generator(int i) const;
  std::vector<Elem> generators() const;

  std::vector<std::uint32_t> coords(Elem x) const;
  Elem encode(const std::vector<std::uint32_t>& c) const;
  /// Every coordinate divisible by p^e.
  bool divisible(Elem x, int e) const;

  /// E(1)^t modulo p^j, row-major over the ideal slots.
  const std::vector<std::uint32_t>& twist(std::uint32_t t) const { return twist_[t]; }

 private:
  FiniteQuotient() = default;
  void finish();
  Elem mul_raw(Elem x, Elem y) const;

  std::uint32_t p_ = 0;
  int level_ = 0;
  int m_ = 0;
  std::uint32_t q_ = 1;
  std::uint64_t order_ = 1;
  int slot_ = -1;
  std::vector<int> ideal_;                         // ideal slot indices
  std::vector<std::vector<std::uint32_t>> twist_;  // E(1)^t, t in [0, q)
  std::vector<Elem> table_;                        // order x order, when small
  std::vector<Elem> inv_table_;
};

/// Image of g under G -> G / G^{p^j}.
FiniteQuotient::Elem quotient_image(const UniformGroup& G, const FiniteQuotient& Q, const GroupElement& g);

/// Compares the quotient law with the BCH law of G on random lifts:
/// image(g h) = image(g) image(h). Returns the number of failures.
int check_homomorphism(const UniformGroup& G, const FiniteQuotient& Q, int samples, std::mt19937_64& rng);

struct AxiomReport {
  bool exhaustive = false;
  std::uint64_t checked = 0;  // number of triples / pairs inspected
  bool ok = true;
  std::string failure;
};

/// Identity, inverses and associativity: exhaustive when |Q| <= p^4,
/// otherwise on `samples` random triples.
AxiomReport check_group_axioms(const FiniteQuotient& Q, int samples, std::uint64_t seed);

}  // namespace unipro
