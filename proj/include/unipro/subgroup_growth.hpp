#pragma once

// Subgroups of finite quotients: lower p-series, Frattini rank, and counts
// a_{p^i} (all subgroups) and a^<|_{p^i} (normal subgroups) of index p^i.
//
// The main counter works top-down through the layers: every subgroup of
// index p^{i+1} in a p-group is maximal in one of index p^i, and the maximal
// subgroups of K are the preimages of the hyperplanes of K / Phi(K),
// Phi(K) = K^p [K, K]. A bottom-up closure enumerator (every subgroup is
// H<c> for a maximal H) serves as an independent check on small groups.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "unipro/finite_quotient.hpp"

namespace unipro {

/// A subgroup as a membership bitset over element codes plus generators.
struct Subgroup {
  std::vector<std::uint64_t> bits;
  std::vector<FiniteQuotient::Elem> gens;
  std::uint64_t order = 0;

  bool contains(FiniteQuotient::Elem x) const { return (bits[x >> 6] >> (x & 63)) & 1u; }
  std::vector<FiniteQuotient::Elem> elements() const;
};

/// Smallest subgroup containing `seeds` and normalized by `normalizers`.
Subgroup closure(const FiniteQuotient& Q, const std::vector<FiniteQuotient::Elem>& seeds,
                 const std::vector<FiniteQuotient::Elem>& normalizers = {});
Subgroup whole_group(const FiniteQuotient& Q);
/// Phi(K) = K^p [K, K].
Subgroup frattini_subgroup(const FiniteQuotient& Q, const Subgroup& K);
bool is_normal(const FiniteQuotient& Q, const Subgroup& H);

struct LowerPSeries {
  std::vector<std::uint64_t> orders;  // |P_1|, |P_2|, ..., ending at 1 (or i_max + 1 terms)
  std::vector<int> index_exponents;   // log_p |P_i : P_{i+1}|
  /// P_{i+1} equals the set of elements with p^i-divisible coordinates.
  bool matches_power_image = true;
  bool all_equal(int e) const;
};

/// P_1 = Q, P_{i+1} = P_i^p [P_i, Q], computed by closure.
LowerPSeries lower_p_series(const FiniteQuotient& Q, int i_max);
/// [Q, Q] <= Q^p (Q^4 for p = 2), checked on generator pairs.
bool is_powerful_group(const FiniteQuotient& Q);
/// log_p |Q : Q^p [Q, Q]|.
int frattini_rank(const FiniteQuotient& Q);

struct LayerCount {
  int i = 0;
  std::uint64_t all = 0;
  std::uint64_t normal = 0;
};

/// Counts of subgroups of index p^i for i = 0..i_max, layer by layer.
/// BudgetExceeded if more than `max_subgroups` subgroups would be held.
std::vector<LayerCount> count_subgroups(const FiniteQuotient& Q, int i_max, std::uint64_t max_subgroups = 200'000);
/// Normal subgroups only, walking the normal layers (a normal subgroup of
/// index p^{i+1} is maximal in a normal one of index p^i). Fills `normal`;
/// `all` stays 0.
std::vector<LayerCount> count_normal_subgroups(const FiniteQuotient& Q, int i_max);
/// Bottom-up enumeration of the whole subgroup lattice; |Q| <= 729.
std::vector<LayerCount> count_subgroups_naive(const FiniteQuotient& Q, int i_max);

struct GrowthRow {
  int i = 0;
  std::uint64_t index = 1;  // p^i
  std::uint64_t a = 0;
  std::uint64_t a_normal = 0;
  int level = 0;            // stabilization level j*, or last level tried
  bool stabilized = false;
};

struct GrowthTable {
  std::uint32_t p = 0;
  int m = 0;
  std::string d_digest;
  std::vector<GrowthRow> rows;
};

struct GrowthOptions {
  int max_level = 8;
  std::uint64_t budget = FiniteQuotient::kDefaultBudget;
};

/// For each i <= i_max, counts in G / G^{p^j} for j = i, i+1, ... until two
/// consecutive levels agree (j* is the first of the two). Rows that run out
/// of budget keep the last count and stay provisional.
GrowthTable zeta_coefficients(const UniformGroup& G, int i_max, const GrowthOptions& opts = {});

/// CSV with header p,m,d,i,index,a,a_normal,level,stabilized.
std::string growth_csv(const GrowthTable& t);

}  // namespace unipro
