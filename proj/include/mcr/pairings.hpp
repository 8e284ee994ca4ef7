#pragma once

#include "mcr/kernel_table.hpp"
#include "mcr/fock.hpp"
#include "mcr/types.hpp"

#include <utility>
#include <vector>

namespace mcr {

/// Partition of {1..2n} into pairs, stored in canonical order: pairs[k] =
/// (i_k, j_k) with i_k < j_k and i_1 > i_2 > ... > i_n = 1. Positions are
/// 1-based throughout.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
  /// J^(k) and bold J^(k), ascending, for k = 1..n (index k-1)
  std::vector<std::vector<int>> jset;
  std::vector<std::vector<int>> bold_jset;

  int size() const { return static_cast<int>(pairs.size()); }
  int points() const { return 2 * size(); }
  /// 0-based pair index containing position p
  int pair_of(int p) const;
  int partner(int p) const;
  /// pairs as unordered sets, sorted by smaller element
  std::vector<std::pair<int, int>> sorted_pairs() const;
};

/// Canonical ordering and derived sets for any pairing of {1..2n}.
PairPartition canonicalize(std::vector<std::pair<int, int>> pairs);

/// All (n2-1)!! pairings; smallest unpaired element first, partners
/// ascending. Empty for odd n2. Throws ResourceLimit above n2 = 12.
std::vector<PairPartition> enumerate_pairings(int n2);

/// Pairs {i, j}, {k, l} with i < k < j < l.
int crossings(const PairPartition& xi);

/// xi' = {{i_k, min bold J^(k)}}
PairPartition noncrossing_shadow(const PairPartition& xi);

/// Q(xi; y) v for v in V^{(x)2n}; site_of_slot[p-1] is the site index of
/// position p.
Vector q_xi_apply(const KernelTable& q, const PairPartition& xi,
                  const std::vector<int>& site_of_slot, const Vector& v);

/// T(xi) v: bilinear contraction of slot pairs (i_k, min bold J^(k)).
cplx t_xi(const PairPartition& xi, int r, const Vector& v);

/// Slot data for a pair-partition sum: slot p carries a (positions x r)
/// matrix of V-vectors; paired slots share one position, summed over.
/// Each position lives at site `site_of_position[pos]`.
struct SlotData {
  std::vector<Matrix> slots;
  std::vector<int> site_of_position;
};

/// sum over positions (one per pair) of T(xi) Q(xi; y) (h_1 (x) ... (x) h_2n)
cplx xi_term(const KernelTable& q, const PairPartition& xi, const SlotData& data);

/// Slot data for one-particle vectors of a (site, component, internal) model.
SlotData slot_data(const std::vector<Vector>& vectors, int sites, int r, int internal_dim);

/// Moment of the fields a^+(f_k) + a^-(f'_k) via the pair-partition sum.
cplx field_moment(const KernelTable& q, int internal_dim, const std::vector<FieldTerm>& terms);

/// tau(a^-(f_1) ... a^-(f_n) a^+(f_{n+1}) ... a^+(f_2n)) via the sum over
/// partitions pairing {1..n} with {n+1..2n}, using adjacent exchanges.
/// The internal factors pair bilinearly.
cplx npoint_function(const KernelTable& q, int internal_dim, const std::vector<Vector>& annihilated,
                     const std::vector<Vector>& created);

/// Same sum on slot data (used with the site-level quasi-free formulas);
/// `weight(i, j)` multiplies each pair {i, j}, 1-based, i <= n < j.
cplx sn_sum(const KernelTable& q, const SlotData& data,
            const std::function<cplx(int, int)>& weight);

/// The partition {{t, n + pi(n + 1 - t)}} for a permutation pi of {1..n}
/// (given 1-based).
PairPartition sn_partition(const std::vector<int>& pi);

}  // namespace mcr
