#pragma once

#include "mcr/kernel_table.hpp"
#include "mcr/types.hpp"

#include <cstddef>
#include <vector>

namespace mcr {

/// d^n with overflow and budget check; throws ResourceLimit above `cap`.
std::size_t checked_power(std::size_t d, int n, std::size_t cap);

/// (f (x) g)[i * |g| + j] = f[i] g[j]; slot order is most-significant first.
Vector kron(const Vector& f, const Vector& g);

/// Reorders the slots of a level-n tensor with one-particle dimension d:
/// slot k of the result is slot perm[k] of the input.
Vector permute_slots(const Vector& t, int d, int n, const std::vector<int>& perm);

/// Adjacent exchange on slots (slot, slot+1) of a level-n tensor over the
/// one-particle basis (site, component, internal):
///   out[(a,c,z),(a',c',z')] = sum M(a,a')[(c,c'),(p,q)] in[(a',p,z'),(a,q,z)].
Vector apply_exchange(const KernelTable& m, int internal_dim, int n, int slot, const Vector& t);

/// U_{w_1} U_{w_2} ... U_{w_k} t for a word of adjacent exchanges (0-based).
Vector apply_word(const KernelTable& m, int internal_dim, int n, const std::vector<int>& word,
                  const Vector& t);

/// P_len acting on slots [lo, lo + len) of a level-n tensor, normalized so
/// that it is a projection: P = (1/len!) sum over permutations.
Vector symmetrize(const KernelTable& m, int internal_dim, int n, int lo, int len,
                  const Vector& t);

/// Operator C on V (x) V (given as sparse entries) applied to slots i < j of
/// a vector in V^{(x)L}.
Vector apply_pair_operator(const std::vector<SparseEntry>& c, int r, int len, int i, int j,
                           const Vector& v);

/// Dense matrix of a linear map on C^dim given by its action.
template <class F>
Matrix operator_matrix(int dim, F&& apply) {
  Matrix out(dim, dim);
  Vector e = Vector::Zero(dim);
  for (int k = 0; k < dim; ++k) {
    e.setZero();
    e(k) = 1.0;
    out.col(k) = apply(e);
  }
  return out;
}

}  // namespace mcr
