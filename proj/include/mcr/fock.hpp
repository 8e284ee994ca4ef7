#pragma once

#include "mcr/exchange.hpp"
#include "mcr/kernel_table.hpp"
#include "mcr/model.hpp"
#include "mcr/report.hpp"
#include "mcr/types.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace mcr {

inline constexpr std::size_t kDefaultEntryCap = 10'000'000;

/// Truncated Fock vector: levels[n] is the level-n tensor, or an empty
/// vector when that level is zero.
struct FockVector {
  std::vector<Vector> levels;

  bool has(int n) const {
    return n >= 0 && n < static_cast<int>(levels.size()) &&
           levels[static_cast<std::size_t>(n)].size() > 0;
  }
  const Vector& level(int n) const { return levels[static_cast<std::size_t>(n)]; }
  void add(int n, const Vector& t);
  /// this += c * other
  void axpy(cplx c, const FockVector& other);
};

/// One factor a^+(plus) + a^-(minus) of a word; either part may be empty.
struct FieldOp {
  Vector plus;
  Vector minus;

  static FieldOp creation(Vector f) { return {std::move(f), Vector()}; }
  static FieldOp annihilation(Vector f) { return {Vector(), std::move(f)}; }
  static FieldOp letter(Sign s, Vector f) {
    return s == Sign::plus ? creation(std::move(f)) : annihilation(std::move(f));
  }
};

/// Q-symmetric Fock space over the one-particle space of a finite model,
/// truncated at level N. One-particle index order is (site, component,
/// internal).
class FockSpace {
 public:
  FockSpace(KernelTable table, int internal_dim, int truncation,
            std::size_t cap = kDefaultEntryCap);
  FockSpace(const ExchangeKernel& kernel, const DiscreteModel& model,
            std::size_t cap = kDefaultEntryCap);

  int dim() const { return d_; }
  int internal_dim() const { return s_; }
  int truncation() const { return n_max_; }
  const KernelTable& table() const { return table_; }
  std::size_t level_size(int n) const;

  /// U_slot on a level-n tensor (0-based slot).
  Vector exchange(const Vector& t, int n, int slot) const;
  /// P_n
  Vector project(const Vector& t, int n) const;
  Matrix symmetrizer_matrix(int n) const;

  FockVector vacuum() const;
  /// a^+(f); the component pushed above level N is dropped.
  FockVector create(const Vector& f, const FockVector& F) const;
  /// a^-(f), bilinear contraction of the first slot with prefactor n.
  FockVector annihilate(const Vector& f, const FockVector& F) const;
  FockVector apply(const FieldOp& op, const FockVector& F) const;
  /// W^{(m,n)}(coeff) for a level-(m+n) coefficient tensor.
  FockVector wick_apply(const Vector& coeff, int m, int n, const FockVector& F) const;
  /// sum over nonzero entries h[g_1..g_k] a^{s_1}(e_{g_1}) ... a^{s_k}(e_{g_k}) F
  FockVector apply_phi(const Vector& coeff, const std::vector<Sign>& signature,
                       const FockVector& F) const;

  /// sum_n n! (F_n, G_n), linear in F
  cplx inner(const FockVector& F, const FockVector& G) const;

  /// (op_1 ... op_k Omega, Omega). Levels that cannot return to the vacuum
  /// are pruned; throws TruncationOverflow if a kept level exceeds N.
  cplx expectation(const std::vector<FieldOp>& word) const;

  /// P_k e_I for every multi-index I and every k <= max_level.
  std::vector<FockVector> basis_states(int max_level) const;

  Vector basis_vector(int index) const;

 private:
  KernelTable table_;
  int s_;
  int d_;
  int n_max_;
  std::size_t cap_;
};

struct Letter {
  Sign sign;
  Vector f;
};

cplx vacuum_expectation(const FockSpace& fock, const std::vector<Letter>& word);

/// tau((a^+(f_1) + a^-(f'_1)) ... (a^+(f_k) + a^-(f'_k)))
struct FieldTerm {
  Vector f;
  Vector f_prime;
};
cplx field_vacuum_expectation(const FockSpace& fock, const std::vector<FieldTerm>& terms);

using OperatorFn = std::function<FockVector(Sign, const Vector&, const FockVector&)>;

/// Residual of each smeared exchange relation on the given states, for
/// basis one-particle vectors e_a, e_b of the model behind `q`:
///   ++  a+(e_a) a+(e_b) F = Phi(U (e_a (x) e_b); ++) F
///   --  a-(e_a) a-(e_b) F = Phi(h; --) F, h = exchange of e_a (x) e_b by Q^
///   -+  a-(e_a) a+(e_b) F = delta_ab F + Phi(h; +-) F, h = exchange by Q~(y2,y1)
/// `op` supplies the operators under test; Phi is expanded over the nonzero
/// entries of h with the same operators.
ValidationReport verify_mcr_relations(const KernelTable& q, int internal_dim,
                                      const std::vector<FockVector>& states, const OperatorFn& op,
                                      double tol);

/// verify_mcr on the standard creation/annihilation operators, all basis
/// one-particle vectors, all basis states up to level N-2.
ValidationReport verify_mcr(const FockSpace& fock, double tol = 1e-10);

/// Exchange-slot tables used by the relations above.
KernelTable minus_minus_table(const KernelTable& q);
KernelTable minus_plus_table(const KernelTable& q);

double max_abs_diff(const FockVector& a, const FockVector& b);

}  // namespace mcr

