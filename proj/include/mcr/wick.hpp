#pragma once

#include "mcr/kernel_table.hpp"
#include "mcr/random.hpp"
#include "mcr/types.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace mcr {

using Signature = std::vector<Sign>;

/// c 1 + sum of Phi(f; signature) with full coefficient tensors over the
/// one-particle basis of dimension `dim`. Terms with equal signatures are
/// merged; map order is the canonical term order.
struct FormalSum {
  int dim = 0;
  cplx scalar = 0.0;
  std::map<Signature, Vector> terms;

  static FormalSum identity(int dim);
  static FormalSum phi(int dim, Vector coeff, Signature signature);

  /// Accumulates a term; the empty signature goes to the scalar.
  void add(const Signature& signature, const Vector& coeff);
  FormalSum& operator+=(const FormalSum& other);
  FormalSum scaled(cplx c) const;
  /// Drops tensors whose largest entry is at most `threshold`.
  void prune(double threshold = 1e-14);
  std::size_t term_count() const { return terms.size(); }
};

/// Bilinear concatenation; throws ResourceLimit when a tensor exceeds `cap`.
FormalSum product(const FormalSum& a, const FormalSum& b, std::size_t cap = 10'000'000);

/// Reverses slots and signs, flips each sign, conjugates coefficients.
FormalSum star(const FormalSum& a);

enum class RuleOrder { leftmost, rightmost, random };

struct OrderingOptions {
  RuleOrder order = RuleOrder::leftmost;
  std::uint64_t seed = 0;
  double prune_threshold = 1e-14;
};

struct OrderingStats {
  std::size_t steps = 0;
  std::size_t step_bound = 0;
};

/// Rewriting in the algebra generated by one kernel table.
class WickAlgebra {
 public:
  WickAlgebra(KernelTable q, int internal_dim);

  int dim() const { return d_; }
  const KernelTable& table() const { return q_; }

  /// All + before all -, then P_m (x) P^_n on every term.
  FormalSum normal_order(const FormalSum& a, const OrderingOptions& opt = {},
                         OrderingStats* stats = nullptr) const;
  /// All - before all +. Throws Error if Q~ is singular or the inverse-trace
  /// constant does not exist.
  FormalSum anti_normal_order(const FormalSum& a, const OrderingOptions& opt = {},
                              OrderingStats* stats = nullptr) const;
  /// Scalar part of the normal-ordered form.
  cplx symbolic_vacuum(const FormalSum& a, const OrderingOptions& opt = {}) const;

  /// Constant c with Tr(Q~(x,x)^{-1} v) = c Tr v, if it exists within tol.
  std::optional<double> inverse_trace_constant(double tol = 1e-10) const;

 private:
  FormalSum reorder(const FormalSum& a, Sign first, const KernelTable& swap, cplx contraction,
                    const OrderingOptions& opt, OrderingStats* stats) const;

  KernelTable q_;
  int s_;
  int d_;
};

/// Sum over alpha of t[.., alpha, alpha, ..] on slots (slot, slot + 1).
Vector contract_adjacent(const Vector& t, int d, int n, int slot);

/// Step bound (2k)! 2^k with k = ceil(max word length / 2).
std::size_t ordering_step_bound(int max_length);

}  // namespace mcr
