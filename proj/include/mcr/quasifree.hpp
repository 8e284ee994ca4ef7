#pragma once

#include "mcr/exchange.hpp"
#include "mcr/fock.hpp"
#include "mcr/kernel_table.hpp"
#include "mcr/model.hpp"
#include "mcr/random.hpp"
#include "mcr/report.hpp"
#include "mcr/types.hpp"

#include <vector>

namespace mcr {

struct KOperator {
  Matrix matrix;
  double kappa;
};

/// Throws InvalidOperator naming the violated condition: not Hermitian,
/// eigenvalue out of range for kappa, or degenerate (K = 0 or K = -1/kappa).
KOperator validate_k(const Matrix& k, double kappa, double tol = 1e-12);

/// Principal square root of a Hermitian PSD matrix; eigenvalues in
/// [-tol, 0) are clamped to zero.
Matrix sqrt_psd(const Matrix& m, double tol = 1e-12);

/// f = phi (x) g as a one-particle vector, phi an (m x r) matrix.
Vector product_vector(const Matrix& phi, const Vector& g);

/// Doubled model with the represented field operators
///   A+(f) = a2+((1 (x) K2) f) + a1-((1 (x) K1) f)
///   A-(f) = a2-((1 (x) K2') f) + a1+((1 (x) K1') f)
/// acting on the Fock space of the doubled kernel. Copy 1 occupies the first
/// m*r*s doubled one-particle indices.
class QuasiFreeContext {
 public:
  /// Validates the kernel against the doubling assumptions (throws
  /// ConstraintViolation) and K against kappa (throws InvalidOperator).
  QuasiFreeContext(const ExchangeKernel& kernel, const DiscreteModel& model, const Matrix& k,
                   int doubled_truncation, std::size_t cap = kDefaultEntryCap);

  const KernelTable& table() const { return table_; }
  const FockSpace& fock() const { return fock_; }
  const ExchangeKernel& kernel() const { return kernel_; }
  const DiscreteModel& model() const { return model_; }
  double kappa() const { return kappa_; }
  const Matrix& k() const { return k_; }
  const Matrix& k1() const { return k1_; }
  const Matrix& k2() const { return k2_; }
  Matrix k1_prime() const { return k1_.conjugate(); }
  Matrix k2_prime() const { return k2_.conjugate(); }
  int one_particle_dim() const { return model_.one_particle_dim(); }
  const ValidationReport& assumptions() const { return assumptions_; }
  /// max |Q~(y1,y2) - Q(y2,y1)|
  double strong_condition_residual() const { return strong_residual_; }

  /// (1 (x) c) f
  Vector apply_internal(const Matrix& c, const Vector& f) const;
  /// f placed in copy 1 or copy 2 of the doubled one-particle space
  Vector embed(int copy, const Vector& f) const;

  FieldOp represent(Sign sign, const Vector& f) const;
  /// B(f) = A+(f) + A-(Jf)
  FieldOp field_b(const Vector& f) const;

 private:
  ExchangeKernel kernel_;
  DiscreteModel model_;
  KernelTable table_;
  ValidationReport assumptions_;
  double kappa_;
  double strong_residual_;
  Matrix k_;
  Matrix k1_;
  Matrix k2_;
  FockSpace fock_;
};

/// Vacuum expectation of the represented word.
cplx tau(const QuasiFreeContext& ctx, const std::vector<Letter>& word);
/// tau(B(f_1) ... B(f_n))
cplx tau_fields(const QuasiFreeContext& ctx, const std::vector<Vector>& fs);

/// sum_z (K g1)(z) g2(z)
cplx rho2(const QuasiFreeContext& ctx, const Vector& g1, const Vector& g2);
/// (g2, g1) + (K g1, g2) + kappa (g2, K g1) with (u, v) = sum u conj(v)
cplx lambda2(const QuasiFreeContext& ctx, const Vector& g1, const Vector& g2);

/// sum (K2' g1)(K2 g2) - kappa sum (K1' g1)(K1 g2) - sum g1 g2
double delta_identity_residual(const QuasiFreeContext& ctx, const Vector& g1, const Vector& g2);

/// tau(A+ ... A+ A- ... A-) against delta_mn times the pair sum with rho2.
ValidationReport verify_gauge_quasifree(const QuasiFreeContext& ctx, int m, int n, int samples,
                                        Rng& rng, double tol = 1e-8);

/// tau(B ... B) against the full pair-partition sum with lambda2, real phi.
/// Also records the strong condition as its own check.
ValidationReport verify_strongly_quasifree(const QuasiFreeContext& ctx, int n, int samples,
                                           Rng& rng, double tol = 1e-8);

/// Q-MCR for the represented A+- on every basis one-particle pair and every
/// doubled basis state up to `max_level` (needs truncation >= max_level + 2).
ValidationReport verify_represented_mcr(const QuasiFreeContext& ctx, int max_level,
                                        double tol = 1e-10);

/// (A+(f) F, G) = (F, A-(Jf) G) on basis f and doubled basis states up to
/// truncation - 1.
ValidationReport verify_adjointness(const QuasiFreeContext& ctx, double tol = 1e-10);

}  // namespace mcr
