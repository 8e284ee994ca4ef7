#pragma once

#include "mcr/model.hpp"
#include "mcr/phase.hpp"
#include "mcr/report.hpp"
#include "mcr/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace mcr {

enum class Family { abelian, lifted, opposite_type, three_component, fused, tabulated, derived };

std::string to_string(Family f);

/// Exchange kernel Q(y1, y2): a unitary r^2 x r^2 matrix on V (x) V for
/// each pair of exchange coordinates. Basis e_i (x) e_j has flat index
/// i * r + j. Immutable; copies share the evaluator.
class ExchangeKernel {
 public:
  using Evaluator = std::function<Matrix(double, double)>;

  ExchangeKernel(Family family, int components, std::string label, Evaluator eval);

  Matrix eval(double y1, double y2) const;

  Family family() const { return family_; }
  int components() const { return components_; }
  const std::string& label() const { return label_; }
  std::optional<double> kappa() const { return kappa_; }

  ExchangeKernel with_kappa(double kappa) const;
  ExchangeKernel relabeled(std::string label) const;

 private:
  Family family_;
  int components_;
  std::string label_;
  std::shared_ptr<const Evaluator> eval_;
  std::optional<double> kappa_;
};

/// Phase q(y1, y2, i, j) indexed by 0-based components.
using IndexedPhase = std::function<cplx(double, double, int, int)>;

struct TableEntry {
  double y1;
  double y2;
  Matrix q;
};

// Raw family constructors; they build the displayed action without
// checking hypotheses. `construct_family` validates first.

/// r = 1, Q = q(y1, y2)
ExchangeKernel make_abelian(const PhaseFn& q);
/// Q e_i (x) e_j = q(y1, y2, i, j) e_j (x) e_i
ExchangeKernel make_lifted(const std::vector<std::vector<PhaseFn>>& q);
/// Q e_i (x) e_j = q(y1, y2, i, j) e_theta(j) (x) e_theta(i)
ExchangeKernel make_opposite_type(std::vector<int> theta, IndexedPhase q, std::string label,
                                  Family family = Family::opposite_type);
ExchangeKernel make_two_component(const PhaseFn& q1, const PhaseFn& q2);
ExchangeKernel make_three_component(const PhaseFn& q1, const PhaseFn& q2, const PhaseFn& q3,
                                    const PhaseFn& q4);
/// Fusion of k two-component quasiparticles; r = 2^k.
ExchangeKernel make_fused(const PhaseFn& q1, const PhaseFn& q2, int k);
/// Explicit matrices keyed by exact coordinate pairs.
ExchangeKernel make_tabulated(int components, std::vector<TableEntry> entries);

/// Fused phase for multi-indices given as flat 0-based indices in {0,1}^k.
cplx fused_phase(const PhaseFn& q1, const PhaseFn& q2, int k, double y1, double y2, int multi_i,
                 int multi_j);

/// Copy of `kernel` whose (row, col) entry at (y1, y2) is multiplied by `factor`.
ExchangeKernel perturb_entry(const ExchangeKernel& kernel, double y1, double y2, int row, int col,
                             cplx factor);

struct AbelianSpec {
  PhaseFn q;
};
struct LiftedSpec {
  std::vector<std::vector<PhaseFn>> q;
};
struct OppositeTypeSpec {
  std::vector<int> theta;  // 0-based involution
  std::vector<std::vector<PhaseFn>> q;
};
struct TwoComponentSpec {
  PhaseFn q1;
  PhaseFn q2;
};
struct ThreeComponentSpec {
  PhaseFn q1;
  PhaseFn q2;
  PhaseFn q3;
  PhaseFn q4;
};
struct FusedSpec {
  TwoComponentSpec base;
  int k;
};
struct TabulatedSpec {
  int components;
  std::vector<TableEntry> entries;
};

using KernelSpec = std::variant<AbelianSpec, LiftedSpec, OppositeTypeSpec, TwoComponentSpec,
                                ThreeComponentSpec, FusedSpec, TabulatedSpec>;

/// Validates the family hypotheses at every site pair of `model` and builds
/// the kernel. Throws ConstraintViolation naming the failed hypothesis.
ExchangeKernel construct_family(const KernelSpec& spec, const DiscreteModel& model,
                                double tol = 1e-12);

/// Q^(y1,y2) from Q(y2,y1): conjugate-swap transform S Q(y2,y1) S with
/// S(u (x) v) = Jv (x) Ju.
Matrix hat_transform(const Matrix& q_swapped, int r);
/// Q~ from Q at the same arguments:
/// <Q~ e_i (x) e_j, e_k (x) e_l> = <Q e_k (x) e_i, e_l (x) e_j>.
Matrix tilde_transform(const Matrix& q, int r);

ExchangeKernel derive_hat(const ExchangeKernel& kernel);
ExchangeKernel derive_tilde(const ExchangeKernel& kernel);

/// Unitarity, adjoint symmetry and functional Yang-Baxter residuals on all
/// site pairs and triples of the model.
ValidationReport check_kernel_axioms(const ExchangeKernel& kernel, const DiscreteModel& model,
                                     double tol = 1e-12);

/// Conditions (i)-(v) required by the doubling construction, with kappa
/// extracted from Tr(Q~(y,y) v) = kappa Tr(v).
ValidationReport check_assumptions(const ExchangeKernel& kernel, const DiscreteModel& model,
                                   double tol = 1e-12);

/// max |Q~(y1,y2) - Q(y2,y1)| over site pairs; zero iff the doubling
/// construction yields strongly quasi-free states.
double strong_condition_residual(const ExchangeKernel& kernel, const DiscreteModel& model);

}  // namespace mcr
