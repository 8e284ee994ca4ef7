#pragma once

#include "mcr/exchange.hpp"
#include "mcr/model.hpp"
#include "mcr/report.hpp"
#include "mcr/types.hpp"

#include <functional>
#include <vector>

namespace mcr {

struct SparseEntry {
  int row;
  int col;
  cplx value;
};

/// Kernel matrices evaluated at every ordered pair of site indices, with
/// sparse entry lists for fast slot application. Sites are addressed by
/// index; `coordinate(a)` maps back to the exchange axis.
class KernelTable {
 public:
  KernelTable(std::vector<double> coords, int components, std::vector<Matrix> mats);

  static KernelTable from_kernel(const ExchangeKernel& kernel, const DiscreteModel& model);
  static KernelTable from_function(std::vector<double> coords, int components,
                                   const std::function<Matrix(int, int)>& fn);

  int sites() const { return static_cast<int>(coords_.size()); }
  int components() const { return r_; }
  double coordinate(int a) const { return coords_[static_cast<std::size_t>(a)]; }
  const std::vector<double>& coordinates() const { return coords_; }

  const Matrix& at(int a, int b) const { return mats_[idx(a, b)]; }
  const std::vector<SparseEntry>& sparse(int a, int b) const { return sparse_[idx(a, b)]; }

  /// Q^(a, b) = hat_transform(Q(b, a))
  KernelTable hat() const;
  /// Q~(a, b) = tilde_transform(Q(a, b))
  KernelTable tilde() const;
  /// M(a, b)^{-1} at every pair; throws Error if singular
  KernelTable inverse() const;

 private:
  std::size_t idx(int a, int b) const {
    return static_cast<std::size_t>(a) * coords_.size() + static_cast<std::size_t>(b);
  }

  std::vector<double> coords_;
  int r_;
  std::vector<Matrix> mats_;
  std::vector<std::vector<SparseEntry>> sparse_;
};

/// Doubled kernel on 2m sites: index a < m is copy 1, a >= m copy 2 of site
/// a mod m. Same copy gives Q(y_a, y_b); different copies give Q~(y_b, y_a).
KernelTable doubled_table(const KernelTable& q);

/// Unitarity, adjoint symmetry and YBE on every site pair and triple.
ValidationReport check_table_axioms(const KernelTable& q, double tol);

/// Constant c with sum_k M(a,a)[(k,k),(i,j)] = c delta_ij at every diagonal
/// site; returns the residual of the best constant.
struct TraceConstant {
  double value;
  double residual;
  std::optional<Counterexample> where;
};
TraceConstant trace_constant(const KernelTable& m);

}  // namespace mcr
