#include "mcr/kernel_table.hpp"

#include <Eigen/LU>
#include <Eigen/Sparse>

#include <cmath>

namespace mcr {

namespace {

using SpMat = Eigen::SparseMatrix<cplx>;

std::vector<SparseEntry> to_sparse(const Matrix& m) {
  std::vector<SparseEntry> out;
  const double cut = 1e-15 * std::max(1.0, max_abs(m));
  for (int c = 0; c < m.cols(); ++c)
    for (int r = 0; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > cut) out.push_back({r, c, m(r, c)});
  return out;
}

// Q (x) 1 (first = true) or 1 (x) Q on V^{(x)3}.
SpMat embed(const std::vector<SparseEntry>& q, int r, bool first) {
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(q.size() * static_cast<std::size_t>(r));
  const int r2 = r * r;
  for (const auto& e : q)
    for (int k = 0; k < r; ++k) {
      if (first)
        trips.emplace_back(e.row * r + k, e.col * r + k, e.value);
      else
        trips.emplace_back(k * r2 + e.row, k * r2 + e.col, e.value);
    }
  SpMat m(r2 * r, r2 * r);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

double sparse_max_abs(const SpMat& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

}  // namespace

KernelTable::KernelTable(std::vector<double> coords, int components, std::vector<Matrix> mats)
    : coords_(std::move(coords)), r_(components), mats_(std::move(mats)) {
  const std::size_t m = coords_.size();
  if (mats_.size() != m * m) throw Error("kernel table needs one matrix per site pair");
  for (const auto& q : mats_)
    if (q.rows() != r_ * r_ || q.cols() != r_ * r_)
      throw Error("kernel table matrix has wrong shape");
  sparse_.reserve(mats_.size());
  for (const auto& q : mats_) sparse_.push_back(to_sparse(q));
}

KernelTable KernelTable::from_kernel(const ExchangeKernel& kernel, const DiscreteModel& model) {
  if (kernel.components() != model.components())
    throw Error("kernel has " + std::to_string(kernel.components()) +
                " components but model has " + std::to_string(model.components()));
  const auto& y = model.sites();
  return from_function(y, kernel.components(),
                       [&](int a, int b) { return kernel.eval(y[a], y[b]); });
}

KernelTable KernelTable::from_function(std::vector<double> coords, int components,
                                       const std::function<Matrix(int, int)>& fn) {
  const int m = static_cast<int>(coords.size());
  std::vector<Matrix> mats;
  mats.reserve(static_cast<std::size_t>(m * m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) mats.push_back(fn(a, b));
  return KernelTable(std::move(coords), components, std::move(mats));
}

KernelTable KernelTable::hat() const {
  return from_function(coords_, r_, [&](int a, int b) { return hat_transform(at(b, a), r_); });
}

KernelTable KernelTable::tilde() const {
  return from_function(coords_, r_, [&](int a, int b) { return tilde_transform(at(a, b), r_); });
}

KernelTable KernelTable::inverse() const {
  return from_function(coords_, r_, [&](int a, int b) {
    Eigen::FullPivLU<Matrix> lu(at(a, b));
    if (!lu.isInvertible())
      throw Error("kernel matrix is singular at sites (" + std::to_string(coordinate(a)) + ", " +
                  std::to_string(coordinate(b)) + ")");
    return Matrix(lu.inverse());
  });
}

KernelTable doubled_table(const KernelTable& q) {
  const int m = q.sites();
  const KernelTable qt = q.tilde();
  std::vector<double> coords = q.coordinates();
  coords.insert(coords.end(), q.coordinates().begin(), q.coordinates().end());
  return KernelTable::from_function(std::move(coords), q.components(), [&](int a, int b) {
    const int ca = a / m, cb = b / m;
    const int sa = a % m, sb = b % m;
    return ca == cb ? q.at(sa, sb) : qt.at(sb, sa);
  });
}

ValidationReport check_table_axioms(const KernelTable& q, double tol) {
  const int m = q.sites();
  const int r = q.components();
  const int r2 = r * r;
  const Matrix id = Matrix::Identity(r2, r2);

  ResidualTracker unitary, adjoint, ybe;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const std::vector<double> at{q.coordinate(a), q.coordinate(b)};
      const Matrix& x = q.at(a, b);
      Eigen::Index i = 0, j = 0;
      const Matrix du = x * x.adjoint() - id;
      double res = du.cwiseAbs().maxCoeff(&i, &j);
      unitary.observe(res, at, static_cast<int>(i), static_cast<int>(j));
      const Matrix da = x.adjoint() - q.at(b, a);
      res = da.cwiseAbs().maxCoeff(&i, &j);
      adjoint.observe(res, at, static_cast<int>(i), static_cast<int>(j));
    }

  std::vector<SpMat> first, second;
  first.reserve(static_cast<std::size_t>(m * m));
  second.reserve(static_cast<std::size_t>(m * m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      first.push_back(embed(q.sparse(a, b), r, true));
      second.push_back(embed(q.sparse(a, b), r, false));
    }
  auto q1 = [&](int a, int b) -> const SpMat& { return first[static_cast<std::size_t>(a * m + b)]; };
  auto q2 = [&](int a, int b) -> const SpMat& { return second[static_cast<std::size_t>(a * m + b)]; };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        const SpMat lhs = SpMat(q1(a, b) * q2(a, c)) * q1(b, c);
        const SpMat rhs = SpMat(q2(b, c) * q1(a, c)) * q2(a, b);
        const SpMat diff = lhs - rhs;
        ybe.observe(sparse_max_abs(diff), {q.coordinate(a), q.coordinate(b), q.coordinate(c)});
      }

  ValidationReport rep;
  rep.add("unitarity", unitary.max(), tol, unitary.where());
  rep.add("adjoint_symmetry", adjoint.max(), tol, adjoint.where());
  rep.add("yang_baxter", ybe.max(), tol, ybe.where());
  return rep;
}

TraceConstant trace_constant(const KernelTable& mt) {
  const int r = mt.components();
  // partial trace sum_k M[(k,k),(i,j)]
  auto tr = [&](int a, int i, int j) {
    cplx s = 0.0;
    for (int k = 0; k < r; ++k) s += mt.at(a, a)(k * r + k, i * r + j);
    return s;
  };
  const cplx c = tr(0, 0, 0);
  ResidualTracker res;
  res.observe(std::abs(c.imag()), {mt.coordinate(0)}, 0, 0);
  for (int a = 0; a < mt.sites(); ++a)
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) {
        const cplx want = i == j ? cplx{c.real(), 0.0} : cplx{0.0, 0.0};
        res.observe(std::abs(tr(a, i, j) - want), {mt.coordinate(a)}, i, j);
      }
  return {c.real(), res.max(), res.where()};
}

}  // namespace mcr
