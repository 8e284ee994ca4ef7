#include "mcr/quasifree.hpp"

#include "mcr/pairings.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace mcr {

KOperator validate_k(const Matrix& k, double kappa, double tol) {
  if (k.rows() != k.cols()) throw InvalidOperator("K: matrix is not square");
  if (max_abs(Matrix(k - k.adjoint())) > tol) throw InvalidOperator("K: not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(k);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  if (lo < -tol)
    throw InvalidOperator("K: eigenvalue " + std::to_string(lo) + " below 0");
  if (kappa < 0.0 && hi > -1.0 / kappa + tol)
    throw InvalidOperator("K: eigenvalue " + std::to_string(hi) + " above -1/kappa = " +
                          std::to_string(-1.0 / kappa));
  const auto id = Matrix::Identity(k.rows(), k.cols());
  if (max_abs(k) <= tol) throw InvalidOperator("K: degenerate (K = 0)");
  if (kappa != 0.0 && max_abs(Matrix(k + id / kappa)) <= tol)
    throw InvalidOperator("K: degenerate (K = -1/kappa)");
  return {k, kappa};
}

Matrix sqrt_psd(const Matrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -tol)
      throw InvalidOperator("sqrt: eigenvalue " + std::to_string(ev(i)) + " is negative");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  const Matrix& u = es.eigenvectors();
  return u * ev.cast<cplx>().asDiagonal() * u.adjoint();
}

Vector product_vector(const Matrix& phi, const Vector& g) {
  const Eigen::Index m = phi.rows(), r = phi.cols(), s = g.size();
  Vector f(m * r * s);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index c = 0; c < r; ++c)
      for (Eigen::Index z = 0; z < s; ++z) f((a * r + c) * s + z) = phi(a, c) * g(z);
  return f;
}

namespace {

ValidationReport validated_assumptions(const ExchangeKernel& kernel, const DiscreteModel& model) {
  ValidationReport rep = check_assumptions(kernel, model, Tolerances{}.fock);
  if (!rep.all_pass()) {
    std::string failed;
    for (const auto& c : rep.checks)
      if (!c.pass) failed += (failed.empty() ? "" : ", ") + c.name;
    throw ConstraintViolation("doubling: assumptions fail (" + failed + ")");
  }
  return rep;
}

}  // namespace

QuasiFreeContext::QuasiFreeContext(const ExchangeKernel& kernel, const DiscreteModel& model,
                                   const Matrix& k, int doubled_truncation, std::size_t cap)
    : kernel_(kernel),
      model_(model),
      table_(KernelTable::from_kernel(kernel, model)),
      assumptions_(validated_assumptions(kernel, model)),
      kappa_(*assumptions_.kappa),
      strong_residual_(mcr::strong_condition_residual(kernel, model)),
      k_(validate_k(k, kappa_).matrix),
      k1_(sqrt_psd(k_)),
      k2_(sqrt_psd(Matrix::Identity(k.rows(), k.cols()) + kappa_ * k_)),
      fock_(doubled_table(table_), model.internal_dim(), doubled_truncation, cap) {
  if (k.rows() != model.internal_dim())
    throw InvalidOperator("K: dimension " + std::to_string(k.rows()) +
                          " does not match internal dimension " +
                          std::to_string(model.internal_dim()));
}

Vector QuasiFreeContext::apply_internal(const Matrix& c, const Vector& f) const {
  const int s = model_.internal_dim();
  Vector out(f.size());
  for (Eigen::Index b = 0; b < f.size() / s; ++b) out.segment(b * s, s) = c * f.segment(b * s, s);
  return out;
}

Vector QuasiFreeContext::embed(int copy, const Vector& f) const {
  const int d = one_particle_dim();
  Vector out = Vector::Zero(2 * d);
  out.segment((copy - 1) * d, d) = f;
  return out;
}

FieldOp QuasiFreeContext::represent(Sign sign, const Vector& f) const {
  if (sign == Sign::plus)
    return {embed(2, apply_internal(k2_, f)), embed(1, apply_internal(k1_, f))};
  return {embed(1, apply_internal(k1_prime(), f)), embed(2, apply_internal(k2_prime(), f))};
}

FieldOp QuasiFreeContext::field_b(const Vector& f) const {
  FieldOp a = represent(Sign::plus, f);
  const FieldOp b = represent(Sign::minus, f.conjugate());
  a.plus += b.plus;
  a.minus += b.minus;
  return a;
}

cplx tau(const QuasiFreeContext& ctx, const std::vector<Letter>& word) {
  std::vector<FieldOp> ops;
  ops.reserve(word.size());
  for (const auto& l : word) ops.push_back(ctx.represent(l.sign, l.f));
  return ctx.fock().expectation(ops);
}

cplx tau_fields(const QuasiFreeContext& ctx, const std::vector<Vector>& fs) {
  std::vector<FieldOp> ops;
  ops.reserve(fs.size());
  for (const auto& f : fs) ops.push_back(ctx.field_b(f));
  return ctx.fock().expectation(ops);
}

cplx rho2(const QuasiFreeContext& ctx, const Vector& g1, const Vector& g2) {
  return (ctx.k() * g1).cwiseProduct(g2).sum();
}

cplx lambda2(const QuasiFreeContext& ctx, const Vector& g1, const Vector& g2) {
  // (u, v) = v.dot(u) in Eigen's convention (conjugates the receiver)
  const Vector kg1 = ctx.k() * g1;
  return g1.dot(g2) + g2.dot(kg1) + ctx.kappa() * kg1.dot(g2);
}

double delta_identity_residual(const QuasiFreeContext& ctx, const Vector& g1, const Vector& g2) {
  const cplx lhs = (ctx.k2_prime() * g1).cwiseProduct(ctx.k2() * g2).sum() -
                   ctx.kappa() * (ctx.k1_prime() * g1).cwiseProduct(ctx.k1() * g2).sum();
  return std::abs(lhs - g1.cwiseProduct(g2).sum());
}

namespace {

SlotData site_slots(const std::vector<Matrix>& phis) {
  SlotData data;
  data.slots = phis;
  const auto m = phis.empty() ? 0 : phis.front().rows();
  for (Eigen::Index a = 0; a < m; ++a) data.site_of_position.push_back(static_cast<int>(a));
  return data;
}

}  // namespace

ValidationReport verify_gauge_quasifree(const QuasiFreeContext& ctx, int m, int n, int samples,
                                        Rng& rng, double tol) {
  if (m < 0 || n < 0 || m + n > 6) throw Error("gauge check: need m + n <= 6");
  const DiscreteModel& model = ctx.model();
  const int sites = model.site_count(), r = model.components(), s = model.internal_dim();
  ResidualTracker tr;
  for (int it = 0; it < samples; ++it) {
    std::vector<Matrix> phis;
    std::vector<Vector> gs;
    std::vector<Letter> word;
    for (int k = 0; k < m + n; ++k) {
      phis.push_back(random_matrix(rng, sites, r));
      gs.push_back(random_vector(rng, s));
      word.push_back({k < m ? Sign::plus : Sign::minus, product_vector(phis.back(), gs.back())});
    }
    const cplx lhs = tau(ctx, word);
    cplx rhs = 0.0;
    if (m == n)
      rhs = sn_sum(ctx.table(), site_slots(phis), [&](int i, int j) {
        return rho2(ctx, gs[static_cast<std::size_t>(i - 1)], gs[static_cast<std::size_t>(j - 1)]);
      });
    tr.observe(scaled_error(lhs, rhs), {}, it, -1);
  }
  ValidationReport rep;
  rep.kappa = ctx.kappa();
  rep.add("gauge_quasifree_" + std::to_string(m) + "_" + std::to_string(n), tr.max(), tol,
          tr.where());
  return rep;
}

ValidationReport verify_strongly_quasifree(const QuasiFreeContext& ctx, int n, int samples,
                                           Rng& rng, double tol) {
  if (n < 0 || n > 6) throw Error("strong check: need n <= 6");
  const DiscreteModel& model = ctx.model();
  const int sites = model.site_count(), r = model.components(), s = model.internal_dim();
  const auto partitions = enumerate_pairings(n);
  ResidualTracker tr;
  for (int it = 0; it < samples; ++it) {
    std::vector<Matrix> phis;
    std::vector<Vector> gs, fs;
    for (int k = 0; k < n; ++k) {
      phis.push_back(random_matrix(rng, sites, r).real().cast<cplx>());
      gs.push_back(random_vector(rng, s));
      fs.push_back(product_vector(phis.back(), gs.back()));
    }
    const cplx lhs = tau_fields(ctx, fs);
    const SlotData data = site_slots(phis);
    cplx rhs = 0.0;
    for (const auto& xi : partitions) {
      cplx w = 1.0;
      for (const auto& [i, j] : xi.sorted_pairs())
        w *= lambda2(ctx, gs[static_cast<std::size_t>(i - 1)], gs[static_cast<std::size_t>(j - 1)]);
      rhs += w * xi_term(ctx.table(), xi, data);
    }
    tr.observe(scaled_error(lhs, rhs), {}, it, -1);
  }
  ValidationReport rep;
  rep.kappa = ctx.kappa();
  rep.add("strongly_quasifree_" + std::to_string(n), tr.max(), tol, tr.where());
  rep.add("strong_condition", ctx.strong_condition_residual(), Tolerances{}.fock);
  return rep;
}

ValidationReport verify_represented_mcr(const QuasiFreeContext& ctx, int max_level, double tol) {
  const FockSpace& fock = ctx.fock();
  if (fock.truncation() < max_level + 2)
    throw TruncationOverflow("represented MCR: truncation must be at least max_level + 2");
  const auto states = fock.basis_states(max_level);
  const OperatorFn op = [&](Sign sign, const Vector& f, const FockVector& F) {
    return fock.apply(ctx.represent(sign, f), F);
  };
  ValidationReport rep = verify_mcr_relations(ctx.table(), ctx.model().internal_dim(), states, op, tol);
  rep.kappa = ctx.kappa();
  return rep;
}

ValidationReport verify_adjointness(const QuasiFreeContext& ctx, double tol) {
  const FockSpace& fock = ctx.fock();
  const auto states = fock.basis_states(fock.truncation() - 1);
  const int d = ctx.one_particle_dim();
  ResidualTracker tr;
  for (int a = 0; a < d; ++a) {
    Vector f = Vector::Zero(d);
    f(a) = 1.0;
    const FieldOp plus = ctx.represent(Sign::plus, f);
    const FieldOp minus = ctx.represent(Sign::minus, f.conjugate());
    std::vector<FockVector> left, right;
    for (const auto& F : states) {
      left.push_back(fock.apply(plus, F));
      right.push_back(fock.apply(minus, F));
    }
    for (std::size_t i = 0; i < states.size(); ++i)
      for (std::size_t j = 0; j < states.size(); ++j) {
        const cplx lhs = fock.inner(left[i], states[j]);
        const cplx rhs = fock.inner(states[i], right[j]);
        tr.observe(std::abs(lhs - rhs), {}, static_cast<int>(i), static_cast<int>(j));
      }
  }
  ValidationReport rep;
  rep.add("adjointness", tr.max(), tol, tr.where());
  return rep;
}

}  // namespace mcr
