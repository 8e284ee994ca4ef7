#include "mcr/exchange.hpp"

#include "mcr/kernel_table.hpp"

#include <cmath>
#include <sstream>

namespace mcr {

std::string to_string(Family f) {
  switch (f) {
    case Family::abelian: return "abelian";
    case Family::lifted: return "lifted";
    case Family::opposite_type: return "opposite-type";
    case Family::three_component: return "three-component";
    case Family::fused: return "fused";
    case Family::tabulated: return "tabulated";
    case Family::derived: return "derived";
  }
  return "unknown";
}

ExchangeKernel::ExchangeKernel(Family family, int components, std::string label, Evaluator eval)
    : family_(family),
      components_(components),
      label_(std::move(label)),
      eval_(std::make_shared<const Evaluator>(std::move(eval))) {
  if (components_ < 1) throw Error("kernel needs at least one component");
}

Matrix ExchangeKernel::eval(double y1, double y2) const { return (*eval_)(y1, y2); }

ExchangeKernel ExchangeKernel::with_kappa(double kappa) const {
  ExchangeKernel k = *this;
  k.kappa_ = kappa;
  return k;
}

ExchangeKernel ExchangeKernel::relabeled(std::string label) const {
  ExchangeKernel k = *this;
  k.label_ = std::move(label);
  return k;
}

ExchangeKernel make_abelian(const PhaseFn& q) {
  return ExchangeKernel(Family::abelian, 1, "abelian[" + q.repr() + "]", [q](double y1, double y2) {
    Matrix m(1, 1);
    m(0, 0) = q(y1, y2);
    return m;
  });
}

ExchangeKernel make_lifted(const std::vector<std::vector<PhaseFn>>& q) {
  const int r = static_cast<int>(q.size());
  for (const auto& row : q)
    if (static_cast<int>(row.size()) != r) throw Error("lifted phase table must be square");
  return ExchangeKernel(Family::lifted, r, "lifted[r=" + std::to_string(r) + "]",
                        [q, r](double y1, double y2) {
                          Matrix m = Matrix::Zero(r * r, r * r);
                          for (int i = 0; i < r; ++i)
                            for (int j = 0; j < r; ++j) m(j * r + i, i * r + j) = q[i][j](y1, y2);
                          return m;
                        });
}

ExchangeKernel make_opposite_type(std::vector<int> theta, IndexedPhase q, std::string label,
                                  Family family) {
  const int r = static_cast<int>(theta.size());
  return ExchangeKernel(family, r, std::move(label),
                        [theta = std::move(theta), q = std::move(q), r](double y1, double y2) {
                          Matrix m = Matrix::Zero(r * r, r * r);
                          for (int i = 0; i < r; ++i)
                            for (int j = 0; j < r; ++j)
                              m(theta[j] * r + theta[i], i * r + j) = q(y1, y2, i, j);
                          return m;
                        });
}

namespace {

IndexedPhase two_component_phase(const PhaseFn& q1, const PhaseFn& q2) {
  return [q1, q2](double y1, double y2, int i, int j) { return i == j ? q1(y1, y2) : q2(y1, y2); };
}

IndexedPhase three_component_phase(const PhaseFn& q1, const PhaseFn& q2, const PhaseFn& q3,
                                   const PhaseFn& q4) {
  return [q1, q2, q3, q4](double y1, double y2, int i, int j) {
    if (i == 2 && j == 2) return q3(y1, y2);
    if (i == 2 || j == 2) return q4(y1, y2);
    return i == j ? q1(y1, y2) : q2(y1, y2);
  };
}

}  // namespace

ExchangeKernel make_two_component(const PhaseFn& q1, const PhaseFn& q2) {
  return make_opposite_type({1, 0}, two_component_phase(q1, q2),
                            "two-component[" + q1.repr() + "," + q2.repr() + "]");
}

ExchangeKernel make_three_component(const PhaseFn& q1, const PhaseFn& q2, const PhaseFn& q3,
                                    const PhaseFn& q4) {
  return make_opposite_type({1, 0, 2}, three_component_phase(q1, q2, q3, q4),
                            "three-component[" + q1.repr() + "," + q2.repr() + "," + q3.repr() +
                                "," + q4.repr() + "]",
                            Family::three_component);
}

cplx fused_phase(const PhaseFn& q1, const PhaseFn& q2, int k, double y1, double y2, int multi_i,
                 int multi_j) {
  // Component l (0-based) of a multi-index sits at bit k-1-l; theta flips a
  // bit, so theta^t(i_l) differs from i_l iff t is odd.
  const cplx a = q1(y1, y2), b = q2(y1, y2);
  cplx prod = 1.0;
  for (int l = 0; l < k; ++l)
    for (int m = 0; m < k; ++m) {
      const int il = ((multi_i >> (k - 1 - l)) & 1) ^ (m & 1);
      const int jm = ((multi_j >> (k - 1 - m)) & 1) ^ (l & 1);
      prod *= il == jm ? a : b;
    }
  return prod;
}

ExchangeKernel make_fused(const PhaseFn& q1, const PhaseFn& q2, int k) {
  if (k < 3 || k % 2 == 0) throw ConstraintViolation("fusion requires an odd k >= 3");
  if (k > 5) throw ResourceLimit("fusion beyond k = 5 exceeds the desk-scale budget");
  const int r = 1 << k;
  std::vector<int> theta(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) theta[static_cast<std::size_t>(i)] = i ^ (r - 1);
  return make_opposite_type(
      std::move(theta),
      [q1, q2, k](double y1, double y2, int i, int j) { return fused_phase(q1, q2, k, y1, y2, i, j); },
      "fused[k=" + std::to_string(k) + "," + q1.repr() + "," + q2.repr() + "]", Family::fused);
}

ExchangeKernel make_tabulated(int components, std::vector<TableEntry> entries) {
  const int r2 = components * components;
  for (const auto& e : entries)
    if (e.q.rows() != r2 || e.q.cols() != r2)
      throw Error("tabulated entry at (" + std::to_string(e.y1) + ", " + std::to_string(e.y2) +
                  ") is not " + std::to_string(r2) + "x" + std::to_string(r2));
  auto shared = std::make_shared<const std::vector<TableEntry>>(std::move(entries));
  return ExchangeKernel(Family::tabulated, components, "tabulated", [shared](double y1, double y2) {
    for (const auto& e : *shared)
      if (e.y1 == y1 && e.y2 == y2) return e.q;
    throw LookupError("tabulated kernel has no entry for (" + std::to_string(y1) + ", " +
                      std::to_string(y2) + ")");
  });
}

ExchangeKernel perturb_entry(const ExchangeKernel& kernel, double y1, double y2, int row, int col,
                             cplx factor) {
  return ExchangeKernel(Family::derived, kernel.components(), kernel.label() + "+perturbed",
                        [kernel, y1, y2, row, col, factor](double a, double b) {
                          Matrix m = kernel.eval(a, b);
                          if (a == y1 && b == y2) m(row, col) *= factor;
                          return m;
                        });
}

Matrix hat_transform(const Matrix& q_swapped, int r) {
  Matrix out(r * r, r * r);
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      for (int c = 0; c < r; ++c)
        for (int d = 0; d < r; ++d)
          out(d * r + c, a * r + b) = std::conj(q_swapped(c * r + d, b * r + a));
  return out;
}

Matrix tilde_transform(const Matrix& q, int r) {
  Matrix out(r * r, r * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) out(k * r + l, i * r + j) = q(l * r + j, k * r + i);
  return out;
}

ExchangeKernel derive_hat(const ExchangeKernel& kernel) {
  const int r = kernel.components();
  return ExchangeKernel(Family::derived, r, "hat(" + kernel.label() + ")",
                        [kernel, r](double y1, double y2) {
                          return hat_transform(kernel.eval(y2, y1), r);
                        });
}

ExchangeKernel derive_tilde(const ExchangeKernel& kernel) {
  const int r = kernel.components();
  return ExchangeKernel(Family::derived, r, "tilde(" + kernel.label() + ")",
                        [kernel, r](double y1, double y2) {
                          return tilde_transform(kernel.eval(y1, y2), r);
                        });
}

// ---------------------------------------------------------------------------
// Family validation

namespace {

std::string fmt_pair(double y1, double y2) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << y1 << ", " << y2 << ")";
  return os.str();
}

[[noreturn]] void violate(const std::string& family, const std::string& what, double y1,
                          double y2, int i = -1, int j = -1) {
  std::string msg = family + ": " + what + " fails at sites " + fmt_pair(y1, y2);
  if (i >= 0) msg += ", components (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) + ")";
  throw ConstraintViolation(msg);
}

// Hypotheses shared by opposite-type systems and their special cases.
void validate_opposite_type(const std::string& family, const std::vector<int>& theta,
                            const IndexedPhase& q, const DiscreteModel& model, double tol) {
  const int r = static_cast<int>(theta.size());
  for (int i = 0; i < r; ++i) {
    const int t = theta[static_cast<std::size_t>(i)];
    if (t < 0 || t >= r || theta[static_cast<std::size_t>(t)] != i)
      throw ConstraintViolation(family + ": theta is not an involution of {1.." +
                                std::to_string(r) + "}");
  }
  std::optional<cplx> kappa;
  for (double y1 : model.sites())
    for (double y2 : model.sites())
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) {
          const cplx v = q(y1, y2, i, j);
          if (std::abs(std::abs(v) - 1.0) > tol) violate(family, "|q| = 1", y1, y2, i, j);
          if (std::abs(std::conj(v) - q(y2, y1, i, j)) > tol)
            violate(family, "conj q(y1,y2,i,j) = q(y2,y1,i,j)", y1, y2, i, j);
          if (std::abs(v - q(y1, y2, j, i)) > tol)
            violate(family, "q(y1,y2,i,j) = q(y1,y2,j,i)", y1, y2, i, j);
          if (std::abs(v - q(y1, y2, theta[static_cast<std::size_t>(i)],
                             theta[static_cast<std::size_t>(j)])) > tol)
            violate(family, "q(y1,y2,theta(i),theta(j)) = q(y1,y2,i,j)", y1, y2, i, j);
        }
  for (double y : model.sites())
    for (int i = 0; i < r; ++i) {
      const cplx v = q(y, y, i, i);
      if (std::abs(v - 1.0) > tol && std::abs(v + 1.0) > tol)
        violate(family, "q(y,y,i,i) in {-1, 1}", y, y, i, i);
      if (!kappa) kappa = v;
      if (std::abs(v - *kappa) > tol) violate(family, "q(y,y,i,i) = kappa for all y, i", y, y, i, i);
    }
}

void validate_scalar_phase(const std::string& family, const std::string& name, const PhaseFn& q,
                           const DiscreteModel& model, double tol) {
  for (double y1 : model.sites())
    for (double y2 : model.sites()) {
      const cplx v = q(y1, y2);
      if (std::abs(std::abs(v) - 1.0) > tol) violate(family, "|" + name + "| = 1", y1, y2);
      if (std::abs(std::conj(v) - q(y2, y1)) > tol)
        violate(family, "conj " + name + "(y1,y2) = " + name + "(y2,y1)", y1, y2);
    }
}

struct Builder {
  const DiscreteModel& model;
  double tol;

  ExchangeKernel operator()(const AbelianSpec& s) const {
    validate_scalar_phase("abelian", "q", s.q, model, tol);
    std::optional<cplx> kappa;
    for (double y : model.sites()) {
      const cplx v = s.q(y, y);
      if (std::abs(v - 1.0) > tol && std::abs(v + 1.0) > tol)
        violate("abelian", "q(y,y) in {-1, 1}", y, y);
      if (!kappa) kappa = v;
      if (std::abs(v - *kappa) > tol) violate("abelian", "q(y,y) constant", y, y);
    }
    return make_abelian(s.q);
  }

  ExchangeKernel operator()(const LiftedSpec& s) const {
    const int r = static_cast<int>(s.q.size());
    if (r < 1) throw ConstraintViolation("lifted: empty phase table");
    for (const auto& row : s.q)
      if (static_cast<int>(row.size()) != r)
        throw ConstraintViolation("lifted: phase table must be r x r");
    for (double y1 : model.sites())
      for (double y2 : model.sites())
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < r; ++j) {
            const cplx v = s.q[i][j](y1, y2);
            if (std::abs(std::abs(v) - 1.0) > tol) violate("lifted", "|q| = 1", y1, y2, i, j);
            if (std::abs(std::conj(v) - s.q[j][i](y2, y1)) > tol)
              violate("lifted", "conj q(y1,y2,i,j) = q(y2,y1,j,i)", y1, y2, i, j);
          }
    // Diagonal constancy is left to check_assumptions (condition iv) so that
    // kernels violating only that condition can still be built and inspected.
    return make_lifted(s.q);
  }

  ExchangeKernel operator()(const OppositeTypeSpec& s) const {
    const int r = static_cast<int>(s.theta.size());
    if (static_cast<int>(s.q.size()) != r)
      throw ConstraintViolation("opposite-type: phase table must be r x r with r = |theta|");
    for (const auto& row : s.q)
      if (static_cast<int>(row.size()) != r)
        throw ConstraintViolation("opposite-type: phase table must be r x r");
    auto table = s.q;
    IndexedPhase q = [table](double y1, double y2, int i, int j) {
      return table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](y1, y2);
    };
    validate_opposite_type("opposite-type", s.theta, q, model, tol);
    return make_opposite_type(s.theta, q, "opposite-type[r=" + std::to_string(r) + "]");
  }

  ExchangeKernel operator()(const TwoComponentSpec& s) const {
    validate_scalar_phase("two-component", "q1", s.q1, model, tol);
    validate_scalar_phase("two-component", "q2", s.q2, model, tol);
    validate_opposite_type("two-component", {1, 0}, two_component_phase(s.q1, s.q2), model, tol);
    return make_two_component(s.q1, s.q2);
  }

  ExchangeKernel operator()(const ThreeComponentSpec& s) const {
    for (auto [name, q] : {std::pair{"q1", &s.q1}, {"q2", &s.q2}, {"q3", &s.q3}, {"q4", &s.q4}})
      validate_scalar_phase("three-component", name, *q, model, tol);
    validate_opposite_type("three-component", {1, 0, 2},
                           three_component_phase(s.q1, s.q2, s.q3, s.q4), model, tol);
    return make_three_component(s.q1, s.q2, s.q3, s.q4);
  }

  ExchangeKernel operator()(const FusedSpec& s) const {
    if (s.k < 3 || s.k % 2 == 0) throw ConstraintViolation("fused: k must be odd and >= 3");
    validate_scalar_phase("fused", "q1", s.base.q1, model, tol);
    validate_scalar_phase("fused", "q2", s.base.q2, model, tol);
    for (double y : model.sites()) {
      const cplx a = s.base.q1(y, y), b = s.base.q2(y, y);
      if (std::abs(a - b) > tol || (std::abs(a - 1.0) > tol && std::abs(a + 1.0) > tol))
        violate("fused", "q1(y,y) = q2(y,y) = kappa in {-1, 1}", y, y);
    }
    return make_fused(s.base.q1, s.base.q2, s.k);
  }

  ExchangeKernel operator()(const TabulatedSpec& s) const {
    const ExchangeKernel k = make_tabulated(s.components, s.entries);
    for (double y1 : model.sites())
      for (double y2 : model.sites()) k.eval(y1, y2);  // LookupError on a miss
    return k;
  }
};

}  // namespace

ExchangeKernel construct_family(const KernelSpec& spec, const DiscreteModel& model, double tol) {
  ExchangeKernel k = std::visit(Builder{model, tol}, spec);
  if (k.components() != model.components())
    throw ConstraintViolation(k.label() + " has r = " + std::to_string(k.components()) +
                              " but the model has r = " + std::to_string(model.components()));
  return k;
}

// ---------------------------------------------------------------------------
// Checks

ValidationReport check_kernel_axioms(const ExchangeKernel& kernel, const DiscreteModel& model,
                                     double tol) {
  return check_table_axioms(KernelTable::from_kernel(kernel, model), tol);
}

namespace {

void add_table_diff(ValidationReport& rep, const std::string& name, const KernelTable& a,
                    const KernelTable& b, double tol) {
  ResidualTracker t;
  for (int i = 0; i < a.sites(); ++i)
    for (int j = 0; j < a.sites(); ++j) {
      Eigen::Index r = 0, c = 0;
      const double res = (a.at(i, j) - b.at(i, j)).cwiseAbs().maxCoeff(&r, &c);
      t.observe(res, {a.coordinate(i), a.coordinate(j)}, static_cast<int>(r), static_cast<int>(c));
    }
  rep.add(name, t.max(), tol, t.where());
}

}  // namespace

ValidationReport check_assumptions(const ExchangeKernel& kernel, const DiscreteModel& model,
                                   double tol) {
  const KernelTable q = KernelTable::from_kernel(kernel, model);
  const KernelTable qt = q.tilde();
  ValidationReport rep;

  // (i)
  const ValidationReport ax = check_table_axioms(qt, tol);
  rep.checks.push_back(*ax.find("unitarity"));
  rep.checks.back().name = "tilde_unitary";
  rep.checks.push_back(*ax.find("adjoint_symmetry"));
  rep.checks.back().name = "tilde_adjoint";
  // (ii)
  add_table_diff(rep, "tilde_involution", qt.tilde(), q, tol);
  // (iii)
  add_table_diff(rep, "hat_identity", q.hat(), q, tol);
  add_table_diff(rep, "hat_tilde_identity", qt.hat(), qt, tol);
  // (iv)
  const TraceConstant kc = trace_constant(qt);
  rep.add("kappa_trace", kc.residual, tol, kc.where);
  // (v)
  const ValidationReport dbl = check_table_axioms(doubled_table(q), tol);
  rep.append(dbl, "doubled_");

  if (rep.find("kappa_trace")->pass) rep.kappa = kc.value;
  return rep;
}

double strong_condition_residual(const ExchangeKernel& kernel, const DiscreteModel& model) {
  const KernelTable q = KernelTable::from_kernel(kernel, model);
  const KernelTable qt = q.tilde();
  double res = 0.0;
  for (int a = 0; a < q.sites(); ++a)
    for (int b = 0; b < q.sites(); ++b) res = std::max(res, max_abs(Matrix(qt.at(a, b) - q.at(b, a))));
  return res;
}

}  // namespace mcr
