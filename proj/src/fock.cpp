#include "mcr/fock.hpp"

#include "mcr/tensor.hpp"

#include <cmath>

namespace mcr {

void FockVector::add(int n, const Vector& t) {
  if (n < 0) return;
  if (static_cast<int>(levels.size()) <= n) levels.resize(static_cast<std::size_t>(n) + 1);
  Vector& dst = levels[static_cast<std::size_t>(n)];
  if (dst.size() == 0)
    dst = t;
  else
    dst += t;
}

void FockVector::axpy(cplx c, const FockVector& other) {
  for (int n = 0; n < static_cast<int>(other.levels.size()); ++n)
    if (other.has(n)) add(n, c * other.level(n));
}

FockSpace::FockSpace(KernelTable table, int internal_dim, int truncation, std::size_t cap)
    : table_(std::move(table)), s_(internal_dim), n_max_(truncation), cap_(cap) {
  if (s_ < 1) throw Error("internal dimension must be positive");
  if (n_max_ < 0) throw Error("truncation must be non-negative");
  d_ = table_.sites() * table_.components() * s_;
}

FockSpace::FockSpace(const ExchangeKernel& kernel, const DiscreteModel& model, std::size_t cap)
    : FockSpace(KernelTable::from_kernel(kernel, model), model.internal_dim(), model.truncation(),
                cap) {}

std::size_t FockSpace::level_size(int n) const {
  return checked_power(static_cast<std::size_t>(d_), n, cap_);
}

Vector FockSpace::exchange(const Vector& t, int n, int slot) const {
  return apply_exchange(table_, s_, n, slot, t);
}

Vector FockSpace::project(const Vector& t, int n) const {
  return symmetrize(table_, s_, n, 0, n, t);
}

Matrix FockSpace::symmetrizer_matrix(int n) const {
  const auto dim = static_cast<int>(level_size(n));
  return operator_matrix(dim, [&](const Vector& e) { return project(e, n); });
}

FockVector FockSpace::vacuum() const {
  FockVector v;
  v.levels.push_back(Vector::Ones(1));
  return v;
}

Vector FockSpace::basis_vector(int index) const {
  Vector e = Vector::Zero(d_);
  e(index) = 1.0;
  return e;
}

FockVector FockSpace::create(const Vector& f, const FockVector& F) const {
  FockVector out;
  for (int n = 0; n < static_cast<int>(F.levels.size()) && n < n_max_; ++n) {
    if (!F.has(n)) continue;
    level_size(n + 1);
    out.add(n + 1, project(kron(f, F.level(n)), n + 1));
  }
  return out;
}

FockVector FockSpace::annihilate(const Vector& f, const FockVector& F) const {
  FockVector out;
  for (int n = 1; n < static_cast<int>(F.levels.size()); ++n) {
    if (!F.has(n)) continue;
    const Vector& t = F.level(n);
    const Eigen::Index rest = t.size() / d_;
    // row-major (d x rest) viewed column-major as (rest x d)
    Eigen::Map<const Matrix> m(t.data(), rest, d_);
    out.add(n - 1, static_cast<double>(n) * (m * f));
  }
  return out;
}

FockVector FockSpace::apply(const FieldOp& op, const FockVector& F) const {
  FockVector out;
  if (op.plus.size() > 0) out = create(op.plus, F);
  if (op.minus.size() > 0) out.axpy(1.0, annihilate(op.minus, F));
  return out;
}

FockVector FockSpace::wick_apply(const Vector& coeff, int m, int n, const FockVector& F) const {
  const Eigen::Index dm = static_cast<Eigen::Index>(checked_power(d_, m, cap_));
  const Eigen::Index dn = static_cast<Eigen::Index>(checked_power(d_, n, cap_));
  if (coeff.size() != dm * dn) throw Error("wick_apply: coefficient has the wrong size");
  std::vector<int> perm;
  FockVector out;
  for (int k = n; k < static_cast<int>(F.levels.size()); ++k) {
    if (!F.has(k)) continue;
    const int level = m - n + k;
    if (level > n_max_) continue;
    level_size(level);
    perm.resize(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) perm[static_cast<std::size_t>(i)] = i < n ? n - 1 - i : i;
    const Vector u = permute_slots(F.level(k), d_, k, perm);
    const Eigen::Index rest = u.size() / dn;
    Eigen::Map<const Matrix> ft(coeff.data(), dn, dm);
    Eigen::Map<const Matrix> ut(u.data(), rest, dn);
    const Matrix gt = ut * ft;  // (rest x dm) column-major == row-major (dm x rest)
    double falling = 1.0;
    for (int i = 0; i < n; ++i) falling *= static_cast<double>(k - i);
    const Vector g = Eigen::Map<const Vector>(gt.data(), gt.size()) * falling;
    out.add(level, project(g, level));
  }
  return out;
}

FockVector FockSpace::apply_phi(const Vector& coeff, const std::vector<Sign>& signature,
                                const FockVector& F) const {
  const int k = static_cast<int>(signature.size());
  if (coeff.size() != static_cast<Eigen::Index>(checked_power(d_, k, cap_)))
    throw Error("apply_phi: coefficient has the wrong size");
  FockVector out;
  if (k == 0) {
    out.axpy(coeff(0), F);
    return out;
  }
  std::vector<int> digit(static_cast<std::size_t>(k));
  for (Eigen::Index idx = 0; idx < coeff.size(); ++idx) {
    if (coeff(idx) == cplx{0.0, 0.0}) continue;
    Eigen::Index rem = idx;
    for (int i = k - 1; i >= 0; --i) {
      digit[static_cast<std::size_t>(i)] = static_cast<int>(rem % d_);
      rem /= d_;
    }
    FockVector v = F;
    for (int i = k - 1; i >= 0; --i) {
      const Vector e = basis_vector(digit[static_cast<std::size_t>(i)]);
      v = signature[static_cast<std::size_t>(i)] == Sign::plus ? create(e, v) : annihilate(e, v);
    }
    out.axpy(coeff(idx), v);
  }
  return out;
}

cplx FockSpace::inner(const FockVector& F, const FockVector& G) const {
  cplx sum = 0.0;
  double fact = 1.0;
  const int top = static_cast<int>(std::min(F.levels.size(), G.levels.size()));
  for (int n = 0; n < top; ++n) {
    if (n > 0) fact *= n;
    if (F.has(n) && G.has(n)) sum += fact * G.level(n).dot(F.level(n));  // dot conjugates G
  }
  return sum;
}

cplx FockSpace::expectation(const std::vector<FieldOp>& word) const {
  const int len = static_cast<int>(word.size());
  // lowering[i] = number of operators left of position i that can annihilate
  std::vector<int> lowering(static_cast<std::size_t>(len) + 1, 0);
  for (int i = 0; i < len; ++i)
    lowering[static_cast<std::size_t>(i) + 1] =
        lowering[static_cast<std::size_t>(i)] + (word[static_cast<std::size_t>(i)].minus.size() > 0);

  FockVector state = vacuum();
  for (int i = len - 1; i >= 0; --i) {
    const FieldOp& op = word[static_cast<std::size_t>(i)];
    const int budget = lowering[static_cast<std::size_t>(i)];
    FockVector next;
    for (int n = 0; n < static_cast<int>(state.levels.size()); ++n) {
      if (!state.has(n)) continue;
      if (op.plus.size() > 0 && n + 1 <= budget) {
        if (n + 1 > n_max_)
          throw TruncationOverflow("word needs Fock level " + std::to_string(n + 1) +
                                   " above the truncation " + std::to_string(n_max_));
        level_size(n + 1);
        next.add(n + 1, project(kron(op.plus, state.level(n)), n + 1));
      }
      if (op.minus.size() > 0 && n >= 1 && n - 1 <= budget) {
        const Vector& t = state.level(n);
        Eigen::Map<const Matrix> m(t.data(), t.size() / d_, d_);
        next.add(n - 1, static_cast<double>(n) * (m * op.minus));
      }
    }
    state = std::move(next);
  }
  return state.has(0) ? state.level(0)(0) : cplx{0.0, 0.0};
}

std::vector<FockVector> FockSpace::basis_states(int max_level) const {
  std::vector<FockVector> out;
  for (int k = 0; k <= max_level; ++k) {
    const auto size = static_cast<Eigen::Index>(level_size(k));
    for (Eigen::Index idx = 0; idx < size; ++idx) {
      Vector e = Vector::Zero(size);
      e(idx) = 1.0;
      FockVector v;
      v.add(k, project(e, k));
      out.push_back(std::move(v));
    }
  }
  return out;
}

cplx vacuum_expectation(const FockSpace& fock, const std::vector<Letter>& word) {
  std::vector<FieldOp> ops;
  ops.reserve(word.size());
  for (const auto& l : word) ops.push_back(FieldOp::letter(l.sign, l.f));
  return fock.expectation(ops);
}

cplx field_vacuum_expectation(const FockSpace& fock, const std::vector<FieldTerm>& terms) {
  std::vector<FieldOp> ops;
  ops.reserve(terms.size());
  for (const auto& t : terms) ops.push_back(FieldOp{t.f, t.f_prime});
  return fock.expectation(ops);
}

double max_abs_diff(const FockVector& a, const FockVector& b) {
  FockVector d = a;
  d.axpy(-1.0, b);
  double out = 0.0;
  for (int n = 0; n < static_cast<int>(d.levels.size()); ++n)
    if (d.has(n)) out = std::max(out, max_abs(d.level(n)));
  return out;
}

KernelTable minus_minus_table(const KernelTable& q) { return q.hat(); }

KernelTable minus_plus_table(const KernelTable& q) {
  const KernelTable qt = q.tilde();
  return KernelTable::from_function(q.coordinates(), q.components(),
                                    [&](int a, int b) { return qt.at(b, a); });
}

ValidationReport verify_mcr_relations(const KernelTable& q, int internal_dim,
                                      const std::vector<FockVector>& states, const OperatorFn& op,
                                      double tol) {
  const int d = q.sites() * q.components() * internal_dim;
  const KernelTable mm = minus_minus_table(q);
  const KernelTable mp = minus_plus_table(q);

  auto basis = [d](int i) {
    Vector e = Vector::Zero(d);
    e(i) = 1.0;
    return e;
  };
  // sum_{g,h} coeff[g,h] op(s1, e_g) op(s2, e_h) F
  auto phi = [&](const Vector& coeff, Sign s1, Sign s2, const FockVector& F) {
    FockVector out;
    for (int h = 0; h < d; ++h) {
      bool any = false;
      for (int g = 0; g < d && !any; ++g) any = coeff(g * d + h) != cplx{0.0, 0.0};
      if (!any) continue;
      const FockVector inner = op(s2, basis(h), F);
      for (int g = 0; g < d; ++g) {
        const cplx c = coeff(g * d + h);
        if (c != cplx{0.0, 0.0}) out.axpy(c, op(s1, basis(g), inner));
      }
    }
    return out;
  };

  ResidualTracker pp, mmr, mpr;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      const Vector ab = kron(basis(a), basis(b));
      const Vector h_pp = apply_exchange(q, internal_dim, 2, 0, ab);
      const Vector h_mm = apply_exchange(mm, internal_dim, 2, 0, ab);
      const Vector h_mp = apply_exchange(mp, internal_dim, 2, 0, ab);
      for (std::size_t si = 0; si < states.size(); ++si) {
        const FockVector& F = states[si];
        const std::vector<double> where{};

        FockVector lhs = op(Sign::plus, basis(a), op(Sign::plus, basis(b), F));
        pp.observe(max_abs_diff(lhs, phi(h_pp, Sign::plus, Sign::plus, F)), where, a, b);

        lhs = op(Sign::minus, basis(a), op(Sign::minus, basis(b), F));
        mmr.observe(max_abs_diff(lhs, phi(h_mm, Sign::minus, Sign::minus, F)), where, a, b);

        lhs = op(Sign::minus, basis(a), op(Sign::plus, basis(b), F));
        FockVector rhs = phi(h_mp, Sign::plus, Sign::minus, F);
        if (a == b) rhs.axpy(1.0, F);
        mpr.observe(max_abs_diff(lhs, rhs), where, a, b);
      }
    }
  ValidationReport rep;
  rep.add("mcr_plus_plus", pp.max(), tol, pp.where());
  rep.add("mcr_minus_minus", mmr.max(), tol, mmr.where());
  rep.add("mcr_minus_plus", mpr.max(), tol, mpr.where());
  return rep;
}

ValidationReport verify_mcr(const FockSpace& fock, double tol) {
  if (fock.truncation() < 3) throw Error("verify_mcr needs truncation N >= 3");
  const auto states = fock.basis_states(fock.truncation() - 2);
  const OperatorFn op = [&fock](Sign s, const Vector& f, const FockVector& F) {
    return s == Sign::plus ? fock.create(f, F) : fock.annihilate(f, F);
  };
  return verify_mcr_relations(fock.table(), fock.internal_dim(), states, op, tol);
}

}  // namespace mcr
