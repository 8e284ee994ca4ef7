#include "mcr/wick.hpp"

#include "mcr/fock.hpp"
#include "mcr/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace mcr {

FormalSum FormalSum::identity(int dim) {
  FormalSum a;
  a.dim = dim;
  a.scalar = 1.0;
  return a;
}

FormalSum FormalSum::phi(int dim, Vector coeff, Signature signature) {
  FormalSum a;
  a.dim = dim;
  a.add(signature, coeff);
  return a;
}

void FormalSum::add(const Signature& signature, const Vector& coeff) {
  if (signature.empty()) {
    scalar += coeff(0);
    return;
  }
  auto it = terms.find(signature);
  if (it == terms.end())
    terms.emplace(signature, coeff);
  else
    it->second += coeff;
}

FormalSum& FormalSum::operator+=(const FormalSum& other) {
  if (dim == 0) dim = other.dim;
  if (other.dim != 0 && dim != other.dim) throw Error("formal sum: dimension mismatch");
  scalar += other.scalar;
  for (const auto& [sig, t] : other.terms) add(sig, t);
  return *this;
}

FormalSum FormalSum::scaled(cplx c) const {
  FormalSum out = *this;
  out.scalar *= c;
  for (auto& [sig, t] : out.terms) t *= c;
  return out;
}

void FormalSum::prune(double threshold) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (max_abs(it->second) <= threshold)
      it = terms.erase(it);
    else
      ++it;
  }
}

FormalSum product(const FormalSum& a, const FormalSum& b, std::size_t cap) {
  if (a.dim != b.dim) throw Error("product: dimension mismatch");
  FormalSum out;
  out.dim = a.dim;
  out.scalar = a.scalar * b.scalar;
  if (b.scalar != cplx{0.0, 0.0})
    for (const auto& [sig, t] : a.terms) out.add(sig, b.scalar * t);
  if (a.scalar != cplx{0.0, 0.0})
    for (const auto& [sig, t] : b.terms) out.add(sig, a.scalar * t);
  for (const auto& [sa, ta] : a.terms)
    for (const auto& [sb, tb] : b.terms) {
      Signature sig = sa;
      sig.insert(sig.end(), sb.begin(), sb.end());
      checked_power(static_cast<std::size_t>(a.dim), static_cast<int>(sig.size()), cap);
      out.add(sig, kron(ta, tb));
    }
  return out;
}

FormalSum star(const FormalSum& a) {
  FormalSum out;
  out.dim = a.dim;
  out.scalar = std::conj(a.scalar);
  for (const auto& [sig, t] : a.terms) {
    const int n = static_cast<int>(sig.size());
    Signature rev(sig.rbegin(), sig.rend());
    for (auto& s : rev) s = opposite(s);
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) perm[static_cast<std::size_t>(k)] = n - 1 - k;
    out.add(rev, permute_slots(t, a.dim, n, perm).conjugate());
  }
  return out;
}

Vector contract_adjacent(const Vector& t, int d, int n, int slot) {
  std::size_t left = 1, right = 1;
  for (int k = 0; k < slot; ++k) left *= static_cast<std::size_t>(d);
  for (int k = slot + 2; k < n; ++k) right *= static_cast<std::size_t>(d);
  const auto du = static_cast<std::size_t>(d);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(left * right));
  for (std::size_t l = 0; l < left; ++l)
    for (std::size_t a = 0; a < du; ++a) {
      const std::size_t base = ((l * du + a) * du + a) * right;
      out.segment(static_cast<Eigen::Index>(l * right), static_cast<Eigen::Index>(right)) +=
          t.segment(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(right));
    }
  return out;
}

std::size_t ordering_step_bound(int max_length) {
  const int k = (max_length + 1) / 2;
  std::size_t bound = std::size_t{1} << k;
  for (int i = 2; i <= 2 * k; ++i) bound *= static_cast<std::size_t>(i);
  return bound;
}

WickAlgebra::WickAlgebra(KernelTable q, int internal_dim)
    : q_(std::move(q)),
      s_(internal_dim),
      d_(q_.sites() * q_.components() * internal_dim) {}

namespace {

bool is_ordered(const Signature& sig, Sign first) {
  bool seen_second = false;
  for (Sign s : sig) {
    if (s != first)
      seen_second = true;
    else if (seen_second)
      return false;
  }
  return true;
}

}  // namespace

FormalSum WickAlgebra::reorder(const FormalSum& a, Sign first, const KernelTable& swap,
                               cplx contraction, const OrderingOptions& opt,
                               OrderingStats* stats) const {
  if (a.dim != d_) throw Error("ordering: dimension mismatch");
  Rng rng(opt.seed);
  FormalSum done;
  done.dim = d_;
  done.scalar = a.scalar;
  std::map<Signature, Vector> pending;
  std::size_t bound = 0;
  for (const auto& [sig, t] : a.terms) {
    bound += ordering_step_bound(static_cast<int>(sig.size()));
    if (is_ordered(sig, first))
      done.add(sig, t);
    else
      pending.emplace(sig, t);
  }

  const auto push = [&](const Signature& sig, const Vector& t) {
    if (max_abs(t) <= opt.prune_threshold) return;
    if (is_ordered(sig, first)) {
      done.add(sig, t);
      return;
    }
    auto it = pending.find(sig);
    if (it == pending.end())
      pending.emplace(sig, t);
    else
      it->second += t;
  };

  std::size_t steps = 0;
  const Sign second = opposite(first);
  while (!pending.empty()) {
    auto it = pending.begin();
    if (opt.order == RuleOrder::random)
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, pending.size() - 1)(rng));
    const Signature sig = it->first;
    const Vector t = std::move(it->second);
    pending.erase(it);

    const int n = static_cast<int>(sig.size());
    std::vector<int> spots;
    for (int i = 0; i + 1 < n; ++i)
      if (sig[static_cast<std::size_t>(i)] == second && sig[static_cast<std::size_t>(i) + 1] == first)
        spots.push_back(i);
    int i = spots.front();
    if (opt.order == RuleOrder::rightmost)
      i = spots.back();
    else if (opt.order == RuleOrder::random)
      i = spots[std::uniform_int_distribution<std::size_t>(0, spots.size() - 1)(rng)];

    if (++steps > bound) throw Error("ordering: step bound exceeded");

    Signature swapped = sig;
    std::swap(swapped[static_cast<std::size_t>(i)], swapped[static_cast<std::size_t>(i) + 1]);
    push(swapped, apply_exchange(swap, s_, n, i, t));

    Signature reduced;
    for (int k = 0; k < n; ++k)
      if (k != i && k != i + 1) reduced.push_back(sig[static_cast<std::size_t>(k)]);
    const Vector c = contraction * contract_adjacent(t, d_, n, i);
    if (reduced.empty())
      done.scalar += c(0);
    else
      push(reduced, c);
  }
  done.prune(opt.prune_threshold);
  if (stats) {
    stats->steps = steps;
    stats->step_bound = bound;
  }
  return done;
}

FormalSum WickAlgebra::normal_order(const FormalSum& a, const OrderingOptions& opt,
                                    OrderingStats* stats) const {
  FormalSum out = reorder(a, Sign::plus, minus_plus_table(q_), 1.0, opt, stats);
  const KernelTable hat = minus_minus_table(q_);
  for (auto& [sig, t] : out.terms) {
    const int len = static_cast<int>(sig.size());
    const int m = static_cast<int>(std::count(sig.begin(), sig.end(), Sign::plus));
    if (m > 1) t = symmetrize(q_, s_, len, 0, m, t);
    if (len - m > 1) t = symmetrize(hat, s_, len, m, len - m, t);
  }
  out.prune(opt.prune_threshold);
  return out;
}

std::optional<double> WickAlgebra::inverse_trace_constant(double tol) const {
  const TraceConstant c = trace_constant(q_.tilde().inverse());
  if (c.residual > tol) return std::nullopt;
  return c.value;
}

FormalSum WickAlgebra::anti_normal_order(const FormalSum& a, const OrderingOptions& opt,
                                         OrderingStats* stats) const {
  const KernelTable inv = q_.tilde().inverse();
  const TraceConstant c = trace_constant(inv);
  if (c.residual > 1e-10) throw Error("anti-normal ordering: no inverse-trace constant");
  return reorder(a, Sign::minus, inv, -c.value, opt, stats);
}

cplx WickAlgebra::symbolic_vacuum(const FormalSum& a, const OrderingOptions& opt) const {
  return normal_order(a, opt).scalar;
}

}  // namespace mcr
