#include "mcr/tensor.hpp"

#include <limits>

namespace mcr {

std::size_t checked_power(std::size_t d, int n, std::size_t cap) {
  std::size_t out = 1;
  for (int k = 0; k < n; ++k) {
    if (d != 0 && out > std::numeric_limits<std::size_t>::max() / d)
      throw ResourceLimit("tensor size overflows");
    out *= d;
    if (out > cap)
      throw ResourceLimit("level-" + std::to_string(n) + " tensor over dimension " +
                          std::to_string(d) + " exceeds the entry budget of " +
                          std::to_string(cap));
  }
  return out;
}

Vector kron(const Vector& f, const Vector& g) {
  Vector out(f.size() * g.size());
  for (Eigen::Index i = 0; i < f.size(); ++i) out.segment(i * g.size(), g.size()) = f(i) * g;
  return out;
}

Vector permute_slots(const Vector& t, int d, int n, const std::vector<int>& perm) {
  std::vector<Eigen::Index> in_stride(static_cast<std::size_t>(n));
  Eigen::Index s = 1;
  for (int k = n - 1; k >= 0; --k) {
    in_stride[static_cast<std::size_t>(k)] = s;
    s *= d;
  }
  Vector out(t.size());
  std::vector<int> digit(static_cast<std::size_t>(n), 0);
  for (Eigen::Index idx = 0; idx < t.size(); ++idx) {
    Eigen::Index src = 0;
    for (int k = 0; k < n; ++k)
      src += digit[static_cast<std::size_t>(k)] *
             in_stride[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
    out(idx) = t(src);
    for (int k = n - 1; k >= 0; --k) {
      if (++digit[static_cast<std::size_t>(k)] < d) break;
      digit[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

Vector apply_exchange(const KernelTable& m, int internal_dim, int n, int slot, const Vector& t) {
  const int sites = m.sites();
  const int r = m.components();
  const int s = internal_dim;
  const Eigen::Index d = static_cast<Eigen::Index>(sites) * r * s;
  Eigen::Index inner = 1;
  for (int k = slot + 2; k < n; ++k) inner *= d;
  const Eigen::Index outer = t.size() / (inner * d * d);
  auto pos = [&](int a, int c, int z) { return (static_cast<Eigen::Index>(a) * r + c) * s + z; };

  Vector out = Vector::Zero(t.size());
  for (Eigen::Index o = 0; o < outer; ++o) {
    const Eigen::Index base = o * d * d * inner;
    for (int a = 0; a < sites; ++a)
      for (int a2 = 0; a2 < sites; ++a2)
        for (const SparseEntry& e : m.sparse(a, a2)) {
          const int c = e.row / r, c2 = e.row % r;
          const int p = e.col / r, q = e.col % r;
          for (int z = 0; z < s; ++z)
            for (int z2 = 0; z2 < s; ++z2) {
              const Eigen::Index dst = base + (pos(a, c, z) * d + pos(a2, c2, z2)) * inner;
              const Eigen::Index src = base + (pos(a2, p, z2) * d + pos(a, q, z)) * inner;
              out.segment(dst, inner) += e.value * t.segment(src, inner);
            }
        }
  }
  return out;
}

Vector apply_word(const KernelTable& m, int internal_dim, int n, const std::vector<int>& word,
                  const Vector& t) {
  Vector v = t;
  for (auto it = word.rbegin(); it != word.rend(); ++it) v = apply_exchange(m, internal_dim, n, *it, v);
  return v;
}

Vector symmetrize(const KernelTable& m, int internal_dim, int n, int lo, int len,
                  const Vector& t) {
  if (len <= 1) return t;
  // P_len = (1/len) (1 (x) P_{len-1}) (1 + U_lo + U_lo U_{lo+1} + ...), the
  // bracket evaluated in nested form t + U_lo (t + U_{lo+1} (t + ...)).
  Vector acc = t;
  for (int j = lo + len - 2; j >= lo; --j) acc = t + apply_exchange(m, internal_dim, n, j, acc);
  acc = symmetrize(m, internal_dim, n, lo + 1, len - 1, acc);
  return acc / static_cast<double>(len);
}

Vector apply_pair_operator(const std::vector<SparseEntry>& c, int r, int len, int i, int j,
                           const Vector& v) {
  Eigen::Index si = 1, sj = 1;
  for (int k = len - 1; k > i; --k) si *= r;
  for (int k = len - 1; k > j; --k) sj *= r;
  Vector out = Vector::Zero(v.size());
  for (Eigen::Index idx = 0; idx < v.size(); ++idx) {
    if ((idx / si) % r != 0 || (idx / sj) % r != 0) continue;
    for (const SparseEntry& e : c) {
      const Eigen::Index dst = idx + (e.row / r) * si + (e.row % r) * sj;
      const Eigen::Index src = idx + (e.col / r) * si + (e.col % r) * sj;
      out(dst) += e.value * v(src);
    }
  }
  return out;
}

}  // namespace mcr
