#include "mcr/pairings.hpp"

#include "mcr/tensor.hpp"

#include <algorithm>
#include <numeric>

namespace mcr {

int PairPartition::pair_of(int p) const {
  for (int k = 0; k < size(); ++k)
    if (pairs[static_cast<std::size_t>(k)].first == p || pairs[static_cast<std::size_t>(k)].second == p)
      return k;
  throw Error("position " + std::to_string(p) + " is not in the partition");
}

int PairPartition::partner(int p) const {
  const auto& pr = pairs[static_cast<std::size_t>(pair_of(p))];
  return pr.first == p ? pr.second : pr.first;
}

std::vector<std::pair<int, int>> PairPartition::sorted_pairs() const {
  auto out = pairs;
  std::sort(out.begin(), out.end());
  return out;
}

PairPartition canonicalize(std::vector<std::pair<int, int>> pairs) {
  const int n = static_cast<int>(pairs.size());
  std::vector<int> seen(static_cast<std::size_t>(2 * n) + 1, 0);
  for (auto& p : pairs) {
    if (p.first > p.second) std::swap(p.first, p.second);
    if (p.first < 1 || p.second > 2 * n || p.first == p.second)
      throw Error("pair out of range for a partition of {1.." + std::to_string(2 * n) + "}");
    ++seen[static_cast<std::size_t>(p.first)];
    ++seen[static_cast<std::size_t>(p.second)];
  }
  for (int p = 1; p <= 2 * n; ++p)
    if (seen[static_cast<std::size_t>(p)] != 1) throw Error("pairs do not partition {1..2n}");
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  PairPartition xi;
  xi.pairs = pairs;
  std::vector<int> js;
  for (const auto& p : pairs) js.push_back(p.second);
  std::sort(js.begin(), js.end());

  std::vector<int> used_j;     // j_1..j_{k-1}
  std::vector<int> used_bold;  // min bold J^(1..k-1)
  for (int k = 0; k < n; ++k) {
    const auto [ik, jk] = pairs[static_cast<std::size_t>(k)];
    std::vector<int> jset, bold;
    for (int j : js) {
      if (j > ik && j <= jk && std::find(used_j.begin(), used_j.end(), j) == used_j.end())
        jset.push_back(j);
      if (j > ik && std::find(used_bold.begin(), used_bold.end(), j) == used_bold.end())
        bold.push_back(j);
    }
    used_j.push_back(jk);
    if (bold.empty()) throw Error("empty bold J set");
    used_bold.push_back(bold.front());
    xi.jset.push_back(std::move(jset));
    xi.bold_jset.push_back(std::move(bold));
  }
  return xi;
}

namespace {

void enumerate_rec(std::vector<int>& partner, std::vector<std::pair<int, int>>& cur,
                   std::vector<PairPartition>& out) {
  const int n2 = static_cast<int>(partner.size()) - 1;
  int first = 0;
  for (int p = 1; p <= n2; ++p)
    if (partner[static_cast<std::size_t>(p)] == 0) {
      first = p;
      break;
    }
  if (first == 0) {
    out.push_back(canonicalize(cur));
    return;
  }
  for (int q = first + 1; q <= n2; ++q) {
    if (partner[static_cast<std::size_t>(q)] != 0) continue;
    partner[static_cast<std::size_t>(first)] = q;
    partner[static_cast<std::size_t>(q)] = first;
    cur.emplace_back(first, q);
    enumerate_rec(partner, cur, out);
    cur.pop_back();
    partner[static_cast<std::size_t>(first)] = 0;
    partner[static_cast<std::size_t>(q)] = 0;
  }
}

}  // namespace

std::vector<PairPartition> enumerate_pairings(int n2) {
  if (n2 > 12) throw ResourceLimit("pair partitions are limited to 12 points");
  if (n2 < 0 || n2 % 2 != 0) return {};
  std::vector<PairPartition> out;
  std::vector<int> partner(static_cast<std::size_t>(n2) + 1, 0);
  std::vector<std::pair<int, int>> cur;
  enumerate_rec(partner, cur, out);
  return out;
}

int crossings(const PairPartition& xi) {
  const auto p = xi.sorted_pairs();
  int count = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = 0; b < p.size(); ++b) {
      const auto [i, j] = p[a];
      const auto [k, l] = p[b];
      if (i < k && k < j && j < l) ++count;
    }
  return count;
}

PairPartition noncrossing_shadow(const PairPartition& xi) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < xi.size(); ++k)
    pairs.emplace_back(xi.pairs[static_cast<std::size_t>(k)].first,
                       xi.bold_jset[static_cast<std::size_t>(k)].front());
  return canonicalize(std::move(pairs));
}

Vector q_xi_apply(const KernelTable& q, const PairPartition& xi,
                  const std::vector<int>& site_of_slot, const Vector& v) {
  const int r = q.components();
  const int len = xi.points();
  auto site = [&](int p) { return site_of_slot[static_cast<std::size_t>(p - 1)]; };
  Vector out = v;
  // Q(xi) = Q^(n) ... Q^(1); Q^(1) acts first
  for (int k = 0; k < xi.size(); ++k) {
    const int ik = xi.pairs[static_cast<std::size_t>(k)].first;
    const auto& jset = xi.jset[static_cast<std::size_t>(k)];
    const auto& bold = xi.bold_jset[static_cast<std::size_t>(k)];
    const int l = static_cast<int>(jset.size());
    if (l > static_cast<int>(bold.size())) throw Error("J^(k) larger than bold J^(k)");
    // Q^(k) = F_1 F_2 ... F_{l-1}; F_{l-1} acts first
    for (int t = l - 2; t >= 0; --t) {
      const int jt = jset[static_cast<std::size_t>(t)];
      const int a = bold[static_cast<std::size_t>(t)];
      const int b = bold[static_cast<std::size_t>(t) + 1];
      out = apply_pair_operator(q.sparse(site(ik), site(jt)), r, len, a - 1, b - 1, out);
    }
  }
  return out;
}

namespace {

// bilinear contraction of slot pairs (0-based) of a vector in V^{(x)len}
cplx contract_pairs(const std::vector<std::pair<int, int>>& pairs, int r, int len,
                    const Vector& v) {
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(len));
  Eigen::Index s = 1;
  for (int k = len - 1; k >= 0; --k) {
    stride[static_cast<std::size_t>(k)] = s;
    s *= r;
  }
  const int n = static_cast<int>(pairs.size());
  cplx sum = 0.0;
  std::vector<int> c(static_cast<std::size_t>(n), 0);
  while (true) {
    Eigen::Index idx = 0;
    for (int k = 0; k < n; ++k) {
      const auto [a, b] = pairs[static_cast<std::size_t>(k)];
      idx += c[static_cast<std::size_t>(k)] *
             (stride[static_cast<std::size_t>(a)] + stride[static_cast<std::size_t>(b)]);
    }
    sum += v(idx);
    int k = n - 1;
    while (k >= 0 && ++c[static_cast<std::size_t>(k)] == r) c[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return sum;
}

// Sum over one position per pair of  functional(op(h_1 (x) ... (x) h_len)).
template <class Op, class Functional>
cplx position_sum(const std::vector<int>& pair_of_slot, int npairs, const SlotData& data,
                  Op&& op, Functional&& functional) {
  const int len = static_cast<int>(pair_of_slot.size());
  const int positions = static_cast<int>(data.site_of_position.size());
  std::vector<int> pos(static_cast<std::size_t>(npairs), 0);
  std::vector<int> site_of_slot(static_cast<std::size_t>(len));
  cplx sum = 0.0;
  if (positions == 0) return sum;
  while (true) {
    Vector v = Vector::Ones(1);
    for (int p = 0; p < len; ++p) {
      const int x = pos[static_cast<std::size_t>(pair_of_slot[static_cast<std::size_t>(p)])];
      site_of_slot[static_cast<std::size_t>(p)] = data.site_of_position[static_cast<std::size_t>(x)];
      v = kron(v, data.slots[static_cast<std::size_t>(p)].row(x).transpose());
    }
    if (v.cwiseAbs().maxCoeff() != 0.0) sum += functional(op(site_of_slot, v));
    int k = npairs - 1;
    while (k >= 0 && ++pos[static_cast<std::size_t>(k)] == positions) pos[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return sum;
}

}  // namespace

cplx t_xi(const PairPartition& xi, int r, const Vector& v) {
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < xi.size(); ++k)
    pairs.emplace_back(xi.pairs[static_cast<std::size_t>(k)].first - 1,
                       xi.bold_jset[static_cast<std::size_t>(k)].front() - 1);
  return contract_pairs(pairs, r, xi.points(), v);
}

cplx xi_term(const KernelTable& q, const PairPartition& xi, const SlotData& data) {
  const int len = xi.points();
  std::vector<int> pair_of_slot(static_cast<std::size_t>(len));
  for (int p = 1; p <= len; ++p) pair_of_slot[static_cast<std::size_t>(p - 1)] = xi.pair_of(p);
  return position_sum(
      pair_of_slot, xi.size(), data,
      [&](const std::vector<int>& sites, const Vector& v) { return q_xi_apply(q, xi, sites, v); },
      [&](const Vector& v) { return t_xi(xi, q.components(), v); });
}

SlotData slot_data(const std::vector<Vector>& vectors, int sites, int r, int internal_dim) {
  SlotData data;
  const int s = internal_dim;
  for (int pos = 0; pos < sites * s; ++pos) data.site_of_position.push_back(pos / s);
  for (const Vector& f : vectors) {
    if (f.size() != sites * r * s) throw Error("one-particle vector has the wrong dimension");
    Matrix m(sites * s, r);
    for (int a = 0; a < sites; ++a)
      for (int z = 0; z < s; ++z)
        for (int c = 0; c < r; ++c) m(a * s + z, c) = f((a * r + c) * s + z);
    data.slots.push_back(std::move(m));
  }
  return data;
}

cplx field_moment(const KernelTable& q, int internal_dim, const std::vector<FieldTerm>& terms) {
  const int len = static_cast<int>(terms.size());
  if (len > 12) throw ResourceLimit("field moments are limited to 12 factors");
  if (len % 2 != 0) return 0.0;
  std::vector<Vector> fs, fps;
  for (const auto& t : terms) {
    fs.push_back(t.f);
    fps.push_back(t.f_prime);
  }
  const SlotData created = slot_data(fs, q.sites(), q.components(), internal_dim);
  const SlotData annihilated = slot_data(fps, q.sites(), q.components(), internal_dim);
  cplx sum = 0.0;
  for (const PairPartition& xi : enumerate_pairings(len)) {
    SlotData h = created;
    for (const auto& pr : xi.pairs)
      h.slots[static_cast<std::size_t>(pr.first - 1)] =
          annihilated.slots[static_cast<std::size_t>(pr.first - 1)];
    sum += xi_term(q, xi, h);
  }
  return sum;
}

PairPartition sn_partition(const std::vector<int>& pi) {
  const int n = static_cast<int>(pi.size());
  std::vector<std::pair<int, int>> pairs;
  for (int t = 1; t <= n; ++t) pairs.emplace_back(t, n + pi[static_cast<std::size_t>(n - t)]);
  return canonicalize(std::move(pairs));
}

cplx sn_sum(const KernelTable& q, const SlotData& data,
            const std::function<cplx(int, int)>& weight) {
  const int len = static_cast<int>(data.slots.size());
  if (len % 2 != 0) throw Error("npoint sum needs an even number of slots");
  const int n = len / 2;
  const int r = q.components();
  std::vector<std::pair<int, int>> standard;
  for (int i = 0; i < n; ++i) standard.emplace_back(i, len - 1 - i);

  std::vector<int> pi(static_cast<std::size_t>(n));
  std::iota(pi.begin(), pi.end(), 1);
  cplx total = 0.0;
  do {
    // pair {t, n + pi(n + 1 - t)}; in canonical order i_k = n - k + 1, j_k = n + pi(k)
    std::vector<int> pair_of_slot(static_cast<std::size_t>(len));
    cplx w = 1.0;
    for (int k = 1; k <= n; ++k) {
      const int ik = n - k + 1, jk = n + pi[static_cast<std::size_t>(k - 1)];
      pair_of_slot[static_cast<std::size_t>(ik - 1)] = k - 1;
      pair_of_slot[static_cast<std::size_t>(jk - 1)] = k - 1;
      w *= weight(ik, jk);
    }
    if (w == cplx{0.0, 0.0}) continue;
    auto op = [&](const std::vector<int>& site_of_slot, const Vector& v) {
      auto site = [&](int p) { return site_of_slot[static_cast<std::size_t>(p - 1)]; };
      Vector out = v;
      for (int k = 1; k <= n; ++k) {
        const int ik = n - k + 1;
        const int jk = n + pi[static_cast<std::size_t>(k - 1)];
        // J^(k) = {j in J : j <= j_k, j not in {j_1..j_{k-1}}}, ascending
        std::vector<int> jset;
        for (int j = n + 1; j <= jk; ++j) {
          bool used = false;
          for (int prev = 1; prev < k; ++prev) used |= (n + pi[static_cast<std::size_t>(prev - 1)]) == j;
          if (!used) jset.push_back(j);
        }
        const int l = static_cast<int>(jset.size());
        // Q^(k) = Q_{n+k}(x_ik, x_{j_1}) ... Q_{n+k+l-2}(x_ik, x_{j_{l-1}}); rightmost first
        for (int t = l - 1; t >= 1; --t) {
          const int slot = n + k + t - 1;  // 1-based adjacent pair (slot, slot+1)
          out = apply_pair_operator(q.sparse(site(ik), site(jset[static_cast<std::size_t>(t - 1)])),
                                    r, len, slot - 1, slot, out);
        }
      }
      return out;
    };
    total += w * position_sum(pair_of_slot, n, data, op,
                              [&](const Vector& v) { return contract_pairs(standard, r, len, v); });
  } while (std::next_permutation(pi.begin(), pi.end()));
  return total;
}

cplx npoint_function(const KernelTable& q, int internal_dim, const std::vector<Vector>& annihilated,
                     const std::vector<Vector>& created) {
  if (annihilated.size() != created.size())
    throw Error("npoint_function needs equal numbers of annihilated and created vectors");
  if (annihilated.size() > 4) throw ResourceLimit("npoint_function is limited to n <= 4");
  std::vector<Vector> all = annihilated;
  all.insert(all.end(), created.begin(), created.end());
  const SlotData data = slot_data(all, q.sites(), q.components(), internal_dim);
  return sn_sum(q, data, [](int, int) { return cplx{1.0, 0.0}; });
}

}  // namespace mcr
