#pragma once

#include <cstddef>
#include <vector>

namespace mcr {

/// Finite site model. Sites are coordinates on the exchange axis; the
/// remaining coordinates are an `internal_dim`-point set with counting
/// measure. One-particle index order is (site, component, internal).
class DiscreteModel {
 public:
  DiscreteModel(std::vector<double> sites, int components, int internal_dim, int truncation);

  const std::vector<double>& sites() const { return sites_; }
  double site(int a) const { return sites_[static_cast<std::size_t>(a)]; }
  int site_count() const { return static_cast<int>(sites_.size()); }
  int components() const { return components_; }
  int internal_dim() const { return internal_dim_; }
  int truncation() const { return truncation_; }

  /// m * r * s
  int one_particle_dim() const { return site_count() * components_ * internal_dim_; }
  int index(int site, int component, int internal) const {
    return (site * components_ + component) * internal_dim_ + internal;
  }

  DiscreteModel with_truncation(int n) const;

 private:
  std::vector<double> sites_;
  int components_;
  int internal_dim_;
  int truncation_;
};

}  // namespace mcr
