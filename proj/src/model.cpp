#include "mcr/model.hpp"

#include "mcr/types.hpp"

#include <algorithm>

namespace mcr {

DiscreteModel::DiscreteModel(std::vector<double> sites, int components, int internal_dim,
                             int truncation)
    : sites_(std::move(sites)),
      components_(components),
      internal_dim_(internal_dim),
      truncation_(truncation) {
  if (sites_.empty()) throw Error("model needs at least one site");
  if (std::adjacent_find(sites_.begin(), sites_.end(),
                         [](double a, double b) { return !(a < b); }) != sites_.end())
    throw Error("model sites must be distinct and sorted ascending");
  if (components_ < 1) throw Error("component count must be >= 1");
  if (internal_dim_ < 1) throw Error("internal dimension must be >= 1");
  if (truncation_ < 0) throw Error("truncation level must be >= 0");
}

DiscreteModel DiscreteModel::with_truncation(int n) const {
  return DiscreteModel(sites_, components_, internal_dim_, n);
}

}  // namespace mcr
