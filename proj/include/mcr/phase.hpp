#pragma once

#include "mcr/types.hpp"

#include <functional>
#include <string>
#include <string_view>

namespace mcr {

/// A scalar exchange phase q(y1, y2), evaluated at arbitrary real points.
///
/// Descriptor grammar accepted by `parse`:
///
///     phase := "1" | "-1"
///            | "-" phase
///            | "swap(" phase ")"            q(y2, y1)
///            | "exp_sign_diff(" a ")"       exp(i a sgn(y1 - y2))
///            | "exp_diff(" a ")"            exp(i a (y1 - y2))
///            | "exp_atan_diff(" a ")"       exp(i a atan(y1 - y2))
class PhaseFn {
 public:
  using Fn = std::function<cplx(double, double)>;

  PhaseFn(Fn fn, std::string repr) : fn_(std::move(fn)), repr_(std::move(repr)) {}

  static PhaseFn constant(double value);
  static PhaseFn exp_sign_diff(double alpha);
  static PhaseFn exp_diff(double alpha);
  static PhaseFn exp_atan_diff(double alpha);
  static PhaseFn parse(std::string_view descriptor);

  PhaseFn negated() const;
  PhaseFn swapped() const;

  cplx operator()(double y1, double y2) const { return fn_(y1, y2); }
  const std::string& repr() const { return repr_; }

 private:
  Fn fn_;
  std::string repr_;
};

}  // namespace mcr
