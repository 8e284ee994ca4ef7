#include "mcr/phase.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace mcr {

namespace {

constexpr cplx I{0.0, 1.0};

double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::string_view context) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
    throw Error("bad number '" + std::string(s) + "' in phase descriptor '" +
                std::string(context) + "'");
  return v;
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

PhaseFn PhaseFn::constant(double value) {
  return PhaseFn([value](double, double) { return cplx{value, 0.0}; }, format_number(value));
}

PhaseFn PhaseFn::exp_sign_diff(double alpha) {
  return PhaseFn([alpha](double y1, double y2) { return std::exp(I * alpha * sign_of(y1 - y2)); },
                 "exp_sign_diff(" + format_number(alpha) + ")");
}

PhaseFn PhaseFn::exp_diff(double alpha) {
  return PhaseFn([alpha](double y1, double y2) { return std::exp(I * alpha * (y1 - y2)); },
                 "exp_diff(" + format_number(alpha) + ")");
}

PhaseFn PhaseFn::exp_atan_diff(double alpha) {
  return PhaseFn(
      [alpha](double y1, double y2) { return std::exp(I * alpha * std::atan(y1 - y2)); },
      "exp_atan_diff(" + format_number(alpha) + ")");
}

PhaseFn PhaseFn::negated() const {
  Fn inner = fn_;
  return PhaseFn([inner](double y1, double y2) { return -inner(y1, y2); }, "-" + repr_);
}

PhaseFn PhaseFn::swapped() const {
  Fn inner = fn_;
  return PhaseFn([inner](double y1, double y2) { return inner(y2, y1); }, "swap(" + repr_ + ")");
}

PhaseFn PhaseFn::parse(std::string_view descriptor) {
  const std::string_view s = trim(descriptor);
  if (s.empty()) throw Error("empty phase descriptor");
  if (s.front() == '-' && s.size() > 1 && !std::isdigit(static_cast<unsigned char>(s[1])) &&
      s[1] != '.')
    return parse(s.substr(1)).negated();

  const auto open = s.find('(');
  if (open == std::string_view::npos) {
    const double v = parse_number(s, descriptor);
    if (v != 1.0 && v != -1.0)
      throw Error("constant phase must be 1 or -1, got '" + std::string(s) + "'");
    return constant(v);
  }
  if (s.back() != ')') throw Error("unbalanced phase descriptor '" + std::string(s) + "'");
  const std::string_view name = trim(s.substr(0, open));
  const std::string_view arg = s.substr(open + 1, s.size() - open - 2);

  if (name == "swap") return parse(arg).swapped();
  if (name == "exp_sign_diff") return exp_sign_diff(parse_number(arg, descriptor));
  if (name == "exp_diff") return exp_diff(parse_number(arg, descriptor));
  if (name == "exp_atan_diff") return exp_atan_diff(parse_number(arg, descriptor));
  throw Error("unknown phase function '" + std::string(name) + "'");
}

}  // namespace mcr
