#include "steinmm/weights.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "steinmm/errors.hpp"

namespace steinmm {

namespace {

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

// x^a on the real line without a complex branch.
double real_power(double x, double a, const char* who) {
  if (x < 0.0 && !is_integer(a)) {
    throw DomainError(std::string(who) + ": non-integer power of a negative argument");
  }
  if (x == 0.0 && a < 0.0) {
    throw DomainError(std::string(who) + ": negative power at zero");
  }
  return std::pow(x, a);
}

void require_open_unit(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0, 1)");
  }
}

}  // namespace

std::string_view to_string(DistKind kind) {
  switch (kind) {
    case DistKind::Exp:
      return "exp";
    case DistKind::IG:
      return "ig";
    case DistKind::NB:
      return "nb";
  }
  return "?";
}

WeightFunction WeightFunction::identity() { return {WeightFamily::Identity, 1.0}; }

WeightFunction WeightFunction::power(double a) {
  if (!std::isfinite(a)) throw DomainError("pow: exponent must be finite");
  return {WeightFamily::Power, a};
}

WeightFunction WeightFunction::one_plus_log() { return {WeightFamily::OnePlusLog, 0.0}; }

WeightFunction WeightFunction::geom_one_minus(double u) {
  require_open_unit(u, "geom1m: u");
  return {WeightFamily::GeomOneMinus, u};
}

WeightFunction WeightFunction::constant() { return {WeightFamily::Constant, 0.0}; }

WeightFunction WeightFunction::reciprocal() { return {WeightFamily::Reciprocal, -1.0}; }

WeightFunction WeightFunction::geom_nb(double alpha) {
  require_open_unit(alpha, "geom: alpha");
  return {WeightFamily::GeomNB, alpha};
}

WeightFunction WeightFunction::shifted_power(double a) {
  if (!std::isfinite(a)) throw DomainError("shiftpow: exponent must be finite");
  return {WeightFamily::ShiftedPower, a};
}

WeightFunction WeightFunction::custom(CustomWeight weight) {
  if (!weight.f) throw DomainError("custom weight needs f");
  WeightFunction w{WeightFamily::Custom, 0.0};
  w.custom_ = std::make_shared<const CustomWeight>(std::move(weight));
  return w;
}

bool WeightFunction::has_parameter() const {
  switch (family_) {
    case WeightFamily::Power:
    case WeightFamily::GeomOneMinus:
    case WeightFamily::GeomNB:
    case WeightFamily::ShiftedPower:
      return true;
    default:
      return false;
  }
}

WeightFunction WeightFunction::with_parameter(double value) const {
  switch (family_) {
    case WeightFamily::Power:
      return power(value);
    case WeightFamily::GeomOneMinus:
      return geom_one_minus(value);
    case WeightFamily::GeomNB:
      return geom_nb(value);
    case WeightFamily::ShiftedPower:
      return shifted_power(value);
    default:
      throw DomainError("weight family " + spec() + " has no free parameter");
  }
}

double WeightFunction::eval(double x) const {
  switch (family_) {
    case WeightFamily::Identity:
      return x;
    case WeightFamily::Power:
      return real_power(x, param_, "pow");
    case WeightFamily::OnePlusLog:
      if (!(x > -1.0)) throw DomainError("log1p: requires x > -1");
      return std::log1p(x);
    case WeightFamily::GeomOneMinus:
      return 1.0 - std::pow(param_, x);
    case WeightFamily::Constant:
      return 1.0;
    case WeightFamily::Reciprocal:
      if (x == 0.0) throw DomainError("recip: undefined at zero");
      return 1.0 / x;
    case WeightFamily::GeomNB:
      return std::pow(param_, x);
    case WeightFamily::ShiftedPower:
      return real_power(x + 1.0, param_, "shiftpow");
    case WeightFamily::Custom:
      return custom_->f(x);
  }
  return 0.0;
}

double WeightFunction::deriv(double x) const {
  switch (family_) {
    case WeightFamily::Identity:
      return 1.0;
    case WeightFamily::Power:
      if (param_ == 0.0) return 0.0;
      if (param_ == 1.0) return 1.0;
      if (x == 0.0 && param_ < 1.0) throw DomainError("pow: not differentiable at zero for a < 1");
      return param_ * real_power(x, param_ - 1.0, "pow");
    case WeightFamily::OnePlusLog:
      if (!(x > -1.0)) throw DomainError("log1p: requires x > -1");
      return 1.0 / (1.0 + x);
    case WeightFamily::GeomOneMinus:
      return -std::log(param_) * std::pow(param_, x);
    case WeightFamily::Constant:
      return 0.0;
    case WeightFamily::Reciprocal:
      if (x == 0.0) throw DomainError("recip: undefined at zero");
      return -1.0 / (x * x);
    case WeightFamily::GeomNB:
      return std::log(param_) * std::pow(param_, x);
    case WeightFamily::ShiftedPower:
      if (param_ == 0.0) return 0.0;
      return param_ * real_power(x + 1.0, param_ - 1.0, "shiftpow");
    case WeightFamily::Custom:
      if (!custom_->derivative) throw UnsupportedError("custom weight has no derivative");
      return custom_->derivative(x);
  }
  return 0.0;
}

double WeightFunction::diff(double x) const {
  switch (family_) {
    case WeightFamily::Identity:
      return 1.0;
    case WeightFamily::Constant:
      return 0.0;
    case WeightFamily::Custom:
      if (custom_->forward_difference) return custom_->forward_difference(x);
      return custom_->f(x + 1.0) - custom_->f(x);
    default:
      return eval(x + 1.0) - eval(x);
  }
}

std::string WeightFunction::spec() const {
  switch (family_) {
    case WeightFamily::Identity:
      return "identity";
    case WeightFamily::Power:
      return "pow:a=" + format_number(param_);
    case WeightFamily::OnePlusLog:
      return "log1p";
    case WeightFamily::GeomOneMinus:
      return "geom1m:u=" + format_number(param_);
    case WeightFamily::Constant:
      return "const";
    case WeightFamily::Reciprocal:
      return "recip";
    case WeightFamily::GeomNB:
      return "geom:alpha=" + format_number(param_);
    case WeightFamily::ShiftedPower:
      return "shiftpow:a=" + format_number(param_);
    case WeightFamily::Custom:
      return "custom:" + custom_->name;
  }
  return "?";
}

Admissibility check_admissible(const WeightFunction& w, DistKind dist) {
  auto ok = [dist] { return Admissibility{dist, true, ""}; };
  auto reject = [dist](std::string why) { return Admissibility{dist, false, std::move(why)}; };

  if (w.family() == WeightFamily::Custom) {
    return Admissibility{dist, true, "unchecked admissibility (custom weight)"};
  }

  switch (dist) {
    case DistKind::Exp:
      switch (w.family()) {
        case WeightFamily::Identity:
        case WeightFamily::OnePlusLog:
        case WeightFamily::GeomOneMinus:
          return ok();
        case WeightFamily::Power:
          if (w.parameter() > 0.0) return ok();
          return reject("Exp identity requires f(0) = 0, so pow needs a > 0");
        case WeightFamily::Constant:
          return reject("Exp identity requires f(0) = 0, but const has f(0) = 1");
        case WeightFamily::Reciprocal:
          return reject("Exp identity requires f(0) = 0, but 1/x is undefined at 0");
        case WeightFamily::GeomNB:
          return reject("Exp identity requires f(0) = 0, but alpha^x has f(0) = 1");
        case WeightFamily::ShiftedPower:
          return reject("Exp identity requires f(0) = 0, but (x+1)^a has f(0) = 1");
        default:
          break;
      }
      break;
    case DistKind::IG:
      // The IG density vanishes faster than any power at 0 and exponentially
      // at infinity, so all closed families satisfy the boundary condition.
      if (w.family() == WeightFamily::Power && w.parameter() == -0.5) {
        return reject("pow:a=-0.5 leads to a degenerate IG estimator (zero denominator)");
      }
      return ok();
    case DistKind::NB:
      switch (w.family()) {
        case WeightFamily::Identity:
        case WeightFamily::OnePlusLog:
        case WeightFamily::GeomOneMinus:
        case WeightFamily::GeomNB:
          return ok();
        case WeightFamily::Power:
          if (w.parameter() > 0.0) return ok();
          if (w.parameter() == 0.0) return reject("pow:a=0 is constant, so delta f = 0 and the estimator degenerates");
          return reject("pow with a < 0 is undefined at x = 0");
        case WeightFamily::ShiftedPower:
          if (w.parameter() != 0.0) return ok();
          return reject("shiftpow:a=0 is constant, so delta f = 0 and the estimator degenerates");
        case WeightFamily::Constant:
          return reject("const has delta f = 0, so the NB estimators degenerate");
        case WeightFamily::Reciprocal:
          return reject("1/x is undefined at x = 0");
        default:
          break;
      }
      break;
  }
  return reject("unknown weight family");
}

std::string_view weight_grammar() {
  return "weight spec: identity | pow:a=<real> | log1p | geom1m:u=<(0,1)> | const | recip | "
         "geom:alpha=<(0,1)> | shiftpow:a=<real>";
}

namespace {

double parse_param(std::string_view text, std::string_view key) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || text.substr(0, eq) != key) {
    throw ParseError("expected '" + std::string(key) + "=<value>' in weight spec; " +
                     std::string(weight_grammar()));
  }
  const std::string_view number = text.substr(eq + 1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), value);
  if (ec != std::errc{} || ptr != number.data() + number.size() || number.empty()) {
    throw ParseError("bad number '" + std::string(number) + "' in weight spec; " +
                     std::string(weight_grammar()));
  }
  return value;
}

}  // namespace

WeightFunction parse_weight(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  const bool has_rest = colon != std::string_view::npos;

  auto no_args = [&](WeightFunction w) {
    if (has_rest) {
      throw ParseError("weight '" + std::string(head) + "' takes no parameter; " +
                       std::string(weight_grammar()));
    }
    return w;
  };
  try {
    if (head == "identity") return no_args(WeightFunction::identity());
    if (head == "log1p") return no_args(WeightFunction::one_plus_log());
    if (head == "const") return no_args(WeightFunction::constant());
    if (head == "recip") return no_args(WeightFunction::reciprocal());
    if (head == "pow") return WeightFunction::power(parse_param(rest, "a"));
    if (head == "geom1m") return WeightFunction::geom_one_minus(parse_param(rest, "u"));
    if (head == "geom") return WeightFunction::geom_nb(parse_param(rest, "alpha"));
    if (head == "shiftpow") return WeightFunction::shifted_power(parse_param(rest, "a"));
  } catch (const DomainError& e) {
    throw ParseError(std::string(e.what()) + "; " + std::string(weight_grammar()));
  }
  throw ParseError("unknown weight family '" + std::string(text) + "'; " + std::string(weight_grammar()));
}

WeightFunction parse_family(std::string_view name) {
  if (name == "pow") return WeightFunction::power(1.0);
  if (name == "geom1m") return WeightFunction::geom_one_minus(0.5);
  if (name == "geom") return WeightFunction::geom_nb(0.5);
  if (name == "shiftpow") return WeightFunction::shifted_power(1.0);
  throw ParseError("unknown tunable family '" + std::string(name) +
                   "'; expected one of pow | geom1m | geom | shiftpow");
}

}  // namespace steinmm
