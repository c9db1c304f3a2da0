#include "steinmm/moments.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <string>

#include "steinmm/errors.hpp"

namespace steinmm {

namespace {

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

void require_triple(MomentTriple t) {
  if (t.k < 0 || t.l < 0 || t.m < 0) {
    throw DomainError("moment triple entries must be non-negative");
  }
}

std::string describe_triple(const char* name, const WeightFunction& w, MomentTriple t) {
  std::ostringstream out;
  out << name << "(" << t.k << "," << t.l << "," << t.m << ") for " << w.spec();
  return out.str();
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

// Power-type weights: f = x^a with f′ = a·x^{a−1}. Identity is a = 1.
std::optional<double> power_exponent(const WeightFunction& w) {
  if (w.family() == WeightFamily::Identity) return 1.0;
  if (w.family() == WeightFamily::Power) return w.parameter();
  return std::nullopt;
}

// Integrand x^k f(x)^l g(x)^m where g is f′ or the shifted f.
template <class G>
double triple_term(const WeightFunction& w, MomentTriple t, double x, G&& g) {
  double value = ipow(x, t.k);
  if (t.l > 0) value *= ipow(w.eval(x), t.l);
  if (t.m > 0) value *= ipow(g(x), t.m);
  return value;
}

// ---- Exp closed forms ------------------------------------------------------

std::optional<double> exp_closed(const ExpParams& p, const WeightFunction& w, MomentTriple t) {
  if (auto a = power_exponent(w)) {
    if (*a == 0.0) {
      return t.m > 0 ? 0.0 : raw_moment(p, t.k);
    }
    // a^m E[X^{k + a l + (a−1) m}]
    const double r = t.k + *a * t.l + (*a - 1.0) * t.m;
    if (!(r > -1.0)) {
      throw DomainError(describe_triple("mu_f", w, t) + " does not exist under Exp (needs order > -1)");
    }
    return ipow(*a, t.m) * raw_moment(p, r);
  }
  if (w.family() == WeightFamily::GeomOneMinus) {
    // (1 − u^x)^l (−ln u · u^x)^m expanded binomially, using
    // E[X^k u^{cX}] = λ k! / (λ − c ln u)^{k+1}.
    const double log_u = std::log(w.parameter());
    double total = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= t.l; ++j) {
      const int c = j + t.m;
      const double term = p.lambda * factorial(t.k) / std::pow(p.lambda - c * log_u, t.k + 1);
      total += ((j % 2 == 0) ? 1.0 : -1.0) * binom * term;
      binom = binom * (t.l - j) / (j + 1);
    }
    return ipow(-log_u, t.m) * total;
  }
  return std::nullopt;
}

// ---- IG closed forms -------------------------------------------------------

constexpr int kIgClosedMin = -3;
constexpr int kIgClosedMax = 4;

bool ig_integer_order(double r) {
  return is_integer(r) && r >= kIgClosedMin && r <= kIgClosedMax;
}

std::optional<double> ig_closed(const IGParams& p, const WeightFunction& w, MomentTriple t) {
  switch (w.family()) {
    case WeightFamily::Constant:
      // f′ ≡ 0
      if (t.m > 0) return 0.0;
      if (!ig_integer_order(t.k)) return std::nullopt;
      return raw_moment(p, t.k);
    case WeightFamily::Reciprocal: {
      // (−1)^m E[X^{k−l−2m}]
      const int r = t.k - t.l - 2 * t.m;
      if (!ig_integer_order(r)) return std::nullopt;
      return ((t.m % 2 == 0) ? 1.0 : -1.0) * raw_moment(p, r);
    }
    default:
      break;
  }
  if (auto a = power_exponent(w)) {
    if (*a == 0.0 && t.m > 0) return 0.0;
    const double r = t.k + *a * t.l + (*a - 1.0) * t.m;
    if (!ig_integer_order(r)) return std::nullopt;
    return ipow(*a, t.m) * raw_moment(p, r);
  }
  return std::nullopt;
}

// ---- NB closed forms -------------------------------------------------------

std::optional<double> nb_closed(const NBParams& p, const WeightFunction& w, MomentTriple t) {
  if (w.family() != WeightFamily::GeomNB) return std::nullopt;
  const double alpha = w.parameter();
  // α^m E[X^k α^{(l+m)X}]
  const double z = std::pow(alpha, t.l + t.m);
  if (!((1.0 - p.pi) * z < 1.0)) {
    throw DomainError(describe_triple("mu_tilde", w, t) + ": closed route needs (1-pi) alpha^(l+m) < 1");
  }
  return ipow(alpha, t.m) * nb_power_zmoment(p, t.k, z);
}

// ---- numeric routes --------------------------------------------------------

template <class Params>
double continuous_numeric(const Params& p, const WeightFunction& w, MomentTriple t,
                          const numerics::ToleranceConfig& cfg) {
  return expectation(
      p,
      [&w, t](double x) { return triple_term(w, t, x, [&w](double y) { return w.deriv(y); }); },
      cfg);
}

void require_exp_moment_exists(const WeightFunction& w, MomentTriple t) {
  // Near 0 the integrand behaves like x^{k + a l + (a−1) m} for power weights.
  if (auto a = power_exponent(w)) {
    const double r = t.k + *a * t.l + (*a - 1.0) * (*a == 0.0 ? 0 : t.m);
    if (!(r > -1.0)) {
      throw DomainError(describe_triple("mu_f", w, t) + " does not exist under Exp (needs order > -1)");
    }
  }
  if (w.family() == WeightFamily::Reciprocal) {
    const int r = t.k - t.l - 2 * t.m;
    if (!(r > -1)) {
      throw DomainError(describe_triple("mu_f", w, t) + " does not exist under Exp (needs order > -1)");
    }
  }
}

template <class Closed, class Numeric>
double dispatch(MomentMethod method, const char* name, const WeightFunction& w, MomentTriple t,
                Closed&& closed, Numeric&& numeric) {
  require_triple(t);
  if (method == MomentMethod::Numeric) return numeric();
  if (w.family() != WeightFamily::Custom) {
    if (auto value = closed()) return *value;
  }
  if (method == MomentMethod::Closed) {
    throw UnsupportedError("no closed form registered for " + describe_triple(name, w, t));
  }
  return numeric();
}

}  // namespace

double mu_f(const ExpParams& p, const WeightFunction& w, MomentTriple t, MomentMethod method,
            const numerics::ToleranceConfig& cfg) {
  return dispatch(
      method, "mu_f", w, t, [&] { return exp_closed(p, w, t); },
      [&] {
        require_exp_moment_exists(w, t);
        return continuous_numeric(p, w, t, cfg);
      });
}

double mu_f(const IGParams& p, const WeightFunction& w, MomentTriple t, MomentMethod method,
            const numerics::ToleranceConfig& cfg) {
  return dispatch(
      method, "mu_f", w, t, [&] { return ig_closed(p, w, t); },
      [&] { return continuous_numeric(p, w, t, cfg); });
}

double mu_tilde(const NBParams& p, const WeightFunction& w, MomentTriple t, MomentMethod method,
                const numerics::ToleranceConfig& cfg) {
  return dispatch(
      method, "mu_tilde", w, t, [&] { return nb_closed(p, w, t); },
      [&] {
        return expectation(
            p,
            [&w, t](std::int64_t x) {
              const double xd = static_cast<double>(x);
              return triple_term(w, t, xd, [&w](double y) { return w.eval(y + 1.0); });
            },
            cfg);
      });
}

bool has_closed_form(const ExpParams& p, const WeightFunction& w, MomentTriple t) {
  try {
    return w.family() != WeightFamily::Custom && exp_closed(p, w, t).has_value();
  } catch (const DomainError&) {
    return false;
  }
}

bool has_closed_form(const IGParams& p, const WeightFunction& w, MomentTriple t) {
  try {
    return w.family() != WeightFamily::Custom && ig_closed(p, w, t).has_value();
  } catch (const DomainError&) {
    return false;
  }
}

bool has_closed_form(const NBParams& p, const WeightFunction& w, MomentTriple t) {
  try {
    return w.family() != WeightFamily::Custom && nb_closed(p, w, t).has_value();
  } catch (const DomainError&) {
    return false;
  }
}

}  // namespace steinmm
