#pragma once

#include "steinmm/distributions.hpp"
#include "steinmm/numerics.hpp"
#include "steinmm/weights.hpp"

namespace steinmm {

/// Exponents of a moment functional. Continuous case: E[X^k f(X)^l f′(X)^m];
/// discrete case: E[X^k f(X)^l f(X+1)^m].
struct MomentTriple {
  int k = 0;
  int l = 0;
  int m = 0;
};

enum class MomentMethod {
  Auto,     // closed form when registered, numeric otherwise
  Closed,   // closed form only; UnsupportedError if none is registered
  Numeric,  // quadrature (Exp, IG) or truncated summation (NB)
};

/// μ_f(k, l, m) = E[X^k f(X)^l f′(X)^m].
///
/// Closed routes: Exp × {Identity, Power, GeomOneMinus}; IG × {Constant,
/// Reciprocal}; IG × {Identity, Power} when k + a·l + (a−1)·m is an integer
/// in [−3, 4]. Throws DomainError when the moment does not exist.
double mu_f(const ExpParams& p, const WeightFunction& w, MomentTriple t,
            MomentMethod method = MomentMethod::Auto, const numerics::ToleranceConfig& cfg = {});
double mu_f(const IGParams& p, const WeightFunction& w, MomentTriple t,
            MomentMethod method = MomentMethod::Auto, const numerics::ToleranceConfig& cfg = {});

/// μ̃_f(k, l, m) = E[X^k f(X)^l f(X+1)^m].
///
/// Closed route for GeomNB via α^m E[X^k α^{(l+m)X}] and the factorial-moment
/// formula; truncated summation for every family.
double mu_tilde(const NBParams& p, const WeightFunction& w, MomentTriple t,
                MomentMethod method = MomentMethod::Auto,
                const numerics::ToleranceConfig& cfg = {});

bool has_closed_form(const ExpParams& p, const WeightFunction& w, MomentTriple t);
bool has_closed_form(const IGParams& p, const WeightFunction& w, MomentTriple t);
bool has_closed_form(const NBParams& p, const WeightFunction& w, MomentTriple t);

}  // namespace steinmm
