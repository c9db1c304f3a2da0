#pragma once

#include <cstdint>
#include <functional>

namespace steinmm::numerics {

struct ToleranceConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 200;
  int max_terms = 100000;

  // Throws DomainError when any field violates its positivity constraint.
  void validate() const;
};

/// ln Γ(x) for x > 0.
double log_gamma(double x);

/// Generalised binomial coefficient Γ(r+1) / (Γ(s+1) Γ(r−s+1)).
///
/// Evaluated through log-gamma differences with explicit sign tracking, so
/// negative non-integer arguments (e.g. r = 2(a−1) with a < 1) are allowed.
/// Throws DomainError when any of the three Γ arguments is a pole.
double gen_binom(double r, double s);

/// Stirling number of the second kind S(k, j), 0 ≤ k ≤ 30. Returns 0 for j > k.
///
/// The table is built in exact 128-bit integer arithmetic; some entries for
/// k ≥ 27 exceed 2^64, so the value is returned as the nearest double (exact
/// below 2^53, which covers every k ≤ 22).
double stirling2(int k, int j);

/// Largest k supported by stirling2.
inline constexpr int kStirlingMax = 30;

using Integrand = std::function<double(double)>;

/// ∫₀^∞ integrand(x) dx by globally adaptive Gauss–Kronrod (21 point) quadrature.
///
/// The half line is split at `scale`. On [0, scale] the substitution
/// x = scale·w⁸ flattens integrable power singularities at the origin; on
/// [scale, ∞) the substitution x = scale/(1−t) maps the tail to [0, 1).
/// `scale` should be of the order of where the integrand's mass sits (the
/// distribution mean is a good choice).
///
/// Throws AccuracyError if the tolerance is not met within
/// cfg.max_subdivisions panel bisections.
double integrate_halfline(const Integrand& integrand, const ToleranceConfig& cfg = {},
                          double scale = 1.0);

/// Σ_{x≥0} term(x), stopping at the first M with |term(M)| < abs_tol and
/// |term(M)| < rel_tol·|partial sum|. Terms must eventually decrease in modulus.
/// Throws AccuracyError when max_terms is exhausted first.
double truncated_sum(const std::function<double(std::int64_t)>& term,
                     const ToleranceConfig& cfg = {});

}  // namespace steinmm::numerics
