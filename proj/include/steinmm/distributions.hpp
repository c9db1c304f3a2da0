#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "steinmm/numerics.hpp"

namespace steinmm {

/// Exp(λ), rate parametrisation.
struct ExpParams {
  double lambda = 1.0;

  static ExpParams make(double lambda);
  double mean() const { return 1.0 / lambda; }
  double variance() const { return 1.0 / (lambda * lambda); }
};

/// IG(μ, λ) with mean μ and shape λ.
struct IGParams {
  double mu = 1.0;
  double lambda = 1.0;

  static IGParams make(double mu, double lambda);
  double mean() const { return mu; }
  double variance() const { return mu * mu * mu / lambda; }
};

/// NB(ν, π): P(X = x) = C(ν+x−1, x) (1−π)^x π^ν on x = 0, 1, ...
struct NBParams {
  double nu = 1.0;
  double pi = 0.5;

  static NBParams make(double nu, double pi);
  // (μ, ν) parametrisation: π = ν/(ν+μ)
  static NBParams from_mean_size(double mean, double nu);
  // (μ, π) parametrisation: ν = πμ/(1−π)
  static NBParams from_mean_prob(double mean, double pi);

  double mean() const { return nu * (1.0 - pi) / pi; }
  double variance() const { return nu * (1.0 - pi) / (pi * pi); }
};

using DistParams = std::variant<ExpParams, IGParams, NBParams>;

std::string describe(const DistParams& params);

/// i.i.d. observations. Exp/IG samples are strictly positive; NB samples hold
/// non-negative integers stored as doubles.
struct Sample {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::span<const double> view() const { return values; }
};

// Input validation shared by estimators and the CLI. Throw DomainError.
void require_positive_sample(std::span<const double> values, std::size_t min_size = 2);
void require_count_sample(std::span<const double> values, std::size_t min_size = 2);

double density(const ExpParams& p, double x);
double density(const IGParams& p, double x);
double density(const NBParams& p, double x);  // pmf; 0 off the non-negative integers
double log_pmf(const NBParams& p, std::int64_t x);

/// E[X^r]. Exp needs r > −1; NB needs a non-negative integer r; IG accepts
/// any real r (integer orders −3..4 closed form, otherwise quadrature).
double raw_moment(const ExpParams& p, double r, const numerics::ToleranceConfig& cfg = {});
double raw_moment(const IGParams& p, double r, const numerics::ToleranceConfig& cfg = {});
double raw_moment(const NBParams& p, double r, const numerics::ToleranceConfig& cfg = {});

/// (μ/λ)-series closed forms for IG raw moments of integer order 0..4.
double ig_positive_moment(const IGParams& p, int order);

/// E[h(X)] by half-line quadrature against the density.
double expectation(const ExpParams& p, const std::function<double(double)>& h,
                   const numerics::ToleranceConfig& cfg = {});
double expectation(const IGParams& p, const std::function<double(double)>& h,
                   const numerics::ToleranceConfig& cfg = {});
/// E[h(X)] by truncated summation against the pmf.
double expectation(const NBParams& p, const std::function<double(std::int64_t)>& h,
                   const numerics::ToleranceConfig& cfg = {});

/// pgf(z) = (π / (1 − (1−π) z))^ν
double nb_pgf(const NBParams& p, double z);

/// Mixed factorial moment E[X_(k) z^X]
///   = (1−π)^k (ν+k−1)_(k) z^k / (1 − (1−π) z)^k · pgf(z).
/// Requires z ≥ 0 and (1−π) z < 1.
double nb_factorial_zmoment(const NBParams& p, int k, double z);

/// E[X^k z^X] via Stirling-number conversion of the factorial moments.
double nb_power_zmoment(const NBParams& p, int k, double z);

Sample sample(const ExpParams& p, std::size_t n, std::uint64_t seed);
Sample sample(const IGParams& p, std::size_t n, std::uint64_t seed);
Sample sample(const NBParams& p, std::size_t n, std::uint64_t seed);

class Rng;
// Single draws; used by the simulation harness with per-replication streams.
double draw(const ExpParams& p, Rng& rng);
double draw(const IGParams& p, Rng& rng);
double draw(const NBParams& p, Rng& rng);

}  // namespace steinmm
