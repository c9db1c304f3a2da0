#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "steinmm/distributions.hpp"
#include "steinmm/weights.hpp"

namespace steinmm {

enum class Target { ExpLambda, IgMu, IgLambda, NbNu, NbPi };

std::string_view to_string(Target target);

struct EstimateResult {
  double value = 0.0;
  Target target = Target::ExpLambda;
  WeightFunction weight = WeightFunction::identity();
  std::size_t n = 0;
  double denominator = 0.0;  // the estimator's denominator before division
  bool unchecked = false;    // custom weight, admissibility not verified
  bool boundary = false;     // estimate sits on the edge of the parameter space
};

struct IgEstimate {
  double mu_hat;
  EstimateResult lambda_hat;
};

/// λ̂ = mean f′(X) / mean f(X).
EstimateResult stein_exp(std::span<const double> data, const WeightFunction& w);

/// μ̂ = X̄ and λ̂ = X̄²(2·mean X²f′ + mean Xf) / (mean X²f − X̄²·mean f).
IgEstimate ig_estimate(std::span<const double> data, const WeightFunction& w);

/// ν̂ = X̄·mean(XΔf) / (mean(Xf(X)) − X̄·mean f(X+1)).
EstimateResult nb_estimate_nu(std::span<const double> data, const WeightFunction& w);

/// π̂ = mean(XΔf) / (mean(Xf(X+1)) − X̄·mean f(X+1)).
EstimateResult nb_estimate_pi(std::span<const double> data, const WeightFunction& w);

// Classical estimators used as pilots and as reduction references.
enum class VarianceDivisor { N, NMinusOne };

double sample_mean(std::span<const double> data);
double sample_variance(std::span<const double> data, VarianceDivisor divisor = VarianceDivisor::N);
double exp_mle(std::span<const double> data);
double ig_mm(std::span<const double> data);  // X̄³/S², 1/n divisor
double ig_ml(std::span<const double> data);  // X̄/(X̄·mean(1/X) − 1)
double nb_mm_nu(std::span<const double> data, VarianceDivisor divisor = VarianceDivisor::N);
double nb_mm_pi(std::span<const double> data, VarianceDivisor divisor = VarianceDivisor::N);

}  // namespace steinmm
