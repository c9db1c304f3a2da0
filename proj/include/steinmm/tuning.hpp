#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "steinmm/asymptotics.hpp"
#include "steinmm/distributions.hpp"
#include "steinmm/estimators.hpp"
#include "steinmm/weights.hpp"

namespace steinmm {

enum class Criterion { Variance, BiasAbs, Mse };

std::string_view to_string(Criterion criterion);
Criterion parse_criterion(std::string_view text);  // variance | bias | mse

/// Side of the IG pole at a = −1/2 for the power family.
enum class IgBranch { BelowMinusHalf, AboveMinusHalf };

struct Bracket {
  double lo;
  double hi;
};

struct TuneSpec {
  WeightFunction family = WeightFunction::power(1.0);  // parameter value is ignored
  Criterion criterion = Criterion::Mse;
  DistParams params = ExpParams{1.0};
  Target target = Target::ExpLambda;
  long n = 1;
  std::optional<Bracket> bracket;  // default depends on family and distribution
  std::optional<IgBranch> branch;
  int grid_points = 64;
  double tolerance = 1e-5;
  MomentOptions moments{};
};

struct TuneResult {
  double optimum = 0.0;
  double value = 0.0;  // criterion at the optimum
  int evaluations = 0;
  bool boundary = false;    // optimum within tolerance of a bracket end
  bool multimodal = false;  // more than one local minimum on the grid
  Bracket bracket{0.0, 0.0};
  AsymptoticSummary summary{};
};

/// Default search interval for a family, distribution and IG branch.
Bracket default_bracket(const WeightFunction& family, DistKind dist, std::optional<IgBranch> branch);

/// Asymptotic summary of the estimator for `target` with weight w.
AsymptoticSummary asymptotic_summary(const DistParams& params, Target target, const WeightFunction& w,
                                     long n, const MomentOptions& opt = {});

double criterion_value(const AsymptoticSummary& s, Criterion criterion);

/// Grid scan followed by golden-section refinement to a bracket narrower than
/// spec.tolerance. Throws InfeasibleError if every grid point fails.
TuneResult optimize_weight(const TuneSpec& spec);

struct TwoStepResult {
  double pilot = 0.0;  // pilot estimate of the target parameter
  double pilot_mean = 0.0;
  TuneResult tuning{};
  EstimateResult estimate{};
};

struct TwoStepOptions {
  std::optional<Bracket> bracket;
  std::optional<IgBranch> branch;
  // divisor of S² in the NB moment pilot
  VarianceDivisor pilot_divisor = VarianceDivisor::NMinusOne;
};

/// Pilot estimate (Exp: 1/x̄, IG: ML, NB: MM), tuning of the family parameter
/// with the pilot treated as truth, then re-estimation with the tuned weight.
TwoStepResult two_step(std::span<const double> data, const WeightFunction& family,
                       Criterion criterion, Target target, const TwoStepOptions& options = {});

}  // namespace steinmm
