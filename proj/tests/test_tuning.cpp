#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>
#include <string>

#include "steinmm/errors.hpp"
#include "steinmm/io.hpp"
#include "steinmm/tuning.hpp"

using namespace steinmm;
using doctest::Approx;

namespace {

TuneSpec exp_spec(const WeightFunction& family, long n, double lambda = 1.0) {
  TuneSpec s;
  s.family = family;
  s.criterion = Criterion::Mse;
  s.params = ExpParams::make(lambda);
  s.target = Target::ExpLambda;
  s.n = n;
  return s;
}

Sample fixture(const char* name) { return read_dataset(std::string(STEINMM_TEST_DATA_DIR) + "/" + name); }

}  // namespace

TEST_CASE("exp optima") {
  const long sizes[] = {10, 25, 50, 100};
  const double a_ref[] = {0.952, 0.978, 0.988, 0.994};
  const double u_ref[] = {0.918, 0.963, 0.981, 0.990};
  for (int i = 0; i < 4; ++i) {
    const TuneResult a = optimize_weight(exp_spec(WeightFunction::power(1), sizes[i]));
    CHECK(std::fabs(a.optimum - a_ref[i]) <= 0.002);
    CHECK_FALSE(a.boundary);
    CHECK(a.bracket.lo == 0.5);
    CHECK(a.bracket.hi == 1.5);
    const TuneResult u = optimize_weight(exp_spec(WeightFunction::geom_one_minus(0.5), sizes[i]));
    CHECK(std::fabs(u.optimum - u_ref[i]) <= 0.002);
  }
}

TEST_CASE("tuned power exponent does not depend on lambda") {
  const double base = optimize_weight(exp_spec(WeightFunction::power(1), 25, 1.0)).optimum;
  for (double lambda : {0.5, 2.0}) {
    CHECK(optimize_weight(exp_spec(WeightFunction::power(1), 25, lambda)).optimum == Approx(base).epsilon(1e-4));
  }
}

TEST_CASE("optimum is a local minimum") {
  TuneSpec s = exp_spec(WeightFunction::geom_one_minus(0.5), 25);
  const TuneResult r = optimize_weight(s);
  for (double d : {-1e-3, 1e-3}) {
    const auto at = asymptotic_summary(s.params, s.target, s.family.with_parameter(r.optimum + d), s.n);
    CHECK(criterion_value(at, s.criterion) >= r.value);
  }
  CHECK(r.evaluations > 64);
}

TEST_CASE("nb optimum with the n-scaled criterion") {
  TuneSpec s;
  s.family = WeightFunction::geom_nb(0.5);
  s.criterion = Criterion::Variance;
  s.params = NBParams::from_mean_size(2.5, 2.5);
  s.target = Target::NbNu;
  s.n = 1;
  const TuneResult r = optimize_weight(s);
  CHECK(std::fabs(r.optimum - 0.805) <= 0.002);
  CHECK(std::fabs(r.value - 59.113) <= 0.01);
}

TEST_CASE("boundary optima are flagged") {
  TuneSpec s;
  s.family = WeightFunction::shifted_power(0.0);
  s.criterion = Criterion::BiasAbs;
  s.params = NBParams::from_mean_size(2.5, 1.0);
  s.target = Target::NbNu;
  const TuneResult r = optimize_weight(s);
  CHECK(r.boundary);
  CHECK(r.optimum == Approx(-0.99).epsilon(1e-4));
}

TEST_CASE("ig brackets respect the pole at -1/2") {
  TuneSpec s;
  s.family = WeightFunction::power(1.0);
  s.criterion = Criterion::Variance;
  s.params = IGParams::make(1.0, 1.0);
  s.target = Target::IgLambda;
  s.n = 100;
  s.bracket = Bracket{-1.0, 0.0};
  CHECK_THROWS_AS(optimize_weight(s), DomainError);
  s.bracket.reset();
  s.branch = IgBranch::BelowMinusHalf;
  CHECK(optimize_weight(s).optimum == Approx(-1.0).epsilon(1e-3));
  const Bracket below = default_bracket(s.family, DistKind::IG, IgBranch::BelowMinusHalf);
  const Bracket above = default_bracket(s.family, DistKind::IG, IgBranch::AboveMinusHalf);
  CHECK(below.hi <= -0.5);
  CHECK(above.lo >= -0.5);
}

TEST_CASE("invalid tuning specs") {
  TuneSpec s = exp_spec(WeightFunction::power(1), 10);
  s.bracket = Bracket{1.0, 0.5};
  CHECK_THROWS_AS(optimize_weight(s), DomainError);
  s = exp_spec(WeightFunction::identity(), 10);
  CHECK_THROWS_AS(optimize_weight(s), DomainError);
  CHECK(parse_criterion("bias") == Criterion::BiasAbs);
  CHECK_THROWS_AS(parse_criterion("median"), ParseError);
}

TEST_CASE("two-step on the runoff data") {
  const Sample runoff = fixture("runoff.csv");
  TwoStepOptions below;
  below.branch = IgBranch::BelowMinusHalf;
  const TwoStepResult b = two_step(runoff.view(), WeightFunction::power(1), Criterion::BiasAbs, Target::IgLambda, below);
  CHECK(std::fabs(b.pilot - 1.440) <= 0.0005);
  CHECK(std::fabs(b.tuning.optimum - (-0.668)) <= 0.002);
  CHECK(std::fabs(b.estimate.value - 1.429) <= 0.0005);
  TwoStepOptions above;
  above.branch = IgBranch::AboveMinusHalf;
  const TwoStepResult v =
      two_step(runoff.view(), WeightFunction::power(1), Criterion::Variance, Target::IgLambda, above);
  CHECK(std::fabs(v.tuning.optimum - (-0.109)) <= 0.002);
  CHECK(std::fabs(v.estimate.value - 1.511) <= 0.0005);
  const TwoStepResult again =
      two_step(runoff.view(), WeightFunction::power(1), Criterion::Variance, Target::IgLambda, above);
  CHECK(again.estimate.value == v.estimate.value);
}

TEST_CASE("two-step on the mites data") {
  const Sample mites = fixture("mites.csv");
  const TwoStepResult nu = two_step(mites.view(), WeightFunction::geom_nb(0.5), Criterion::BiasAbs, Target::NbNu);
  CHECK(std::fabs(nu.pilot - 1.167) <= 0.0005);
  CHECK(std::fabs(nu.tuning.optimum - 0.530) <= 0.002);
  const TwoStepResult pi = two_step(mites.view(), WeightFunction::geom_nb(0.5), Criterion::BiasAbs, Target::NbPi);
  CHECK(std::fabs(pi.pilot - 0.504) <= 0.0005);
  CHECK(std::fabs(pi.tuning.optimum - 0.222) <= 0.002);
}

TEST_CASE("two-step on a synthetic exponential sample") {
  const Sample x = sample(ExpParams::make(1.0), 10, 3);
  const TwoStepResult r = two_step(x.view(), WeightFunction::power(1), Criterion::Mse, Target::ExpLambda);
  CHECK(std::fabs(r.tuning.optimum - 0.952) <= 0.002);
  CHECK(r.pilot == Approx(1.0 / (std::accumulate(x.values.begin(), x.values.end(), 0.0) / 10)));
}

TEST_CASE("degenerate pilot stops the two-step procedure") {
  const std::vector<double> under{1, 2, 1, 2, 1, 2};
  CHECK_THROWS_AS(two_step(under, WeightFunction::geom_nb(0.5), Criterion::Variance, Target::NbNu), DegenerateError);
}
