#include "steinmm/tuning.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "steinmm/errors.hpp"

namespace steinmm {

namespace {

constexpr double kInfeasible = std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949;  // (√5 − 1)/2

DistKind kind_of(const DistParams& params) {
  switch (params.index()) {
    case 0:
      return DistKind::Exp;
    case 1:
      return DistKind::IG;
    default:
      return DistKind::NB;
  }
}

void require_target(DistKind dist, Target target) {
  const bool ok = (dist == DistKind::Exp && target == Target::ExpLambda) ||
                  (dist == DistKind::IG && target == Target::IgLambda) ||
                  (dist == DistKind::NB && (target == Target::NbNu || target == Target::NbPi));
  if (!ok) {
    throw DomainError("target " + std::string(to_string(target)) + " does not belong to distribution " +
                      std::string(to_string(dist)));
  }
}

}  // namespace

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::Variance:
      return "variance";
    case Criterion::BiasAbs:
      return "bias";
    case Criterion::Mse:
      return "mse";
  }
  return "?";
}

Criterion parse_criterion(std::string_view text) {
  if (text == "variance") return Criterion::Variance;
  if (text == "bias") return Criterion::BiasAbs;
  if (text == "mse") return Criterion::Mse;
  throw ParseError("unknown criterion '" + std::string(text) + "'; expected variance | bias | mse");
}

Bracket default_bracket(const WeightFunction& family, DistKind dist, std::optional<IgBranch> branch) {
  switch (family.family()) {
    case WeightFamily::Power:
      if (dist == DistKind::Exp) return {0.5, 1.5};
      if (dist == DistKind::IG) {
        if (!branch) throw DomainError("IG power family needs a branch (below or above -1/2)");
        return *branch == IgBranch::BelowMinusHalf ? Bracket{-2.5, -0.5} : Bracket{-0.5, 0.8};
      }
      return {0.01, 1.5};
    case WeightFamily::GeomOneMinus:
    case WeightFamily::GeomNB:
      return {0.01, 0.999};
    case WeightFamily::ShiftedPower:
      return {-0.99, 1.5};
    default:
      throw DomainError("weight family " + family.spec() + " has no tunable parameter");
  }
}

AsymptoticSummary asymptotic_summary(const DistParams& params, Target target, const WeightFunction& w,
                                     long n, const MomentOptions& opt) {
  require_target(kind_of(params), target);
  if (const auto* e = std::get_if<ExpParams>(&params)) return exp_asym(*e, w, n, opt);
  if (const auto* g = std::get_if<IGParams>(&params)) return ig_asym(*g, w, n, opt);
  const auto& nb = std::get<NBParams>(params);
  return target == Target::NbNu ? nb_nu_asym(nb, w, n, opt) : nb_pi_asym(nb, w, n, opt);
}

double criterion_value(const AsymptoticSummary& s, Criterion criterion) {
  switch (criterion) {
    case Criterion::Variance:
      return s.variance;
    case Criterion::BiasAbs:
      return std::abs(s.bias);
    case Criterion::Mse:
      return s.mse;
  }
  return kInfeasible;
}

TuneResult optimize_weight(const TuneSpec& spec) {
  if (!spec.family.has_parameter()) {
    throw DomainError("weight family " + spec.family.spec() + " has no tunable parameter");
  }
  if (spec.grid_points < 3) throw DomainError("optimize_weight: grid_points must be at least 3");
  if (!(spec.tolerance > 0.0)) throw DomainError("optimize_weight: tolerance must be positive");
  const DistKind dist = kind_of(spec.params);
  require_target(dist, spec.target);

  const Bracket br = spec.bracket ? *spec.bracket : default_bracket(spec.family, dist, spec.branch);
  if (!(br.lo < br.hi) || !std::isfinite(br.lo) || !std::isfinite(br.hi)) {
    throw DomainError("optimize_weight: bracket must satisfy lo < hi");
  }
  if (dist == DistKind::IG && spec.family.family() == WeightFamily::Power && br.lo < -0.5 &&
      br.hi > -0.5) {
    throw DomainError("IG power bracket must not straddle the pole at a = -1/2");
  }

  TuneResult result;
  result.bracket = br;
  auto objective = [&](double param) {
    ++result.evaluations;
    try {
      const WeightFunction w = spec.family.with_parameter(param);
      if (!check_admissible(w, dist).ok) return kInfeasible;
      const double v =
          criterion_value(asymptotic_summary(spec.params, spec.target, w, spec.n, spec.moments), spec.criterion);
      return std::isfinite(v) ? v : kInfeasible;
    } catch (const std::exception&) {
      return kInfeasible;
    }
  };

  const int points = spec.grid_points;
  std::vector<double> xs(points), fs(points);
  for (int i = 0; i < points; ++i) {
    xs[i] = br.lo + (br.hi - br.lo) * i / (points - 1);
    fs[i] = objective(xs[i]);
  }
  int best = 0;
  for (int i = 1; i < points; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  if (!std::isfinite(fs[best])) {
    throw InfeasibleError("optimize_weight: criterion is infeasible on the whole bracket [" +
                          std::to_string(br.lo) + ", " + std::to_string(br.hi) + "]");
  }
  int local_minima = 0;
  for (int i = 0; i < points; ++i) {
    if (!std::isfinite(fs[i])) continue;
    const bool left = i == 0 || fs[i] < fs[i - 1];
    const bool right = i == points - 1 || fs[i] < fs[i + 1];
    if (left && right) ++local_minima;
  }
  result.multimodal = local_minima > 1;

  // golden-section search on the grid cell pair around the best point
  double a = xs[std::max(best - 1, 0)];
  double b = xs[std::min(best + 1, points - 1)];
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > spec.tolerance) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = objective(d);
    }
  }
  double x = 0.5 * (a + b);
  double fx = objective(x);
  if (fs[best] < fx) {
    x = xs[best];
    fx = fs[best];
  }
  result.optimum = x;
  result.value = fx;
  result.boundary = (x - br.lo) <= spec.tolerance || (br.hi - x) <= spec.tolerance;
  result.summary =
      asymptotic_summary(spec.params, spec.target, spec.family.with_parameter(x), spec.n, spec.moments);
  return result;
}

TwoStepResult two_step(std::span<const double> data, const WeightFunction& family, Criterion criterion,
                       Target target, const TwoStepOptions& options) {
  TwoStepResult out;
  TuneSpec spec;
  spec.family = family;
  spec.criterion = criterion;
  spec.target = target;
  spec.n = static_cast<long>(data.size());
  spec.bracket = options.bracket;
  spec.branch = options.branch;

  auto pilot_or_throw = [](auto&& compute) {
    try {
      return compute();
    } catch (const DegenerateError& e) {
      throw DegenerateError(std::string("two_step: pilot estimate failed, no tuning attempted: ") + e.what());
    }
  };

  switch (target) {
    case Target::ExpLambda: {
      out.pilot = pilot_or_throw([&] { return exp_mle(data); });
      out.pilot_mean = 1.0 / out.pilot;
      spec.params = ExpParams::make(out.pilot);
      out.tuning = optimize_weight(spec);
      out.estimate = stein_exp(data, family.with_parameter(out.tuning.optimum));
      break;
    }
    case Target::IgLambda: {
      out.pilot = pilot_or_throw([&] { return ig_ml(data); });
      out.pilot_mean = sample_mean(data);
      spec.params = IGParams::make(out.pilot_mean, out.pilot);
      out.tuning = optimize_weight(spec);
      out.estimate = ig_estimate(data, family.with_parameter(out.tuning.optimum)).lambda_hat;
      break;
    }
    case Target::NbNu: {
      out.pilot = pilot_or_throw([&] { return nb_mm_nu(data, options.pilot_divisor); });
      out.pilot_mean = sample_mean(data);
      spec.params = NBParams::from_mean_size(out.pilot_mean, out.pilot);
      out.tuning = optimize_weight(spec);
      out.estimate = nb_estimate_nu(data, family.with_parameter(out.tuning.optimum));
      break;
    }
    case Target::NbPi: {
      out.pilot = pilot_or_throw([&] { return nb_mm_pi(data, options.pilot_divisor); });
      out.pilot_mean = sample_mean(data);
      if (!(out.pilot > 0.0 && out.pilot < 1.0)) {
        throw DegenerateError("two_step: pilot estimate of pi is outside (0, 1), no tuning attempted");
      }
      spec.params = NBParams::from_mean_prob(out.pilot_mean, out.pilot);
      out.tuning = optimize_weight(spec);
      out.estimate = nb_estimate_pi(data, family.with_parameter(out.tuning.optimum));
      break;
    }
    case Target::IgMu:
      throw DomainError("two_step: the IG mean is estimated by the sample mean, nothing to tune");
  }
  return out;
}

}  // namespace steinmm
