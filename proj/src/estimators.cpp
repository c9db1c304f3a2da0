#include "steinmm/estimators.hpp"

#include <cmath>
#include <vector>

#include "steinmm/errors.hpp"
#include "steinmm/kernels.hpp"

namespace steinmm {

namespace {

constexpr double kBoundaryTol = 1e-12;

void require_admissible(const WeightFunction& w, DistKind dist) {
  const Admissibility adm = check_admissible(w, dist);
  if (!adm.ok) {
    throw DomainError("weight " + w.spec() + " is not admissible for " + std::string(to_string(dist)) +
                      ": " + adm.reason);
  }
}

void require_usable(double denominator, const char* what) {
  if (denominator == 0.0 || !std::isfinite(denominator)) {
    throw DegenerateError(std::string(what) + ": degenerate denominator (zero or non-finite)");
  }
}

void require_positive_estimate(double value, const char* what) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw DegenerateError(std::string(what) + ": estimate is not a positive finite number");
  }
}

EstimateResult make_result(double value, Target target, const WeightFunction& w, std::size_t n,
                           double denominator) {
  EstimateResult r;
  r.value = value;
  r.target = target;
  r.weight = w;
  r.n = n;
  r.denominator = denominator;
  r.unchecked = w.unchecked();
  return r;
}

// Column vectors for the NB estimators: X, f(X), f(X+1), Δf(X).
struct CountColumns {
  std::vector<double> f;
  std::vector<double> f_next;
  std::vector<double> delta;
};

CountColumns count_columns(std::span<const double> data, const WeightFunction& w) {
  CountColumns c;
  c.f.reserve(data.size());
  c.f_next.reserve(data.size());
  c.delta.reserve(data.size());
  for (double x : data) {
    c.f.push_back(w.eval(x));
    c.f_next.push_back(w.eval(x + 1.0));
    c.delta.push_back(w.diff(x));
  }
  return c;
}

}  // namespace

std::string_view to_string(Target target) {
  switch (target) {
    case Target::ExpLambda:
      return "exp_lambda";
    case Target::IgMu:
      return "ig_mu";
    case Target::IgLambda:
      return "ig_lambda";
    case Target::NbNu:
      return "nb_nu";
    case Target::NbPi:
      return "nb_pi";
  }
  return "?";
}

EstimateResult stein_exp(std::span<const double> data, const WeightFunction& w) {
  require_positive_sample(data);
  require_admissible(w, DistKind::Exp);
  std::vector<double> f, fp;
  f.reserve(data.size());
  fp.reserve(data.size());
  for (double x : data) {
    f.push_back(w.eval(x));
    fp.push_back(w.deriv(x));
  }
  const double n = static_cast<double>(data.size());
  const double mean_f = kernels::sum(f) / n;
  const double mean_fp = kernels::sum(fp) / n;
  require_usable(mean_f, "stein_exp");
  const double value = mean_fp / mean_f;
  require_positive_estimate(value, "stein_exp");
  return make_result(value, Target::ExpLambda, w, data.size(), mean_f);
}

IgEstimate ig_estimate(std::span<const double> data, const WeightFunction& w) {
  require_positive_sample(data);
  require_admissible(w, DistKind::IG);
  std::vector<double> f, fp;
  f.reserve(data.size());
  fp.reserve(data.size());
  for (double x : data) {
    f.push_back(w.eval(x));
    fp.push_back(w.deriv(x));
  }
  const double n = static_cast<double>(data.size());
  const double xbar = kernels::sum(data) / n;
  const double xbar2 = xbar * xbar;
  const double mean_f = kernels::sum(f) / n;
  const double mean_xf = kernels::dot(data, f) / n;
  const double mean_x2f = kernels::dot3(data, data, f) / n;
  const double mean_x2fp = kernels::dot3(data, data, fp) / n;
  const double denominator = mean_x2f - xbar2 * mean_f;
  require_usable(denominator, "ig_estimate");
  const double value = xbar2 * (2.0 * mean_x2fp + mean_xf) / denominator;
  require_positive_estimate(value, "ig_estimate");
  return IgEstimate{xbar, make_result(value, Target::IgLambda, w, data.size(), denominator)};
}

EstimateResult nb_estimate_nu(std::span<const double> data, const WeightFunction& w) {
  require_count_sample(data);
  require_admissible(w, DistKind::NB);
  const CountColumns c = count_columns(data, w);
  const double n = static_cast<double>(data.size());
  const double xbar = kernels::sum(data) / n;
  const double mean_xdelta = kernels::dot(data, c.delta) / n;
  const double mean_xf = kernels::dot(data, c.f) / n;
  const double mean_fnext = kernels::sum(c.f_next) / n;
  const double denominator = mean_xf - xbar * mean_fnext;
  if (w.family() == WeightFamily::Identity && !(denominator > 0.0)) {
    throw DegenerateError("nb_estimate_nu: sample is not overdispersed (S^2 <= mean)");
  }
  require_usable(denominator, "nb_estimate_nu");
  const double value = xbar * mean_xdelta / denominator;
  require_positive_estimate(value, "nb_estimate_nu");
  return make_result(value, Target::NbNu, w, data.size(), denominator);
}

EstimateResult nb_estimate_pi(std::span<const double> data, const WeightFunction& w) {
  require_count_sample(data);
  require_admissible(w, DistKind::NB);
  const CountColumns c = count_columns(data, w);
  const double n = static_cast<double>(data.size());
  const double xbar = kernels::sum(data) / n;
  const double mean_xdelta = kernels::dot(data, c.delta) / n;
  const double mean_xfnext = kernels::dot(data, c.f_next) / n;
  const double mean_fnext = kernels::sum(c.f_next) / n;
  const double denominator = mean_xfnext - xbar * mean_fnext;
  require_usable(denominator, "nb_estimate_pi");
  const double value = mean_xdelta / denominator;
  require_positive_estimate(value, "nb_estimate_pi");
  EstimateResult r = make_result(value, Target::NbPi, w, data.size(), denominator);
  if (std::abs(value - 1.0) <= kBoundaryTol) {
    r.boundary = true;
  } else if (value > 1.0) {
    throw DegenerateError("nb_estimate_pi: estimate exceeds 1 (sample is underdispersed)");
  }
  return r;
}

double sample_mean(std::span<const double> data) {
  if (data.empty()) throw DomainError("sample_mean needs at least 1 observation");
  return kernels::sum(data) / static_cast<double>(data.size());
}

double sample_variance(std::span<const double> data, VarianceDivisor divisor) {
  if (data.size() < 2) throw DomainError("sample_variance needs at least 2 observations");
  const double n = static_cast<double>(data.size());
  const double mean = kernels::sum(data) / n;
  // two-pass form avoids cancellation in Σx² − n x̄²
  double ss = 0.0;
  for (double x : data) ss += (x - mean) * (x - mean);
  return ss / (divisor == VarianceDivisor::N ? n : n - 1.0);
}

double exp_mle(std::span<const double> data) {
  require_positive_sample(data);
  return static_cast<double>(data.size()) / kernels::sum(data);
}

double ig_mm(std::span<const double> data) {
  require_positive_sample(data);
  const double xbar = kernels::sum(data) / static_cast<double>(data.size());
  const double s2 = sample_variance(data);
  require_usable(s2, "ig_mm");
  return xbar * xbar * xbar / s2;
}

double ig_ml(std::span<const double> data) {
  require_positive_sample(data);
  const double n = static_cast<double>(data.size());
  const double xbar = kernels::sum(data) / n;
  double inv = 0.0;
  for (double x : data) inv += 1.0 / x;
  const double denominator = xbar * (inv / n) - 1.0;
  require_usable(denominator, "ig_ml");
  return xbar / denominator;
}

double nb_mm_nu(std::span<const double> data, VarianceDivisor divisor) {
  require_count_sample(data);
  const double xbar = kernels::sum(data) / static_cast<double>(data.size());
  const double s2 = sample_variance(data, divisor);
  if (!(s2 > xbar)) {
    throw DegenerateError("nb_mm_nu: sample is not overdispersed (S^2 <= mean)");
  }
  return xbar * xbar / (s2 - xbar);
}

double nb_mm_pi(std::span<const double> data, VarianceDivisor divisor) {
  require_count_sample(data);
  const double xbar = kernels::sum(data) / static_cast<double>(data.size());
  const double s2 = sample_variance(data, divisor);
  require_usable(s2, "nb_mm_pi");
  return xbar / s2;
}

}  // namespace steinmm
