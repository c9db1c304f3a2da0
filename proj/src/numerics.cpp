#include "steinmm/numerics.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <algorithm>
#include <tuple>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "steinmm/errors.hpp"

namespace steinmm::numerics {

namespace {

bool is_gamma_pole(double z) { return z <= 0.0 && std::floor(z) == z; }

// ln|Γ(z)| and sign of Γ(z); z must not be a pole.
double log_abs_gamma(double z, int* sign) {
  return boost::math::lgamma(z, sign);
}

// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  int piece;  // 0: head [0, scale], 1: tail [scale, ∞)
};

struct PanelOrder {
  bool operator()(const Panel& a, const Panel& b) const { return a.error < b.error; }
};

constexpr int kHeadPower = 8;

}  // namespace

void ToleranceConfig::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("ToleranceConfig: abs_tol and rel_tol must be positive");
  }
  if (max_subdivisions < 1 || max_terms < 1) {
    throw DomainError("ToleranceConfig: max_subdivisions and max_terms must be at least 1");
  }
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be a positive finite number");
  }
  int sign = 1;
  return log_abs_gamma(x, &sign);
}

double gen_binom(double r, double s) {
  const double args[3] = {r + 1.0, s + 1.0, r - s + 1.0};
  for (double z : args) {
    if (!std::isfinite(z) || is_gamma_pole(z)) {
      std::ostringstream msg;
      msg << "gen_binom(" << r << ", " << s << "): Gamma pole at " << z;
      throw DomainError(msg.str());
    }
  }
  int s0 = 1, s1 = 1, s2 = 1;
  const double log_value =
      log_abs_gamma(args[0], &s0) - log_abs_gamma(args[1], &s1) - log_abs_gamma(args[2], &s2);
  return static_cast<double>(s0 * s1 * s2) * std::exp(log_value);
}

double stirling2(int k, int j) {
  __extension__ typedef unsigned __int128 u128;
  static const auto table = [] {
    std::array<std::array<u128, kStirlingMax + 1>, kStirlingMax + 1> t{};
    t[0][0] = 1;
    for (int n = 1; n <= kStirlingMax; ++n) {
      for (int m = 1; m <= n; ++m) {
        t[n][m] = static_cast<u128>(m) * t[n - 1][m] + t[n - 1][m - 1];
      }
    }
    return t;
  }();

  if (k < 0 || j < 0 || k > kStirlingMax) {
    throw DomainError("stirling2: requires 0 <= j and 0 <= k <= 30");
  }
  if (j > k) return 0.0;
  return static_cast<double>(table[k][j]);
}

double integrate_halfline(const Integrand& integrand, const ToleranceConfig& cfg, double scale) {
  cfg.validate();
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw DomainError("integrate_halfline: scale must be positive and finite");
  }

  // head: x = scale·w^p, dx = p·scale·w^(p−1) dw, w ∈ (0, 1]
  auto head = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double wp1 = std::pow(w, kHeadPower - 1);
    const double x = scale * wp1 * w;
    if (x <= 0.0) return 0.0;
    return integrand(x) * kHeadPower * scale * wp1;
  };
  // tail: x = scale/(1−t), dx = scale/(1−t)² dt, t ∈ [0, 1)
  auto tail = [&](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double x = scale / one_minus;
    if (!std::isfinite(x)) return 0.0;
    const double v = integrand(x);
    if (v == 0.0) return 0.0;
    return v * scale / (one_minus * one_minus);
  };

  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  auto eval_panel = [&](double lo, double hi, int piece) {
    double err = 0.0;
    const double v = piece == 0 ? GK::integrate(head, lo, hi, 0, 0.0, &err)
                                : GK::integrate(tail, lo, hi, 0, 0.0, &err);
    if (!std::isfinite(v) || !std::isfinite(err)) {
      throw AccuracyError("integrate_halfline: integrand is not finite on a panel",
                          std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity());
    }
    return Panel{lo, hi, v, err, piece};
  };

  std::vector<Panel> panels;
  constexpr int kInitial = 4;
  for (int piece = 0; piece < 2; ++piece) {
    for (int i = 0; i < kInitial; ++i) {
      panels.push_back(eval_panel(static_cast<double>(i) / kInitial,
                                  static_cast<double>(i + 1) / kInitial, piece));
    }
  }
  std::make_heap(panels.begin(), panels.end(), PanelOrder{});

  auto totals = [&panels] {
    CompensatedSum value, error;
    for (const Panel& p : panels) {
      value.add(p.value);
      error.add(p.error);
    }
    return std::pair{value.value(), error.value()};
  };
  auto converged = [&cfg](double value, double error) {
    return error <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(value));
  };

  auto [value, error] = totals();
  for (int split = 0; split < cfg.max_subdivisions && !converged(value, error); ++split) {
    std::pop_heap(panels.begin(), panels.end(), PanelOrder{});
    const Panel worst = panels.back();
    panels.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // cannot bisect further in double precision; freeze the panel
      panels.push_back(Panel{worst.lo, worst.hi, worst.value, 0.0, worst.piece});
      std::push_heap(panels.begin(), panels.end(), PanelOrder{});
    } else {
      for (const Panel& half : {eval_panel(worst.lo, mid, worst.piece),
                                eval_panel(mid, worst.hi, worst.piece)}) {
        panels.push_back(half);
        std::push_heap(panels.begin(), panels.end(), PanelOrder{});
      }
    }
    std::tie(value, error) = totals();
  }
  if (converged(value, error)) {
    return value;
  }
  std::ostringstream msg;
  msg << "integrate_halfline: tolerance not reached after " << cfg.max_subdivisions
      << " subdivisions (estimate " << value << ", error bound " << error << ")";
  throw AccuracyError(msg.str(), value, error);
}

double truncated_sum(const std::function<double(std::int64_t)>& term, const ToleranceConfig& cfg) {
  cfg.validate();
  CompensatedSum sum;
  double previous = std::numeric_limits<double>::infinity();
  for (std::int64_t x = 0; x < cfg.max_terms; ++x) {
    const double t = term(x);
    if (!std::isfinite(t)) {
      throw AccuracyError("truncated_sum: non-finite term", sum.value(),
                          std::numeric_limits<double>::infinity());
    }
    sum.add(t);
    const double mag = std::abs(t);
    const bool decreasing = mag <= previous;
    previous = mag;
    if (decreasing && mag < cfg.abs_tol && mag < cfg.rel_tol * std::abs(sum.value())) {
      return sum.value();
    }
  }
  std::ostringstream msg;
  msg << "truncated_sum: stopping rule not met within " << cfg.max_terms << " terms";
  throw AccuracyError(msg.str(), sum.value(), previous);
}

}  // namespace steinmm::numerics
