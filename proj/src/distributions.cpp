#include "steinmm/distributions.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "steinmm/errors.hpp"
#include "steinmm/rng.hpp"

namespace steinmm {

namespace {

bool is_integer(double r) { return std::isfinite(r) && std::floor(r) == r; }

}  // namespace

ExpParams ExpParams::make(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw DomainError("Exp: lambda must be positive and finite");
  }
  return ExpParams{lambda};
}

IGParams IGParams::make(double mu, double lambda) {
  if (!(mu > 0.0) || !(lambda > 0.0) || !std::isfinite(mu) || !std::isfinite(lambda)) {
    throw DomainError("IG: mu and lambda must be positive and finite");
  }
  return IGParams{mu, lambda};
}

NBParams NBParams::make(double nu, double pi) {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError("NB: nu must be positive and finite");
  }
  if (!(pi > 0.0 && pi < 1.0)) {
    throw DomainError("NB: pi must lie in (0, 1)");
  }
  return NBParams{nu, pi};
}

NBParams NBParams::from_mean_size(double mean, double nu) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("NB: mean must be positive and finite");
  }
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw DomainError("NB: nu must be positive and finite");
  }
  return make(nu, nu / (nu + mean));
}

NBParams NBParams::from_mean_prob(double mean, double pi) {
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw DomainError("NB: mean must be positive and finite");
  }
  if (!(pi > 0.0 && pi < 1.0)) {
    throw DomainError("NB: pi must lie in (0, 1)");
  }
  return make(pi * mean / (1.0 - pi), pi);
}

std::string describe(const DistParams& params) {
  std::ostringstream out;
  std::visit(
      [&out](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExpParams>) {
          out << "Exp(lambda=" << p.lambda << ")";
        } else if constexpr (std::is_same_v<T, IGParams>) {
          out << "IG(mu=" << p.mu << ", lambda=" << p.lambda << ")";
        } else {
          out << "NB(nu=" << p.nu << ", pi=" << p.pi << ")";
        }
      },
      params);
  return out.str();
}

void require_positive_sample(std::span<const double> values, std::size_t min_size) {
  if (values.size() < min_size) {
    std::ostringstream msg;
    msg << "sample needs at least " << min_size << " observations, got " << values.size();
    throw DomainError(msg.str());
  }
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw DomainError("sample values must be strictly positive and finite");
    }
  }
}

void require_count_sample(std::span<const double> values, std::size_t min_size) {
  if (values.size() < min_size) {
    std::ostringstream msg;
    msg << "sample needs at least " << min_size << " observations, got " << values.size();
    throw DomainError(msg.str());
  }
  for (double v : values) {
    if (!(v >= 0.0) || !is_integer(v)) {
      throw DomainError("count sample values must be non-negative integers");
    }
  }
}

double density(const ExpParams& p, double x) {
  if (!(x > 0.0)) return 0.0;
  return p.lambda * std::exp(-p.lambda * x);
}

double density(const IGParams& p, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) return 0.0;
  const double dev = x - p.mu;
  const double log_pdf = 0.5 * std::log(p.lambda / (2.0 * std::numbers::pi)) - 1.5 * std::log(x) -
                         p.lambda * dev * dev / (2.0 * p.mu * p.mu * x);
  return std::exp(log_pdf);
}

double log_pmf(const NBParams& p, std::int64_t x) {
  const double xd = static_cast<double>(x);
  return numerics::log_gamma(p.nu + xd) - numerics::log_gamma(p.nu) - numerics::log_gamma(xd + 1.0) +
         xd * std::log1p(-p.pi) + p.nu * std::log(p.pi);
}

double density(const NBParams& p, double x) {
  if (!(x >= 0.0) || !is_integer(x)) return 0.0;
  return std::exp(log_pmf(p, static_cast<std::int64_t>(x)));
}

double ig_positive_moment(const IGParams& p, int order) {
  const double m = p.mu;
  const double q = p.mu / p.lambda;
  switch (order) {
    case 0:
      return 1.0;
    case 1:
      return m;
    case 2:
      return m * m * (1.0 + q);
    case 3:
      return m * m * m * (1.0 + 3.0 * q + 3.0 * q * q);
    case 4:
      return m * m * m * m * (1.0 + 6.0 * q + 15.0 * q * q + 15.0 * q * q * q);
    default:
      throw UnsupportedError("ig_positive_moment: closed form only for orders 0..4");
  }
}

double expectation(const ExpParams& p, const std::function<double(double)>& h,
                   const numerics::ToleranceConfig& cfg) {
  return numerics::integrate_halfline(
      [&](double x) {
        const double d = density(p, x);
        return d == 0.0 ? 0.0 : h(x) * d;
      },
      cfg, p.mean());
}

double expectation(const IGParams& p, const std::function<double(double)>& h,
                   const numerics::ToleranceConfig& cfg) {
  return numerics::integrate_halfline(
      [&](double x) {
        const double d = density(p, x);
        return d == 0.0 ? 0.0 : h(x) * d;
      },
      cfg, p.mean());
}

double expectation(const NBParams& p, const std::function<double(std::int64_t)>& h,
                   const numerics::ToleranceConfig& cfg) {
  return numerics::truncated_sum(
      [&](std::int64_t x) {
        const double pmf = std::exp(log_pmf(p, x));
        return pmf == 0.0 ? 0.0 : h(x) * pmf;
      },
      cfg);
}

double raw_moment(const ExpParams& p, double r, const numerics::ToleranceConfig&) {
  if (!(r > -1.0)) {
    throw DomainError("Exp raw moment E[X^r] exists only for r > -1");
  }
  return std::exp(numerics::log_gamma(r + 1.0) - r * std::log(p.lambda));
}

double raw_moment(const IGParams& p, double r, const numerics::ToleranceConfig& cfg) {
  if (!std::isfinite(r)) {
    throw DomainError("IG raw moment order must be finite");
  }
  if (is_integer(r) && r >= 0.0 && r <= 4.0) {
    return ig_positive_moment(p, static_cast<int>(r));
  }
  if (is_integer(r) && r < 0.0 && r >= -3.0) {
    // E[X^{-k}] = E[X^{k+1}] / μ^{2k+1}
    const int k = static_cast<int>(-r);
    return ig_positive_moment(p, k + 1) / std::pow(p.mu, 2 * k + 1);
  }
  return expectation(p, [r](double x) { return std::pow(x, r); }, cfg);
}

double raw_moment(const NBParams& p, double r, const numerics::ToleranceConfig&) {
  if (!(r >= 0.0) || !is_integer(r)) {
    throw DomainError("NB raw moment order must be a non-negative integer");
  }
  const int k = static_cast<int>(r);
  if (k > numerics::kStirlingMax) {
    throw DomainError("NB raw moment order exceeds the Stirling table (30)");
  }
  return nb_power_zmoment(p, k, 1.0);
}

double nb_pgf(const NBParams& p, double z) {
  const double denom = 1.0 - (1.0 - p.pi) * z;
  if (!(denom > 0.0)) {
    throw DomainError("NB pgf: requires (1-pi) z < 1");
  }
  return std::pow(p.pi / denom, p.nu);
}

double nb_factorial_zmoment(const NBParams& p, int k, double z) {
  if (k < 0) {
    throw DomainError("nb_factorial_zmoment: k must be non-negative");
  }
  if (!(z >= 0.0) || !std::isfinite(z)) {
    throw DomainError("nb_factorial_zmoment: z must be non-negative");
  }
  const double q = 1.0 - p.pi;
  const double denom = 1.0 - q * z;
  if (!(denom > 0.0)) {
    throw DomainError("nb_factorial_zmoment: requires (1-pi) z < 1");
  }
  // (ν+k−1)_(k) = ν (ν+1) ··· (ν+k−1)
  double rising = 1.0;
  for (int i = 0; i < k; ++i) rising *= p.nu + i;
  return std::pow(q * z / denom, k) * rising * nb_pgf(p, z);
}

double nb_power_zmoment(const NBParams& p, int k, double z) {
  if (k < 0 || k > numerics::kStirlingMax) {
    throw DomainError("nb_power_zmoment: k must lie in 0..30");
  }
  double total = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double s = numerics::stirling2(k, j);
    if (s != 0.0) total += s * nb_factorial_zmoment(p, j, z);
  }
  return total;
}

double draw(const ExpParams& p, Rng& rng) { return -std::log(rng.uniform_pos()) / p.lambda; }

double draw(const IGParams& p, Rng& rng) {
  // Michael, Schucany & Haas (1976): transformation with multiple roots.
  const double v = rng.normal();
  const double y = v * v;
  const double mu = p.mu;
  // smaller root μ + μ²y/(2λ) − (μ/2λ)√(4μλy + μ²y²), written without cancellation
  const double my = mu * y;
  const double x = mu - 2.0 * mu * my / (my + std::sqrt(my * my + 4.0 * mu * p.lambda * y));
  if (rng.uniform() <= mu / (mu + x)) return x;
  return mu * mu / x;
}

double draw(const NBParams& p, Rng& rng) {
  // Gamma–Poisson mixture; valid for real ν.
  std::gamma_distribution<double> gamma(p.nu, (1.0 - p.pi) / p.pi);
  const double rate = gamma(rng);
  if (rate <= 0.0) return 0.0;
  std::poisson_distribution<std::int64_t> poisson(rate);
  return static_cast<double>(poisson(rng));
}

namespace {

template <class Params>
Sample sample_impl(const Params& p, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be at least 1");
  Rng rng(seed);
  Sample s;
  s.values.reserve(n);
  for (std::size_t i = 0; i < n; ++i) s.values.push_back(draw(p, rng));
  return s;
}

}  // namespace

Sample sample(const ExpParams& p, std::size_t n, std::uint64_t seed) { return sample_impl(p, n, seed); }
Sample sample(const IGParams& p, std::size_t n, std::uint64_t seed) { return sample_impl(p, n, seed); }
Sample sample(const NBParams& p, std::size_t n, std::uint64_t seed) { return sample_impl(p, n, seed); }

}  // namespace steinmm
