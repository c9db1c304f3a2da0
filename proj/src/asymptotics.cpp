#include "steinmm/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "steinmm/errors.hpp"

namespace steinmm {

namespace {

void require_n(long n) {
  if (n < 1) throw DomainError("asymptotics: n must be at least 1");
}

void require_nondegenerate(double value, double scale, const char* name) {
  if (!std::isfinite(value) || std::abs(value) <= 1e-10 * scale) {
    throw DegenerateError(std::string(name) + " vanishes, so the estimator is degenerate");
  }
}

double fd_step(double x, double rel) { return rel * std::max(std::abs(x), 1e-3); }

}  // namespace

AsymptoticSummary AsymptoticSummary::make(double variance, double bias, long n) {
  return AsymptoticSummary{variance, bias, variance + bias * bias, n};
}

double AsymptoticSummary::sd() const { return std::sqrt(variance); }

double min_eigenvalue(const CovMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<CovMatrix> solver(sigma, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

// ---- Exp ---------------------------------------------------------------------

Vector exp_mean_z(const ExpParams& p, const WeightFunction& w, const MomentOptions& opt) {
  const double m010 = mu_f(p, w, {0, 1, 0}, opt.method, opt.cfg);
  Vector z(2);
  z << p.lambda * m010, m010;
  return z;
}

CovMatrix exp_cov(const ExpParams& p, const WeightFunction& w, const MomentOptions& opt) {
  const double lam = p.lambda;
  const double m010 = mu_f(p, w, {0, 1, 0}, opt.method, opt.cfg);
  const double m002 = mu_f(p, w, {0, 0, 2}, opt.method, opt.cfg);
  const double m020 = mu_f(p, w, {0, 2, 0}, opt.method, opt.cfg);
  const double s11 = m002 - lam * lam * m010 * m010;
  const double s22 = m020 - m010 * m010;
  const double s12 = 0.5 * lam * (s22 - m010 * m010);
  CovMatrix s(2, 2);
  s << s11, s12, s12, s22;
  return s;
}

double g_exp(const Vector& z) { return z(0) / z(1); }

AsymptoticSummary exp_asym(const ExpParams& p, const WeightFunction& w, long n,
                           const MomentOptions& opt) {
  require_n(n);
  const double m010 = mu_f(p, w, {0, 1, 0}, opt.method, opt.cfg);
  const double m002 = mu_f(p, w, {0, 0, 2}, opt.method, opt.cfg);
  const double m020 = mu_f(p, w, {0, 2, 0}, opt.method, opt.cfg);
  require_nondegenerate(m010, 1.0, "mu_f(0,1,0)");
  const double nd = static_cast<double>(n);
  const double variance = m002 / (nd * m010 * m010);
  const double bias = p.lambda * m020 / (2.0 * nd * m010 * m010);
  return AsymptoticSummary::make(variance, bias, n);
}

AsymptoticSummary exp_power_closed(double lambda, double a, long n) {
  require_n(n);
  ExpParams::make(lambda);
  if (!(a > 0.5)) throw DomainError("exp_power_closed: requires a > 1/2");
  const double nd = static_cast<double>(n);
  const double variance = lambda * lambda / nd * numerics::gen_binom(2.0 * (a - 1.0), a - 1.0);
  const double bias = lambda / (2.0 * nd) * numerics::gen_binom(2.0 * a, a);
  return AsymptoticSummary::make(variance, bias, n);
}

AsymptoticSummary exp_geom_closed(double lambda, double u, long n) {
  require_n(n);
  ExpParams::make(lambda);
  if (!(u > 0.0 && u < 1.0)) throw DomainError("exp_geom_closed: requires u in (0, 1)");
  const double nd = static_cast<double>(n);
  const double shifted = lambda - std::log(u);
  const double variance = lambda / nd * shifted * shifted / (lambda - 2.0 * std::log(u));
  return AsymptoticSummary::make(variance, variance / shifted, n);
}

// ---- IG ----------------------------------------------------------------------

namespace {

// Every μ_f(k,l,m) appearing in the IG covariance and bias expressions.
struct IgMoments {
  double m010, m020, m110, m120, m210, m201, m211, m220, m301, m310, m311, m320, m402, m411,
      m420;

  IgMoments(const IGParams& p, const WeightFunction& w, const MomentOptions& opt) {
    auto m = [&](int k, int l, int j) { return mu_f(p, w, {k, l, j}, opt.method, opt.cfg); };
    m010 = m(0, 1, 0);
    m020 = m(0, 2, 0);
    m110 = m(1, 1, 0);
    m120 = m(1, 2, 0);
    m210 = m(2, 1, 0);
    m201 = m(2, 0, 1);
    m211 = m(2, 1, 1);
    m220 = m(2, 2, 0);
    m301 = m(3, 0, 1);
    m310 = m(3, 1, 0);
    m311 = m(3, 1, 1);
    m320 = m(3, 2, 0);
    m402 = m(4, 0, 2);
    m411 = m(4, 1, 1);
    m420 = m(4, 2, 0);
  }
};

}  // namespace

Vector ig_mean_z(const IGParams& p, const WeightFunction& w, const MomentOptions& opt) {
  auto m = [&](int k, int l, int j) { return mu_f(p, w, {k, l, j}, opt.method, opt.cfg); };
  Vector z(5);
  z << p.mu, m(0, 1, 0), m(1, 1, 0), m(2, 1, 0), m(2, 0, 1);
  return z;
}

CovMatrix ig_cov(const IGParams& p, const WeightFunction& w, const MomentOptions& opt) {
  const IgMoments t(p, w, opt);
  const double mu = p.mu;
  CovMatrix s(5, 5);
  s(0, 0) = mu * mu * mu / p.lambda;
  s(0, 1) = t.m110 - mu * t.m010;
  s(0, 2) = t.m210 - mu * t.m110;
  s(0, 3) = t.m310 - mu * t.m210;
  s(0, 4) = t.m301 - mu * t.m201;
  s(1, 1) = t.m020 - t.m010 * t.m010;
  s(1, 2) = t.m120 - t.m010 * t.m110;
  s(1, 3) = t.m220 - t.m010 * t.m210;
  s(1, 4) = t.m211 - t.m010 * t.m201;
  s(2, 2) = t.m220 - t.m110 * t.m110;
  s(2, 3) = t.m320 - t.m110 * t.m210;
  s(2, 4) = t.m311 - t.m110 * t.m201;
  s(3, 3) = t.m420 - t.m210 * t.m210;
  s(3, 4) = t.m411 - t.m210 * t.m201;
  s(4, 4) = t.m402 - t.m201 * t.m201;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < i; ++j) s(i, j) = s(j, i);
  }
  return s;
}

double g_ig(const Vector& z) {
  const double x1sq = z(0) * z(0);
  return x1sq * (2.0 * z(4) + z(2)) / (z(3) - x1sq * z(1));
}

AsymptoticSummary ig_asym(const IGParams& p, const WeightFunction& w, long n,
                          const MomentOptions& opt) {
  require_n(n);
  const IgMoments t(p, w, opt);
  const double mu = p.mu;
  const double lam = p.lambda;
  const double mu2 = mu * mu;
  const double mu3 = mu2 * mu;
  const double mu5 = mu3 * mu2;

  const double theta = t.m210 - mu2 * t.m010;
  require_nondegenerate(theta, std::abs(t.m210) + mu2 * std::abs(t.m010), "theta_f");
  const double th2 = theta * theta;
  const double th3 = th2 * theta;

  // variance, first bracket
  const double v1 = mu2 * mu2 / th2 *
                    (t.m220 - t.m110 * (lam * theta / mu2 + 2.0 * t.m201) + 4.0 * t.m311 +
                     4.0 * t.m402 - 4.0 * t.m201 * t.m201);
  // variance, second bracket
  const double v2 = 2.0 * lam * mu / th2 *
                    (mu3 * (t.m120 + 2.0 * t.m211 - lam * theta / mu2 * t.m010) -
                     mu * (t.m320 + 2.0 * t.m411) +
                     t.m210 * (4.0 * t.m210 + 4.0 * t.m301 - lam * theta / mu));
  // variance, third bracket
  const double v3 = lam * lam / (mu * th2) *
                    (mu5 * t.m020 + mu3 * t.m010 * (theta + t.m210) - 2.0 * mu3 * t.m220 +
                     4.0 * t.m210 * (mu2 * t.m110 - mu3 * t.m010 - t.m310) +
                     mu * (3.0 * t.m210 * t.m210 + t.m420));

  // bias, first bracket
  const double b1 = 1.0 / (mu * th2) *
                    (mu2 * t.m210 * (t.m210 + 3.0 * mu2 * t.m010) +
                     lam * (mu5 * t.m020 + mu * t.m420 - 2.0 * t.m310 * t.m210 +
                            4.0 * mu2 * t.m110 * t.m210 - 2.0 * mu3 * t.m220));
  // bias, second bracket
  const double shared = mu3 * (t.m120 + 2.0 * t.m211);
  const double b2 = mu / th3 *
                    (t.m210 * (2.0 * t.m210 * t.m210 - mu * t.m320 + 4.0 * t.m210 * t.m301 -
                               2.0 * mu * t.m411 + shared) -
                     mu2 * t.m010 *
                         (2.0 * t.m310 * (2.0 * t.m201 + t.m110) + 2.0 * t.m210 * t.m210 +
                          4.0 * t.m210 * t.m301 + shared - mu * (t.m320 + 2.0 * t.m411)));

  const double nd = static_cast<double>(n);
  return AsymptoticSummary::make((v1 + v2 + v3) / nd, (b1 + b2) / nd, n);
}

AsymptoticSummary ig_mm_closed(double mu, double lambda, long n) {
  require_n(n);
  IGParams::make(mu, lambda);
  const double nd = static_cast<double>(n);
  return AsymptoticSummary::make(2.0 / nd * lambda * (lambda + 3.0 * mu), 3.0 / nd * (lambda + 3.0 * mu), n);
}

AsymptoticSummary ig_ml_closed(double mu, double lambda, long n) {
  require_n(n);
  IGParams::make(mu, lambda);
  const double nd = static_cast<double>(n);
  return AsymptoticSummary::make(2.0 / nd * lambda * lambda, 3.0 / nd * lambda, n);
}

// ---- NB ----------------------------------------------------------------------

namespace {

// Every μ̃_f(k,l,m) appearing in the NB covariance and bias expressions.
struct NbMoments {
  double t001, t002, t101, t102, t110, t111, t201, t202, t210, t211, t220;

  NbMoments(const NBParams& p, const WeightFunction& w, const MomentOptions& opt) {
    auto m = [&](int k, int l, int j) { return mu_tilde(p, w, {k, l, j}, opt.method, opt.cfg); };
    t001 = m(0, 0, 1);
    t002 = m(0, 0, 2);
    t101 = m(1, 0, 1);
    t102 = m(1, 0, 2);
    t110 = m(1, 1, 0);
    t111 = m(1, 1, 1);
    t201 = m(2, 0, 1);
    t202 = m(2, 0, 2);
    t210 = m(2, 1, 0);
    t211 = m(2, 1, 1);
    t220 = m(2, 2, 0);
  }
};

}  // namespace

Vector nb_mean_z(const NBParams& p, const WeightFunction& w, const MomentOptions& opt) {
  auto m = [&](int k, int l, int j) { return mu_tilde(p, w, {k, l, j}, opt.method, opt.cfg); };
  Vector z(4);
  z << p.mean(), m(0, 0, 1), m(1, 1, 0), m(1, 0, 1);
  return z;
}

CovMatrix nb_cov(const NBParams& p, const WeightFunction& w, const MomentOptions& opt) {
  const NbMoments t(p, w, opt);
  const double mu = p.mean();
  CovMatrix s(4, 4);
  s(0, 0) = p.variance();
  s(0, 1) = t.t101 - mu * t.t001;
  s(0, 2) = t.t210 - mu * t.t110;
  s(0, 3) = t.t201 - mu * t.t101;
  s(1, 1) = t.t002 - t.t001 * t.t001;
  s(1, 2) = t.t111 - t.t001 * t.t110;
  s(1, 3) = t.t102 - t.t001 * t.t101;
  s(2, 2) = t.t220 - t.t110 * t.t110;
  s(2, 3) = t.t211 - t.t110 * t.t101;
  s(3, 3) = t.t202 - t.t101 * t.t101;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < i; ++j) s(i, j) = s(j, i);
  }
  return s;
}

double g_nb_nu(const Vector& z) { return z(0) * (z(3) - z(2)) / (z(2) - z(0) * z(1)); }

double g_nb_pi(const Vector& z) { return (z(3) - z(2)) / (z(3) - z(0) * z(1)); }

AsymptoticSummary nb_nu_asym(const NBParams& p, const WeightFunction& w, long n,
                             const MomentOptions& opt) {
  require_n(n);
  const NbMoments t(p, w, opt);
  const double mu = p.mean();
  const double s2 = p.variance();
  const double mu2 = mu * mu;
  const double mu3 = mu2 * mu;
  const double mu4 = mu3 * mu;

  const double eta = t.t110 - mu * t.t001;
  require_nondegenerate(eta, std::abs(t.t110) + mu * std::abs(t.t001), "eta_1");
  const double d = t.t101 - t.t110;

  const double var_bracket =
      mu4 * (t.t001 * (t.t001 * (t.t202 - 2.0 * t.t211 + t.t220) - 2.0 * d * (t.t102 - t.t111)) +
             t.t002 * d * d) +
      2.0 * mu3 *
          (t.t001 * t.t101 * (t.t211 - t.t220) -
           t.t110 * (t.t001 * (t.t202 - t.t211) + t.t102 * t.t110) - t.t101 * t.t101 * t.t111 +
           t.t101 * t.t110 * (t.t102 + t.t111)) +
      mu2 * (t.t110 * (2.0 * t.t101 *
                           (-t.t001 * t.t201 + t.t001 * t.t210 + t.t110 * t.t110 - t.t211) +
                       t.t110 * (2.0 * t.t001 * t.t201 - 2.0 * t.t001 * t.t210 + t.t202) +
                       2.0 * t.t101 * t.t101 * t.t101 - 4.0 * t.t101 * t.t101 * t.t110) +
             t.t101 * t.t101 * t.t220) -
      2.0 * mu * t.t110 * d * (t.t101 * t.t210 - t.t110 * t.t201) + t.t110 * t.t110 * s2 * d * d;

  const double bias_bracket =
      mu3 * (t.t001 * (t.t102 - t.t111) + t.t002 * (t.t110 - t.t101)) -
      mu2 * (t.t001 * (t.t211 - t.t220) - 2.0 * t.t101 * t.t111 + t.t110 * (t.t102 + t.t111)) +
      mu * (t.t101 * (t.t001 * t.t210 + 2.0 * t.t110 * t.t110 - t.t220) +
            t.t110 * (t.t001 * t.t201 - 2.0 * t.t001 * t.t210 + t.t211) -
            2.0 * t.t101 * t.t101 * t.t110) +
      t.t110 * (t.t001 * s2 * (t.t110 - t.t101) + t.t101 * t.t210 - t.t110 * t.t201);

  const double nd = static_cast<double>(n);
  const double eta2 = eta * eta;
  return AsymptoticSummary::make(var_bracket / (eta2 * eta2 * nd), -bias_bracket / (eta2 * eta * nd), n);
}

AsymptoticSummary nb_pi_asym(const NBParams& p, const WeightFunction& w, long n,
                             const MomentOptions& opt) {
  require_n(n);
  const NbMoments t(p, w, opt);
  const double mu = p.mean();
  const double s2 = p.variance();
  const double mu2 = mu * mu;

  const double eta = t.t101 - mu * t.t001;
  require_nondegenerate(eta, std::abs(t.t101) + mu * std::abs(t.t001), "eta_2");
  const double d = t.t101 - t.t110;

  const double var_bracket =
      mu2 * (t.t001 * (t.t001 * (t.t202 - 2.0 * t.t211 + t.t220) - 2.0 * d * (t.t102 - t.t111)) +
             t.t002 * d * d) -
      2.0 * mu *
          (t.t001 * t.t001 * d * (t.t201 - t.t210) -
           t.t001 * (t.t101 * t.t101 * t.t101 - 2.0 * t.t101 * t.t101 * t.t110 +
                     t.t101 * (t.t110 * t.t110 + t.t211 - t.t220) + t.t110 * (t.t211 - t.t202)) +
           d * (t.t101 * t.t111 - t.t102 * t.t110)) +
      t.t001 * t.t001 * s2 * d * d + t.t101 * t.t101 * t.t220 -
      2.0 * t.t001 * d * (t.t101 * t.t210 - t.t110 * t.t201) - 2.0 * t.t101 * t.t110 * t.t211 +
      t.t110 * t.t110 * t.t202;

  const double bias_bracket =
      mu2 * (t.t001 * (t.t102 - t.t111) + t.t002 * (t.t110 - t.t101)) +
      mu * (t.t001 * t.t001 * (t.t201 - t.t210) +
            t.t001 * (t.t101 * (t.t110 - t.t101) - t.t202 + t.t211) +
            t.t101 * (t.t102 + t.t111) - 2.0 * t.t102 * t.t110) +
      t.t110 * (t.t001 * t.t001 * s2 - 2.0 * t.t001 * t.t201 + t.t202) +
      t.t001 * t.t101 * (-t.t001 * s2 + t.t201 + t.t210) - t.t101 * t.t101 * t.t101 +
      t.t101 * t.t101 * t.t110 - t.t101 * t.t211;

  const double nd = static_cast<double>(n);
  const double eta2 = eta * eta;
  return AsymptoticSummary::make(var_bracket / (eta2 * eta2 * nd), -bias_bracket / (eta2 * eta * nd), n);
}

// ---- Delta-method oracle -----------------------------------------------------

AsymptoticSummary delta_oracle(const VectorMap& g, const Vector& mu_z, const CovMatrix& sigma, long n) {
  require_n(n);
  const Eigen::Index dim = mu_z.size();
  if (sigma.rows() != dim || sigma.cols() != dim) {
    throw DomainError("delta_oracle: covariance dimension does not match the mean vector");
  }
  auto eval = [&g](const Vector& x) {
    const double v = g(x);
    if (!std::isfinite(v)) {
      throw AccuracyError("delta_oracle: g is not finite near the expansion point",
                          std::numeric_limits<double>::quiet_NaN(),
                          std::numeric_limits<double>::infinity());
    }
    return v;
  };

  const double g0 = eval(mu_z);
  Vector grad(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double h = fd_step(mu_z(i), 1e-5);
    Vector up = mu_z, down = mu_z;
    up(i) += h;
    down(i) -= h;
    grad(i) = (eval(up) - eval(down)) / (2.0 * h);
  }

  // Central second differences at relative step `rel`.
  auto hessian = [&](double rel) {
    Eigen::MatrixXd hess(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double hi = fd_step(mu_z(i), rel);
      Vector up = mu_z, down = mu_z;
      up(i) += hi;
      down(i) -= hi;
      hess(i, i) = (eval(up) - 2.0 * g0 + eval(down)) / (hi * hi);
      for (Eigen::Index j = 0; j < i; ++j) {
        const double hj = fd_step(mu_z(j), rel);
        Vector pp = mu_z, pm = mu_z, mp = mu_z, mm = mu_z;
        pp(i) += hi;
        pp(j) += hj;
        pm(i) += hi;
        pm(j) -= hj;
        mp(i) -= hi;
        mp(j) += hj;
        mm(i) -= hi;
        mm(j) -= hj;
        hess(i, j) = (eval(pp) - eval(pm) - eval(mp) + eval(mm)) / (4.0 * hi * hj);
        hess(j, i) = hess(i, j);
      }
    }
    return hess;
  };
  // One Richardson step cancels the O(h²) truncation term, which otherwise
  // dominates when the bias is a small difference of large Hessian terms.
  const Eigen::MatrixXd hess = (4.0 * hessian(0.5e-4) - hessian(1e-4)) / 3.0;

  const double nd = static_cast<double>(n);
  const double variance = grad.dot(sigma * grad) / nd;
  const double bias = 0.5 * (hess.cwiseProduct(sigma)).sum() / nd;
  return AsymptoticSummary::make(variance, bias, n);
}

}  // namespace steinmm
