#pragma once

#include <functional>

#include <Eigen/Dense>

#include "steinmm/distributions.hpp"
#include "steinmm/moments.hpp"
#include "steinmm/weights.hpp"

namespace steinmm {

/// Asymptotic variance and O(1/n) bias of an estimator at sample size n.
struct AsymptoticSummary {
  double variance = 0.0;  // already divided by n
  double bias = 0.0;
  double mse = 0.0;  // variance + bias²
  long n = 1;

  static AsymptoticSummary make(double variance, double bias, long n);
  double sd() const;
};

using CovMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct MomentOptions {
  MomentMethod method = MomentMethod::Auto;
  numerics::ToleranceConfig cfg{};
};

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const CovMatrix& sigma);

// ---- Exp: Z = (f′(X), f(X)) --------------------------------------------------
Vector exp_mean_z(const ExpParams& p, const WeightFunction& w, const MomentOptions& opt = {});
CovMatrix exp_cov(const ExpParams& p, const WeightFunction& w, const MomentOptions& opt = {});
double g_exp(const Vector& z);
AsymptoticSummary exp_asym(const ExpParams& p, const WeightFunction& w, long n,
                           const MomentOptions& opt = {});
/// f = x^a, a > 1/2.
AsymptoticSummary exp_power_closed(double lambda, double a, long n);
/// f = 1 − u^x, u ∈ (0, 1).
AsymptoticSummary exp_geom_closed(double lambda, double u, long n);

// ---- IG: Z = (X, f, Xf, X²f, X²f′) -------------------------------------------
Vector ig_mean_z(const IGParams& p, const WeightFunction& w, const MomentOptions& opt = {});
CovMatrix ig_cov(const IGParams& p, const WeightFunction& w, const MomentOptions& opt = {});
double g_ig(const Vector& z);
AsymptoticSummary ig_asym(const IGParams& p, const WeightFunction& w, long n,
                          const MomentOptions& opt = {});
AsymptoticSummary ig_mm_closed(double mu, double lambda, long n);
AsymptoticSummary ig_ml_closed(double mu, double lambda, long n);

// ---- NB: Z = (X, f(X+1), X f(X), X f(X+1)) -----------------------------------
Vector nb_mean_z(const NBParams& p, const WeightFunction& w, const MomentOptions& opt = {});
CovMatrix nb_cov(const NBParams& p, const WeightFunction& w, const MomentOptions& opt = {});
double g_nb_nu(const Vector& z);
double g_nb_pi(const Vector& z);
AsymptoticSummary nb_nu_asym(const NBParams& p, const WeightFunction& w, long n,
                             const MomentOptions& opt = {});
AsymptoticSummary nb_pi_asym(const NBParams& p, const WeightFunction& w, long n,
                             const MomentOptions& opt = {});

/// Second-order Delta method with central finite differences: variance
/// DΣDᵀ/n and bias (1/2n) Σ_ij H_ij σ_ij. Relative steps 1e-5 (gradient)
/// and 1e-4 (Hessian). Throws AccuracyError when g is not finite near mu_z.
using VectorMap = std::function<double(const Vector&)>;
AsymptoticSummary delta_oracle(const VectorMap& g, const Vector& mu_z, const CovMatrix& sigma, long n);

}  // namespace steinmm
