#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "steinmm/asymptotics.hpp"
#include "steinmm/errors.hpp"
#include "steinmm/estimators.hpp"
#include "steinmm/io.hpp"
#include "steinmm/rng.hpp"

using namespace steinmm;
using doctest::Approx;

namespace {

Sample fixture(const char* name) { return read_dataset(std::string(STEINMM_TEST_DATA_DIR) + "/" + name); }

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("exp estimator oracles") {
  const std::vector<double> c(7, 2.5);
  CHECK(stein_exp(c, WeightFunction::identity()).value == Approx(0.4).epsilon(1e-15));
  const std::vector<double> d{0.5, 1.5};
  CHECK(stein_exp(d, WeightFunction::power(2.0)).value == Approx(1.6).epsilon(1e-14));
  const EstimateResult r = stein_exp(d, WeightFunction::identity());
  CHECK(r.n == 2);
  CHECK(r.target == Target::ExpLambda);
  CHECK(r.denominator == Approx(1.0));
  CHECK_FALSE(r.unchecked);
}

TEST_CASE("exp estimator consistency on a large sample") {
  const Sample s = sample(ExpParams::make(1.0), 100000, 2024);
  for (const WeightFunction& w :
       {WeightFunction::identity(), WeightFunction::power(0.9), WeightFunction::one_plus_log()}) {
    const double sd = exp_asym(ExpParams::make(1.0), w, 100000).sd();
    CHECK(std::fabs(stein_exp(s.view(), w).value - 1.0) < 3 * sd);
  }
}

TEST_CASE("estimators reject inadmissible weights and bad data") {
  const std::vector<double> d{0.5, 1.5, 2.0};
  CHECK_THROWS_AS(stein_exp(d, WeightFunction::constant()), DomainError);
  CHECK_THROWS_AS(ig_estimate(d, WeightFunction::power(-0.5)), DomainError);
  CHECK_THROWS_AS(nb_estimate_nu(d, WeightFunction::identity()), DomainError);
  const std::vector<double> neg{-1.0, 2.0};
  CHECK_THROWS_AS(stein_exp(neg, WeightFunction::identity()), DomainError);
  const std::vector<double> single{1.0};
  CHECK_THROWS_AS(stein_exp(single, WeightFunction::identity()), DomainError);
}

TEST_CASE("degenerate denominators raise typed errors") {
  const std::vector<double> equal(5, 1.3);
  CHECK_THROWS_AS(ig_estimate(equal, WeightFunction::constant()), DegenerateError);
  const std::vector<double> counts{1, 2, 3, 2, 1, 2};  // underdispersed
  try {
    nb_estimate_nu(counts, WeightFunction::identity());
    FAIL("expected an error");
  } catch (const DegenerateError& e) {
    CHECK(std::string(e.what()).find("overdispersed") != std::string::npos);
  }
  const std::vector<double> zeros(6, 0.0);
  CHECK_THROWS_AS(nb_estimate_pi(zeros, WeightFunction::identity()), DegenerateError);
}

TEST_CASE("nb pi on the equidispersion boundary") {
  // x̄ = 1 and S² = 1 with the 1/n divisor
  const std::vector<double> d{0, 2, 0, 2, 0, 2};
  REQUIRE(sample_variance(d) == Approx(sample_mean(d)));
  const EstimateResult r = nb_estimate_pi(d, WeightFunction::identity());
  CHECK(r.value == Approx(1.0).epsilon(1e-12));
  CHECK(r.boundary);
  const std::vector<double> under{1, 2, 1, 2, 1, 2};
  CHECK_THROWS_AS(nb_estimate_pi(under, WeightFunction::identity()), DegenerateError);
}

TEST_CASE("runoff fixture estimates") {
  const Sample runoff = fixture("runoff.csv");
  REQUIRE(runoff.size() == 25);
  const IgEstimate ml = ig_estimate(runoff.view(), WeightFunction::reciprocal());
  CHECK(ml.mu_hat == Approx(0.803).epsilon(0.0005 / 0.803));
  CHECK(std::round(ml.lambda_hat.value * 1000) / 1000 == Approx(1.440));
  CHECK(std::round(ig_estimate(runoff.view(), WeightFunction::constant()).lambda_hat.value * 1000) / 1000 ==
        Approx(1.512));
  CHECK(std::round(ig_estimate(runoff.view(), WeightFunction::power(0.5)).lambda_hat.value * 1000) / 1000 ==
        Approx(1.529));
}

TEST_CASE("mites fixture estimates") {
  const Sample mites = fixture("mites.csv");
  REQUIRE(mites.size() == 150);
  CHECK(sample_mean(mites.view()) == Approx(1.147).epsilon(0.0005 / 1.147));
  auto r3 = [](double v) { return std::round(v * 1000) / 1000; };
  CHECK(r3(nb_estimate_nu(mites.view(), WeightFunction::geom_nb(0.530)).value) == Approx(0.967));
  CHECK(r3(nb_estimate_nu(mites.view(), WeightFunction::geom_nb(0.690)).value) == Approx(1.009));
  CHECK(r3(nb_estimate_pi(mites.view(), WeightFunction::geom_nb(0.222)).value) == Approx(0.459));
  // the published moment column uses the n−1 variance divisor
  CHECK(r3(nb_mm_nu(mites.view(), VarianceDivisor::NMinusOne)) == Approx(1.167));
  CHECK(r3(nb_mm_pi(mites.view(), VarianceDivisor::NMinusOne)) == Approx(0.504));
  // Identity weight reduces to the 1/n moment estimator
  CHECK(nb_estimate_nu(mites.view(), WeightFunction::identity()).value ==
        Approx(nb_mm_nu(mites.view())).epsilon(1e-12));
}

TEST_CASE("algebraic reductions on random datasets") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng = Rng::stream(77, seed);
    const std::size_t n = 5 + seed % 60;
    const IGParams ig = IGParams::make(0.5 + 3 * rng.uniform(), 0.5 + 3 * rng.uniform());
    const Sample x = sample(ig, n, seed);
    const double m = sample_mean(x.view());
    const double s2 = sample_variance(x.view());
    CHECK(rel(stein_exp(x.view(), WeightFunction::identity()).value, 1.0 / m) < 1e-12);
    CHECK(rel(ig_estimate(x.view(), WeightFunction::constant()).lambda_hat.value, m * m * m / s2) < 1e-12);
    double inv = 0.0;
    for (double v : x.values) inv += 1.0 / v;
    inv /= static_cast<double>(n);
    CHECK(rel(ig_estimate(x.view(), WeightFunction::reciprocal()).lambda_hat.value, m / (m * inv - 1.0)) < 1e-12);

    const Sample c = sample(NBParams::from_mean_size(2.5, 0.5 + rng.uniform()), n + 20, seed);
    const double cm = sample_mean(c.view());
    const double cs2 = sample_variance(c.view());
    if (cs2 > cm * (1 + 1e-9)) {
      CHECK(rel(nb_estimate_nu(c.view(), WeightFunction::identity()).value, cm * cm / (cs2 - cm)) < 1e-12);
      CHECK(rel(nb_estimate_pi(c.view(), WeightFunction::identity()).value, cm / cs2) < 1e-12);
    }
  }
}

TEST_CASE("exp identity estimator is scale equivariant") {
  const Sample x = sample(ExpParams::make(1.3), 40, 5);
  for (double c : {0.5, 2.0, 8.0}) {
    Sample y = x;
    for (double& v : y.values) v *= c;
    CHECK(stein_exp(y.view(), WeightFunction::identity()).value ==
          Approx(stein_exp(x.view(), WeightFunction::identity()).value / c).epsilon(1e-15));
  }
}

TEST_CASE("classical helpers") {
  const std::vector<double> d{1, 2, 3, 4};
  CHECK(sample_mean(d) == 2.5);
  CHECK(sample_variance(d) == Approx(1.25));
  CHECK(sample_variance(d, VarianceDivisor::NMinusOne) == Approx(5.0 / 3.0));
  CHECK(exp_mle(d) == Approx(0.4));
  CHECK(ig_mm(d) == Approx(2.5 * 2.5 * 2.5 / 1.25));
}

TEST_CASE("custom weights bypass admissibility with a flag") {
  CustomWeight cw;
  cw.name = "cube";
  cw.f = [](double x) { return x * x * x; };
  cw.derivative = [](double x) { return 3 * x * x; };
  const std::vector<double> d{0.5, 1.0, 2.0};
  const EstimateResult r = stein_exp(d, WeightFunction::custom(cw));
  CHECK(r.unchecked);
  CHECK(r.value == Approx(3 * (0.25 + 1 + 4) / (0.125 + 1 + 8)));
}
