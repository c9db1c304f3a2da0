#include <doctest.h>

#include <cmath>
#include <vector>

#include "steinmm/errors.hpp"
#include "steinmm/moments.hpp"

using namespace steinmm;
using doctest::Approx;

namespace {

const std::vector<MomentTriple>& triples() {
  static const std::vector<MomentTriple> t{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 2, 0}, {0, 0, 2}, {0, 1, 1},
                                           {1, 1, 1}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {2, 2, 0}, {3, 1, 0},
                                           {3, 0, 1}, {3, 1, 1}, {4, 0, 2}, {4, 1, 1}, {4, 2, 0}, {2, 1, 1}};
  return t;
}

}  // namespace

TEST_CASE("moment oracles") {
  CHECK(mu_f(ExpParams::make(1.0), WeightFunction::identity(), {0, 1, 0}) == Approx(1.0).epsilon(1e-12));
  const double lu = std::log(0.5);
  CHECK(mu_f(ExpParams::make(1.0), WeightFunction::geom_one_minus(0.5), {0, 1, 0}) ==
        Approx(-lu / (1.0 - lu)).epsilon(1e-12));
  for (double mu : {1.0, 3.0}) {
    CHECK(mu_f(IGParams::make(mu, 2.0), WeightFunction::reciprocal(), {2, 1, 0}) == Approx(mu).epsilon(1e-12));
  }
  const NBParams nb = NBParams::make(1.0, 0.5);
  CHECK(mu_tilde(nb, WeightFunction::geom_nb(0.5), {0, 0, 1}) == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(mu_tilde(nb, WeightFunction::geom_nb(0.5), {0, 0, 1}, MomentMethod::Numeric) ==
        Approx(1.0 / 3.0).epsilon(1e-10));
  for (double nu : {1.0, 2.5}) {
    const NBParams p = NBParams::from_mean_size(2.5, nu);
    CHECK(mu_tilde(p, WeightFunction::identity(), {1, 1, 0}) ==
          Approx(p.variance() + p.mean() * p.mean()).epsilon(1e-9));
  }
}

TEST_CASE("exp closed forms agree with quadrature") {
  const std::vector<WeightFunction> ws{WeightFunction::identity(), WeightFunction::power(0.6),
                                       WeightFunction::power(0.9), WeightFunction::power(1.4),
                                       WeightFunction::geom_one_minus(0.3), WeightFunction::geom_one_minus(0.9),
                                       WeightFunction::geom_one_minus(0.99)};
  for (double lambda : {0.5, 1.0, 3.0}) {
    const ExpParams p = ExpParams::make(lambda);
    for (const auto& w : ws) {
      for (const MomentTriple& t : triples()) {
        if (!has_closed_form(p, w, t)) continue;
        CAPTURE(w.spec());
        CAPTURE(lambda);
        CAPTURE(t.k * 100 + t.l * 10 + t.m);
        const double closed = mu_f(p, w, t, MomentMethod::Closed);
        const double numeric = mu_f(p, w, t, MomentMethod::Numeric);
        CHECK(closed == Approx(numeric).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("ig closed forms agree with quadrature") {
  const std::vector<WeightFunction> ws{WeightFunction::constant(), WeightFunction::reciprocal(),
                                       WeightFunction::identity(), WeightFunction::power(-1.0),
                                       WeightFunction::power(2.0), WeightFunction::power(-2.0)};
  int checked = 0;
  for (double mu : {1.0, 3.0}) {
    for (double lambda : {1.0, 3.0}) {
      const IGParams p = IGParams::make(mu, lambda);
      for (const auto& w : ws) {
        for (const MomentTriple& t : triples()) {
          if (!has_closed_form(p, w, t)) continue;
          CAPTURE(w.spec());
          CAPTURE(t.k * 100 + t.l * 10 + t.m);
          const double closed = mu_f(p, w, t, MomentMethod::Closed);
          const double numeric = mu_f(p, w, t, MomentMethod::Numeric);
          CHECK(closed == Approx(numeric).epsilon(1e-7).scale(1e-12));
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("reciprocal weight moment table for IG") {
  for (double mu : {1.0, 3.0}) {
    const double lambda = 1.0;
    const IGParams p = IGParams::make(mu, lambda);
    const WeightFunction w = WeightFunction::reciprocal();
    const double inv = 1.0 / mu + 1.0 / lambda;
    const double m2 = mu * mu + mu * mu * mu / lambda;
    const double inv2 = (mu * mu * mu + 3 * std::pow(mu, 4) / lambda + 3 * std::pow(mu, 5) / (lambda * lambda)) /
                        std::pow(mu, 5);
    struct Row {
      MomentTriple t;
      double value;
    };
    const std::vector<Row> table{{{0, 1, 0}, inv}, {{0, 2, 0}, inv2}, {{1, 1, 0}, 1.0},  {{1, 2, 0}, inv},
                                 {{2, 0, 1}, -1.0}, {{2, 1, 0}, mu},  {{2, 1, 1}, -inv}, {{2, 2, 0}, 1.0},
                                 {{3, 0, 1}, -mu},  {{3, 1, 0}, m2},  {{3, 1, 1}, -1.0}, {{3, 2, 0}, mu},
                                 {{4, 0, 2}, 1.0},  {{4, 1, 1}, -mu}, {{4, 2, 0}, m2}};
    CHECK(table.size() == 15);
    for (const Row& r : table) {
      CAPTURE(r.t.k * 100 + r.t.l * 10 + r.t.m);
      CHECK(mu_f(p, w, r.t, MomentMethod::Numeric) == Approx(r.value).epsilon(1e-7));
      CHECK(mu_f(p, w, r.t) == Approx(r.value).epsilon(1e-10));
    }
  }
}

TEST_CASE("zero-weight-power moments equal raw moments") {
  for (int k = 0; k <= 4; ++k) {
    const ExpParams e = ExpParams::make(1.7);
    CHECK(mu_f(e, WeightFunction::power(0.8), {k, 0, 0}) == Approx(raw_moment(e, k)).epsilon(1e-9));
    const IGParams g = IGParams::make(3.0, 1.0);
    CHECK(mu_f(g, WeightFunction::power(-1.0 / 3.0), {k, 0, 0}) == Approx(raw_moment(g, k)).epsilon(1e-9));
    const NBParams b = NBParams::make(1.5, 0.375);
    CHECK(mu_tilde(b, WeightFunction::geom_nb(0.6), {k, 0, 0}) == Approx(raw_moment(b, k)).epsilon(1e-9));
  }
}

TEST_CASE("nb geometric closed form agrees with truncated sums") {
  for (double nu : {1.0, 1.5, 2.5}) {
    const NBParams p = NBParams::from_mean_size(2.5, nu);
    for (double alpha : {0.1, 0.5, 0.75, 0.95}) {
      const WeightFunction w = WeightFunction::geom_nb(alpha);
      for (const MomentTriple& t : triples()) {
        REQUIRE(has_closed_form(p, w, t));
        CHECK(mu_tilde(p, w, t, MomentMethod::Closed) ==
              Approx(mu_tilde(p, w, t, MomentMethod::Numeric)).epsilon(1e-8));
      }
    }
  }
}

TEST_CASE("method dispatch errors") {
  const NBParams p = NBParams::make(1.0, 0.5);
  CHECK_FALSE(has_closed_form(p, WeightFunction::shifted_power(-0.5), {1, 1, 0}));
  CHECK_THROWS_AS(mu_tilde(p, WeightFunction::shifted_power(-0.5), {1, 1, 0}, MomentMethod::Closed),
                  UnsupportedError);
  CHECK_THROWS_AS(mu_f(ExpParams::make(1.0), WeightFunction::one_plus_log(), {0, 1, 0}, MomentMethod::Closed),
                  UnsupportedError);
  // E[X^k f'(X)^m] with f = x^0.4 needs order k − 0.6·m > −1
  CHECK_THROWS_AS(mu_f(ExpParams::make(1.0), WeightFunction::power(0.4), {0, 0, 2}), DomainError);
}
