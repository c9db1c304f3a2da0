// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "steinmm/asymptotics.hpp"
#include "steinmm/estimators.hpp"
#include "steinmm/io.hpp"
#include "steinmm/moments.hpp"
#include "steinmm/report.hpp"
#include "steinmm/rng.hpp"

using namespace steinmm;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

std::string fmt(const char* format, double v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// Tracks the worst deviation against a tolerance.
struct Worst {
  double value = 0.0;
  double tol;
  int violations = 0;
  explicit Worst(double t) : tol(t) {}
  void add(double dev) {
    value = std::max(value, dev);
    if (!(dev <= tol)) ++violations;
  }
};

ReproduceOptions options() {
  ReproduceOptions o;
  o.reps = 10000;
  o.data_dir = STEINMM_TEST_DATA_DIR;
  return o;
}

Outcome closed_form_corollaries() {
  const AsymptoticSummary mm = ig_mm_closed(1, 1, 100), ml = ig_ml_closed(1, 1, 100);
  const bool ok = round3(mm.sd()) == 0.283 && round3(mm.bias) == 0.120 && round3(ml.sd()) == 0.141 &&
                  round3(ml.bias) == 0.030 && round3(1 + mm.bias) == 1.120 && round3(1 + ml.bias) == 1.030;
  return {ok, "MM sd " + fmt("%.4f", mm.sd()) + " bias " + fmt("%.4f", mm.bias) + ", ML sd " +
                  fmt("%.4f", ml.sd()) + " bias " + fmt("%.4f", ml.bias)};
}

Outcome table2_asymptotic() {
  ReproduceOptions o = options();
  o.simulate = false;
  const Report r = reproduce(TableId::Table2, o);
  Worst w(0.001 + 1e-12);
  int cells = 0;
  for (const ReportRow& row : r.rows) {
    w.add(row.abs_dev);
    ++cells;
  }
  return {w.violations == 0 && cells == 120,
          std::to_string(cells) + " values, max |dev| " + fmt("%.5f", w.value) + " (tol 0.001)"};
}

Outcome table2_simulation() {
  const Report r = reproduce(TableId::Table2, options());
  Worst w(0.015);
  int checked = 0;
  for (const ReportRow& row : r.rows) {
    if (row.quantity != "sim_mean" && row.quantity != "sim_sd") continue;
    const auto n = std::find_if(row.keys.begin(), row.keys.end(), [](const auto& k) { return k.first == "n"; });
    if (n == row.keys.end() || n->second == "100") continue;
    w.add(row.abs_dev);
    ++checked;
  }
  return {w.violations == 0 && checked == 80,
          std::to_string(checked) + " values at n in {250,500}, 1e4 reps, max |dev| " + fmt("%.4f", w.value) +
              " (tol 0.015)"};
}

Outcome exp_optima() {
  const Report r = reproduce(TableId::ExpOptima, options());
  Worst w(0.002);
  for (const ReportRow& row : r.rows) w.add(row.abs_dev);
  return {w.violations == 0 && r.rows.size() == 8, "8 optima, max |dev| " + fmt("%.5f", w.value) + " (tol 0.002)"};
}

Outcome table1() {
  const Report r = reproduce(TableId::Table1, options());
  Worst bias(0.015), mse(0.01);
  for (const ReportRow& row : r.rows) (row.quantity == "bias" ? bias : mse).add(row.abs_dev);
  return {bias.violations == 0 && mse.violations == 0 && r.rows.size() == 32,
          "16 cells, max |dev| bias " + fmt("%.4f", bias.value) + " (tol 0.015), mse " + fmt("%.4f", mse.value) +
              " (tol 0.01)"};
}

Outcome table4() {
  const Report r = reproduce(TableId::Table4, options());
  Worst opt(0.002), val(0.01);
  int boundary = 0;
  for (const ReportRow& row : r.rows) {
    (row.quantity == "optimum" ? opt : val).add(row.abs_dev);
    boundary += row.note == "boundary" && row.quantity == "optimum";
  }
  return {opt.violations == 0 && val.violations == 0 && r.rows.size() == 48,
          "24 pairs, max |dev| optimum " + fmt("%.5f", opt.value) + " (tol 0.002), n-scaled min " +
              fmt("%.5f", val.value) + " (tol 0.01), " + std::to_string(boundary) + " boundary optima"};
}

Outcome real_data() {
  const Sample mites = read_dataset(std::string(STEINMM_TEST_DATA_DIR) + "/mites.csv");
  const double mean = sample_mean(mites.view());
  int mismatches = round3(mean) == 1.147 ? 0 : 1;
  int estimates = 0;
  Worst tuned(0.002);
  for (TableId id : {TableId::Table3, TableId::Table5}) {
    for (const ReportRow& row : reproduce(id, options()).rows) {
      if (row.quantity == "a_opt" || row.quantity == "alpha_opt") {
        tuned.add(row.abs_dev);
      } else {
        ++estimates;
        if (round3(row.computed) != row.reference) ++mismatches;
      }
    }
  }
  return {mismatches == 0 && tuned.violations == 0,
          std::to_string(estimates) + " estimates, " + std::to_string(mismatches) +
              " mismatches at 3 decimals; tuned optima max |dev| " + fmt("%.5f", tuned.value) + "; mites mean " +
              fmt("%.4f", mean)};
}

Outcome oracle_equivalence() {
  double exp_worst = 0.0, other_worst = 0.0;
  int cases = 0;
  for (double lambda : {0.5, 1.0, 3.0}) {
    const ExpParams p = ExpParams::make(lambda);
    for (const auto& w : {WeightFunction::power(0.6), WeightFunction::power(0.9), WeightFunction::identity(),
                          WeightFunction::power(1.3), WeightFunction::geom_one_minus(0.3),
                          WeightFunction::geom_one_minus(0.7), WeightFunction::geom_one_minus(0.95),
                          WeightFunction::one_plus_log()}) {
      const auto o = delta_oracle(g_exp, exp_mean_z(p, w), exp_cov(p, w), 50);
      const auto t = exp_asym(p, w, 50);
      exp_worst = std::max({exp_worst, rel(o.variance, t.variance), rel(o.bias, t.bias)});
      ++cases;
    }
  }
  for (double mu : {1.0, 3.0}) {
    for (double lambda : {1.0, 3.0}) {
      const IGParams p = IGParams::make(mu, lambda);
      for (const auto& w : {WeightFunction::constant(), WeightFunction::power(-1.0 / 3.0),
                            WeightFunction::power(-2.0 / 3.0), WeightFunction::reciprocal(),
                            WeightFunction::power(-4.0 / 3.0)}) {
        const auto o = delta_oracle(g_ig, ig_mean_z(p, w), ig_cov(p, w), 100);
        const auto t = ig_asym(p, w, 100);
        other_worst = std::max({other_worst, rel(o.variance, t.variance), rel(o.bias, t.bias)});
        ++cases;
      }
    }
  }
  for (double nu : {1.0, 1.5, 2.5}) {
    const NBParams p = NBParams::from_mean_size(2.5, nu);
    for (const auto& w : {WeightFunction::identity(), WeightFunction::geom_nb(0.3), WeightFunction::geom_nb(0.75),
                          WeightFunction::shifted_power(-0.5), WeightFunction::shifted_power(0.5)}) {
      const Vector mz = nb_mean_z(p, w);
      const CovMatrix s = nb_cov(p, w);
      const auto on = delta_oracle(g_nb_nu, mz, s, 1), tn = nb_nu_asym(p, w, 1);
      const auto op = delta_oracle(g_nb_pi, mz, s, 1), tp = nb_pi_asym(p, w, 1);
      other_worst = std::max({other_worst, rel(on.variance, tn.variance), rel(on.bias, tn.bias),
                              rel(op.variance, tp.variance), rel(op.bias, tp.bias)});
      cases += 2;
    }
  }
  return {exp_worst <= 1e-6 && other_worst <= 1e-5,
          std::to_string(cases) + " cases, max rel dev Exp " + fmt("%.2e", exp_worst) + " (tol 1e-6), IG/NB " +
              fmt("%.2e", other_worst) + " (tol 1e-5)"};
}

Outcome moment_identities() {
  double eq5 = 0.0, lemma = 0.0, table = 0.0, closed = 0.0;
  for (double mu : {0.5, 1.0, 3.0}) {
    for (double lambda : {0.5, 1.0, 3.0}) {
      const IGParams p = IGParams::make(mu, lambda);
      for (int k = 0; k <= 2; ++k) {
        const double quad = expectation(p, [k](double x) { return std::pow(x, -k); });
        eq5 = std::max(eq5, rel(quad, ig_positive_moment(p, k + 1) / std::pow(mu, 2 * k + 1)));
      }
    }
  }
  for (double nu : {0.5, 1.0, 2.5}) {
    for (double pi : {0.286, 0.5, 0.8}) {
      const NBParams q = NBParams::make(nu, pi);
      for (int k = 0; k <= 3; ++k) {
        for (double z : {0.25, 0.5, 0.9, 1.0}) {
          const double brute = numerics::truncated_sum([&](std::int64_t x) {
            const double xd = static_cast<double>(x);
            double falling = 1.0;
            for (int i = 0; i < k; ++i) falling *= xd - i;
            return falling * std::pow(z, xd) * density(q, xd);
          });
          lemma = std::max(lemma, rel(nb_factorial_zmoment(q, k, z), brute));
        }
      }
    }
  }
  for (double mu : {1.0, 3.0}) {
    const IGParams p = IGParams::make(mu, 1.0);
    const double inv = 1.0 / mu + 1.0, m2 = mu * mu + mu * mu * mu;
    const double inv2 = (mu * mu * mu + 3 * std::pow(mu, 4) + 3 * std::pow(mu, 5)) / std::pow(mu, 5);
    const std::vector<std::pair<MomentTriple, double>> rows{
        {{0, 1, 0}, inv}, {{0, 2, 0}, inv2}, {{1, 1, 0}, 1.0},  {{1, 2, 0}, inv},  {{2, 0, 1}, -1.0},
        {{2, 1, 0}, mu},  {{2, 1, 1}, -inv}, {{2, 2, 0}, 1.0},  {{3, 0, 1}, -mu},  {{3, 1, 0}, m2},
        {{3, 1, 1}, -1.0}, {{3, 2, 0}, mu},  {{4, 0, 2}, 1.0},  {{4, 1, 1}, -mu},  {{4, 2, 0}, m2}};
    for (const auto& [t, v] : rows) table = std::max(table, rel(mu_f(p, WeightFunction::reciprocal(), t, MomentMethod::Numeric), v));
  }
  const std::vector<MomentTriple> triples{{0, 1, 0}, {0, 0, 1}, {1, 1, 0}, {0, 2, 0}, {0, 0, 2}, {0, 1, 1},
                                          {1, 1, 1}, {2, 1, 0}, {2, 0, 1}, {2, 2, 0}, {3, 1, 0}, {4, 0, 2}};
  for (double lambda : {0.5, 1.0, 3.0}) {
    const ExpParams p = ExpParams::make(lambda);
    for (const auto& w : {WeightFunction::power(0.6), WeightFunction::power(0.9), WeightFunction::power(1.3),
                          WeightFunction::geom_one_minus(0.3), WeightFunction::geom_one_minus(0.95)}) {
      for (const auto& t : triples) {
        if (!has_closed_form(p, w, t)) continue;
        closed = std::max(closed, rel(mu_f(p, w, t, MomentMethod::Closed), mu_f(p, w, t, MomentMethod::Numeric)));
      }
    }
  }
  for (double mu : {1.0, 3.0}) {
    for (double lambda : {1.0, 3.0}) {
      const IGParams p = IGParams::make(mu, lambda);
      for (const auto& w : {WeightFunction::constant(), WeightFunction::reciprocal(), WeightFunction::power(-1.0),
                            WeightFunction::identity(), WeightFunction::power(2.0)}) {
        for (const auto& t : triples) {
          if (!has_closed_form(p, w, t)) continue;
          closed = std::max(closed, rel(mu_f(p, w, t, MomentMethod::Closed), mu_f(p, w, t, MomentMethod::Numeric)));
        }
      }
    }
  }
  for (double nu : {1.0, 1.5, 2.5}) {
    const NBParams p = NBParams::from_mean_size(2.5, nu);
    for (double alpha : {0.2, 0.5, 0.75, 0.95}) {
      for (const auto& t : triples) {
        const WeightFunction w = WeightFunction::geom_nb(alpha);
        closed = std::max(closed, rel(mu_tilde(p, w, t, MomentMethod::Closed), mu_tilde(p, w, t, MomentMethod::Numeric)));
      }
    }
  }
  return {eq5 <= 1e-7 && lemma <= 1e-8 && table <= 1e-7 && closed <= 1e-7,
          "max rel dev: reciprocal-moment " + fmt("%.1e", eq5) + ", factorial lemma " + fmt("%.1e", lemma) +
              ", 1/x table " + fmt("%.1e", table) + ", closed vs numeric " + fmt("%.1e", closed)};
}

Outcome algebraic_reductions() {
  double worst = 0.0;
  int nb_checked = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng = Rng::stream(4242, seed);
    const std::size_t n = 5 + seed % 80;
    const Sample x = sample(IGParams::make(0.3 + 3 * rng.uniform(), 0.3 + 3 * rng.uniform()), n, seed);
    const double m = sample_mean(x.view()), s2 = sample_variance(x.view());
    double inv = 0.0;
    for (double v : x.values) inv += 1.0 / v;
    inv /= static_cast<double>(n);
    worst = std::max({worst, rel(stein_exp(x.view(), WeightFunction::identity()).value, 1.0 / m),
                      rel(ig_estimate(x.view(), WeightFunction::constant()).lambda_hat.value, m * m * m / s2),
                      rel(ig_estimate(x.view(), WeightFunction::reciprocal()).lambda_hat.value, m / (m * inv - 1.0))});
    const Sample c = sample(NBParams::from_mean_size(1 + 3 * rng.uniform(), 0.3 + rng.uniform()), n + 30, seed);
    const double cm = sample_mean(c.view()), cs2 = sample_variance(c.view());
    if (cs2 > cm * (1 + 1e-9)) {
      worst = std::max({worst, rel(nb_estimate_nu(c.view(), WeightFunction::identity()).value, cm * cm / (cs2 - cm)),
                        rel(nb_estimate_pi(c.view(), WeightFunction::identity()).value, cm / cs2)});
      ++nb_checked;
    }
  }
  return {worst <= 1e-12 && nb_checked >= 150,
          "200 datasets (" + std::to_string(nb_checked) + " overdispersed NB), max rel dev " + fmt("%.1e", worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "closed-form corollaries", 1, closed_form_corollaries},
      {2, "Table 2 asymptotic columns", 10, table2_asymptotic},
      {3, "Table 2 simulation columns", 300, table2_simulation},
      {4, "Exp optima", 10, exp_optima},
      {5, "Table 1 contamination", 120, table1},
      {6, "Table 4 NB optima", 120, table4},
      {7, "real-data tables 3 and 5", 5, real_data},
      {8, "delta-method oracle equivalence", 60, oracle_equivalence},
      {9, "moment identities", 60, moment_identities},
      {10, "algebraic reductions", 5, algebraic_reductions},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("[%s] %2d %s: %s; %.2fs (budget %gs%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.budget_seconds, in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
