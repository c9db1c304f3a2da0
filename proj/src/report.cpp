#include "steinmm/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "steinmm/errors.hpp"
#include "steinmm/estimators.hpp"
#include "steinmm/io.hpp"
#include "steinmm/simulation.hpp"
#include "steinmm/tuning.hpp"

namespace steinmm {

namespace {

using Keys = std::vector<std::pair<std::string, std::string>>;

void add_row(Report& report, Keys keys, std::string quantity, double computed, double reference,
             std::string note = {}) {
  report.rows.push_back(ReportRow{std::move(keys), std::move(quantity), computed, reference,
                                  std::fabs(computed - reference), std::move(note)});
}

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t cell) {
  return Rng::stream(seed, cell + 0x5eedULL)();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Sample load_fixture(const ReproduceOptions& options, const char* name) {
  const std::string dir = options.data_dir.empty() ? default_data_dir() : options.data_dir;
  const std::string path = (std::filesystem::path(dir) / name).string();
  if (!std::filesystem::exists(path)) throw FixtureError("missing fixture file '" + path + "'");
  return read_dataset(path);
}

// Outlier experiment on Exp(1) samples with ⌈0.1·n⌉ observations shifted by +5.
Report table1(const ReproduceOptions& options) {
  Report report{TableId::Table1, {}};
  const std::array<long, 4> sizes{10, 25, 50, 100};
  const std::array<const char*, 4> labels{"pow:a=0.9", "geom1m:u=0.9", "log1p", "identity"};
  const std::array<WeightFunction, 4> weights{WeightFunction::power(0.9), WeightFunction::geom_one_minus(0.9),
                                              WeightFunction::one_plus_log(), WeightFunction::identity()};
  const double bias_ref[4][4] = {{-0.280, -0.277, -0.206, -0.304},
                                 {-0.343, -0.341, -0.271, -0.366},
                                 {-0.305, -0.303, -0.238, -0.328},
                                 {-0.308, -0.306, -0.241, -0.330}};
  const double mse_ref[4][4] = {{0.107, 0.105, 0.100, 0.114},
                                {0.126, 0.125, 0.091, 0.140},
                                {0.098, 0.097, 0.067, 0.111},
                                {0.098, 0.096, 0.063, 0.111}};
  std::uint64_t cell = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    for (std::size_t j = 0; j < weights.size(); ++j) {
      SimSpec spec;
      spec.params = ExpParams::make(1.0);
      spec.target = Target::ExpLambda;
      spec.weight = weights[j];
      spec.n = sizes[i];
      spec.reps = options.reps;
      spec.seed = cell_seed(options.seed, cell++);
      spec.contamination = Contamination{0.1, 5.0};
      spec.threads = options.threads;
      const SimResult r = run_sim(spec);
      const Keys keys{{"n", std::to_string(sizes[i])}, {"weight", labels[j]}};
      const std::string note = "failed_reps=" + std::to_string(r.failed_reps);
      add_row(report, keys, "bias", r.bias, bias_ref[i][j], note);
      add_row(report, keys, "mse", r.mse, mse_ref[i][j], note);
    }
  }
  return report;
}

// Simulated against asymptotic mean and standard deviation of the IG λ estimator.
Report table2(const ReproduceOptions& options) {
  Report report{TableId::Table2, {}};
  struct Block {
    double mu, lambda;
    // per weight, per n: sim mean, asym mean, sim sd, asym sd
    double ref[5][3][4];
  };
  const std::array<Block, 4> blocks{{
      {1, 1,
       {{{1.103, 1.120, 0.258, 0.283}, {1.045, 1.048, 0.169, 0.179}, {1.023, 1.024, 0.122, 0.126}},
        {{1.125, 1.138, 0.306, 0.312}, {1.053, 1.055, 0.193, 0.198}, {1.027, 1.028, 0.138, 0.140}},
        {{1.026, 1.025, 0.158, 0.151}, {1.010, 1.010, 0.098, 0.096}, {1.006, 1.005, 0.069, 0.068}},
        {{1.031, 1.030, 0.149, 0.141}, {1.012, 1.012, 0.091, 0.089}, {1.006, 1.006, 0.064, 0.063}},
        {{1.032, 1.031, 0.151, 0.143}, {1.013, 1.013, 0.093, 0.091}, {1.007, 1.006, 0.065, 0.064}}}},
      {3, 1,
       {{{1.213, 1.300, 0.365, 0.447}, {1.098, 1.120, 0.245, 0.283}, {1.053, 1.060, 0.180, 0.200}},
        {{1.243, 1.294, 0.442, 0.451}, {1.104, 1.118, 0.274, 0.285}, {1.055, 1.059, 0.194, 0.202}},
        {{1.020, 1.019, 0.160, 0.156}, {1.008, 1.008, 0.100, 0.099}, {1.004, 1.004, 0.070, 0.070}},
        {{1.031, 1.030, 0.149, 0.141}, {1.012, 1.012, 0.091, 0.089}, {1.006, 1.006, 0.064, 0.063}},
        {{1.033, 1.032, 0.154, 0.146}, {1.013, 1.013, 0.094, 0.093}, {1.007, 1.006, 0.066, 0.065}}}},
      {1, 3,
       {{{3.172, 3.180, 0.595, 0.600}, {3.071, 3.072, 0.378, 0.379}, {3.036, 3.036, 0.267, 0.268}},
        {{3.207, 3.216, 0.677, 0.675}, {3.085, 3.086, 0.427, 0.427}, {3.043, 3.043, 0.301, 0.302}},
        {{3.087, 3.085, 0.462, 0.440}, {3.035, 3.034, 0.284, 0.278}, {3.018, 3.017, 0.199, 0.197}},
        {{3.093, 3.090, 0.448, 0.424}, {3.037, 3.036, 0.274, 0.268}, {3.019, 3.018, 0.192, 0.190}},
        {{3.095, 3.092, 0.449, 0.426}, {3.038, 3.037, 0.275, 0.269}, {3.020, 3.018, 0.193, 0.191}}}},
      {3, 3,
       {{{3.309, 3.360, 0.775, 0.849}, {3.134, 3.144, 0.506, 0.537}, {3.069, 3.072, 0.366, 0.379}},
        {{3.374, 3.415, 0.918, 0.937}, {3.159, 3.166, 0.580, 0.593}, {3.081, 3.083, 0.413, 0.419}},
        {{3.078, 3.076, 0.475, 0.454}, {3.031, 3.031, 0.293, 0.287}, {3.017, 3.015, 0.206, 0.203}},
        {{3.093, 3.090, 0.448, 0.424}, {3.037, 3.036, 0.274, 0.268}, {3.019, 3.018, 0.192, 0.190}},
        {{3.097, 3.094, 0.453, 0.430}, {3.039, 3.038, 0.278, 0.272}, {3.020, 3.019, 0.195, 0.192}}}},
  }};
  const std::array<const char*, 5> labels{"const", "pow:a=-1/3", "pow:a=-2/3", "recip", "pow:a=-4/3"};
  const std::array<WeightFunction, 5> weights{WeightFunction::constant(), WeightFunction::power(-1.0 / 3.0),
                                              WeightFunction::power(-2.0 / 3.0), WeightFunction::reciprocal(),
                                              WeightFunction::power(-4.0 / 3.0)};
  const std::array<long, 3> sizes{100, 250, 500};
  std::uint64_t cell = 0;
  for (const Block& b : blocks) {
    const IGParams p = IGParams::make(b.mu, b.lambda);
    for (std::size_t j = 0; j < weights.size(); ++j) {
      for (std::size_t k = 0; k < sizes.size(); ++k) {
        const Keys keys{{"mu", format_number(b.mu, 6)},
                        {"lambda", format_number(b.lambda, 6)},
                        {"weight", labels[j]},
                        {"n", std::to_string(sizes[k])}};
        const std::uint64_t this_cell = cell++;
        const AsymptoticSummary a = ig_asym(p, weights[j], sizes[k]);
        add_row(report, keys, "asym_mean", b.lambda + a.bias, b.ref[j][k][1]);
        add_row(report, keys, "asym_sd", a.sd(), b.ref[j][k][3]);
        if (!options.simulate) continue;
        SimSpec spec;
        spec.params = p;
        spec.target = Target::IgLambda;
        spec.weight = weights[j];
        spec.n = sizes[k];
        spec.reps = options.reps;
        spec.seed = cell_seed(options.seed, this_cell);
        spec.threads = options.threads;
        const SimResult r = run_sim(spec);
        const std::string note = "failed_reps=" + std::to_string(r.failed_reps);
        add_row(report, keys, "sim_mean", r.mean, b.ref[j][k][0], note);
        add_row(report, keys, "sim_sd", r.sd, b.ref[j][k][2], note);
      }
    }
  }
  return report;
}

// Runoff data: λ estimates for f(x) = x^a and the tuned choices of a.
Report table3(const ReproduceOptions& options) {
  Report report{TableId::Table3, {}};
  const Sample data = load_fixture(options, "runoff.csv");
  const std::array<double, 7> exponents{-1.5, -1.0, -0.668, -0.125, -0.109, 0.0, 0.5};
  const std::array<double, 7> lambda_ref{1.423, 1.440, 1.429, 1.511, 1.511, 1.512, 1.529};
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const double value = ig_estimate(data.view(), WeightFunction::power(exponents[i])).lambda_hat.value;
    add_row(report, {{"a", format_number(exponents[i], 6)}}, "lambda_hat", value, lambda_ref[i]);
  }
  add_row(report, {}, "mu_hat", sample_mean(data.view()), 0.803);
  struct Tuned {
    const char* label;
    Criterion criterion;
    IgBranch branch;
    double a_ref;
  };
  const std::array<Tuned, 4> tuned{{{"variance, a<-0.5", Criterion::Variance, IgBranch::BelowMinusHalf, -1.0},
                                    {"bias, a<-0.5", Criterion::BiasAbs, IgBranch::BelowMinusHalf, -0.668},
                                    {"bias, a>-0.5", Criterion::BiasAbs, IgBranch::AboveMinusHalf, -0.125},
                                    {"variance, a>-0.5", Criterion::Variance, IgBranch::AboveMinusHalf, -0.109}}};
  for (const Tuned& t : tuned) {
    TwoStepOptions opt;
    opt.branch = t.branch;
    const TwoStepResult r = two_step(data.view(), WeightFunction::power(1.0), t.criterion, Target::IgLambda, opt);
    add_row(report, {{"choice", t.label}}, "a_opt", r.tuning.optimum, t.a_ref,
            r.tuning.boundary ? "boundary" : "");
  }
  return report;
}

// Optimal geometric and shifted-power weights for NB at μ = 2.5, n-scaled.
Report table4(const ReproduceOptions&) {
  Report report{TableId::Table4, {}};
  const std::array<double, 3> nus{1.0, 1.5, 2.5};
  // per nu: ν variance (opt, min), ν bias, π variance, π bias
  const double geom_ref[3][8] = {{0.751, 5.095, 0.620, 5.093, 0.751, 0.271, 0.544, 0.920},
                                 {0.771, 14.271, 0.668, 10.102, 0.771, 0.407, 0.595, 1.144},
                                 {0.805, 59.113, 0.727, 26.022, 0.805, 0.641, 0.650, 1.475}};
  const double shift_ref[3][8] = {{-0.489, 5.002, -0.990, 5.311, -0.489, 0.267, -0.990, 0.985},
                                  {-0.332, 14.130, -0.861, 10.440, -0.332, 0.404, -0.990, 1.205},
                                  {-0.097, 58.908, -0.470, 26.680, -0.097, 0.639, -0.896, 1.544}};
  struct Family {
    const char* label;
    WeightFunction family;
    const double (*ref)[8];
  };
  const std::array<Family, 2> families{{{"geom", WeightFunction::geom_nb(0.5), geom_ref},
                                        {"shiftpow", WeightFunction::shifted_power(0.0), shift_ref}}};
  const std::array<std::pair<Target, Criterion>, 4> columns{{{Target::NbNu, Criterion::Variance},
                                                             {Target::NbNu, Criterion::BiasAbs},
                                                             {Target::NbPi, Criterion::Variance},
                                                             {Target::NbPi, Criterion::BiasAbs}}};
  for (const Family& f : families) {
    for (std::size_t i = 0; i < nus.size(); ++i) {
      const NBParams p = NBParams::from_mean_size(2.5, nus[i]);
      for (std::size_t c = 0; c < columns.size(); ++c) {
        TuneSpec spec;
        spec.family = f.family;
        spec.criterion = columns[c].second;
        spec.params = p;
        spec.target = columns[c].first;
        spec.n = 1;
        const TuneResult r = optimize_weight(spec);
        const Keys keys{{"family", f.label},
                        {"nu", format_number(nus[i], 6)},
                        {"pi", format_number(p.pi, 6)},
                        {"target", std::string(to_string(columns[c].first))},
                        {"criterion", std::string(to_string(columns[c].second))}};
        const std::string note = r.boundary ? "boundary" : "";
        add_row(report, keys, "optimum", r.optimum, f.ref[i][2 * c], note);
        add_row(report, keys, "min_value", r.value, f.ref[i][2 * c + 1], note);
      }
    }
  }
  return report;
}

// Mites data: ν and π estimates for f(x) = α^x and the tuned choices of α.
Report table5(const ReproduceOptions& options) {
  Report report{TableId::Table5, {}};
  const Sample data = load_fixture(options, "mites.csv");
  const std::array<double, 5> nu_alpha{0.25, 0.5, 0.530, 0.690, 0.75};
  const std::array<double, 5> nu_ref{0.967, 0.963, 0.967, 1.009, 1.032};
  const std::array<double, 5> pi_alpha{0.222, 0.25, 0.5, 0.690, 0.75};
  const std::array<double, 5> pi_ref{0.459, 0.457, 0.456, 0.468, 0.474};
  for (std::size_t i = 0; i < nu_alpha.size(); ++i) {
    const double v = nb_estimate_nu(data.view(), WeightFunction::geom_nb(nu_alpha[i])).value;
    add_row(report, {{"alpha", format_number(nu_alpha[i], 6)}}, "nu_hat", v, nu_ref[i]);
  }
  add_row(report, {{"alpha", "MM"}}, "nu_hat", nb_mm_nu(data.view(), VarianceDivisor::NMinusOne), 1.167);
  for (std::size_t i = 0; i < pi_alpha.size(); ++i) {
    const double v = nb_estimate_pi(data.view(), WeightFunction::geom_nb(pi_alpha[i])).value;
    add_row(report, {{"alpha", format_number(pi_alpha[i], 6)}}, "pi_hat", v, pi_ref[i]);
  }
  add_row(report, {{"alpha", "MM"}}, "pi_hat", nb_mm_pi(data.view(), VarianceDivisor::NMinusOne), 0.504);
  struct Tuned {
    Target target;
    Criterion criterion;
    double alpha_ref;
  };
  const std::array<Tuned, 4> tuned{{{Target::NbNu, Criterion::BiasAbs, 0.530},
                                    {Target::NbNu, Criterion::Variance, 0.690},
                                    {Target::NbPi, Criterion::BiasAbs, 0.222},
                                    {Target::NbPi, Criterion::Variance, 0.690}}};
  for (const Tuned& t : tuned) {
    const TwoStepResult r = two_step(data.view(), WeightFunction::geom_nb(0.5), t.criterion, t.target);
    add_row(report,
            {{"target", std::string(to_string(t.target))}, {"criterion", std::string(to_string(t.criterion))}},
            "alpha_opt", r.tuning.optimum, t.alpha_ref, r.tuning.boundary ? "boundary" : "");
  }
  return report;
}

// MSE-optimal a for x^a and u for 1 − u^x at λ = 1.
Report exp_optima(const ReproduceOptions&) {
  Report report{TableId::ExpOptima, {}};
  const std::array<long, 4> sizes{10, 25, 50, 100};
  const std::array<double, 4> a_ref{0.952, 0.978, 0.988, 0.994};
  const std::array<double, 4> u_ref{0.918, 0.963, 0.981, 0.990};
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    TuneSpec spec;
    spec.params = ExpParams::make(1.0);
    spec.target = Target::ExpLambda;
    spec.criterion = Criterion::Mse;
    spec.n = sizes[i];
    spec.family = WeightFunction::power(1.0);
    const TuneResult a = optimize_weight(spec);
    spec.family = WeightFunction::geom_one_minus(0.5);
    const TuneResult u = optimize_weight(spec);
    const Keys keys{{"n", std::to_string(sizes[i])}};
    add_row(report, keys, "a_opt", a.optimum, a_ref[i], a.boundary ? "boundary" : "");
    add_row(report, keys, "u_opt", u.optimum, u_ref[i], u.boundary ? "boundary" : "");
  }
  return report;
}

}  // namespace

std::string_view to_string(TableId id) {
  switch (id) {
    case TableId::Table1:
      return "table1";
    case TableId::Table2:
      return "table2";
    case TableId::Table3:
      return "table3";
    case TableId::Table4:
      return "table4";
    case TableId::Table5:
      return "table5";
    case TableId::ExpOptima:
      return "exp_optima";
  }
  return "?";
}

TableId parse_table_id(std::string_view text) {
  for (TableId id : {TableId::Table1, TableId::Table2, TableId::Table3, TableId::Table4, TableId::Table5,
                     TableId::ExpOptima}) {
    if (text == to_string(id)) return id;
  }
  throw ParseError("unknown table '" + std::string(text) + "' (expected table1..table5 or exp_optima)");
}

std::string format_number(double value, int significant_digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", significant_digits, value);
  return buf;
}

double Report::max_deviation(std::string_view quantity) const {
  double worst = 0.0;
  for (const ReportRow& row : rows) {
    if (quantity.empty() || row.quantity == quantity) worst = std::max(worst, row.abs_dev);
  }
  return worst;
}

std::string Report::to_csv(int significant_digits) const {
  std::vector<std::string> key_names;
  for (const ReportRow& row : rows) {
    for (const auto& [name, value] : row.keys) {
      if (std::find(key_names.begin(), key_names.end(), name) == key_names.end()) key_names.push_back(name);
    }
  }
  std::ostringstream out;
  out << "table";
  for (const auto& name : key_names) out << ',' << name;
  out << ",quantity,computed,reference,abs_dev,note\n";
  for (const ReportRow& row : rows) {
    out << to_string(table);
    for (const auto& name : key_names) {
      out << ',';
      for (const auto& [k, v] : row.keys) {
        if (k == name) out << csv_escape(v);
      }
    }
    out << ',' << row.quantity << ',' << format_number(row.computed, significant_digits) << ','
        << format_number(row.reference, significant_digits) << ','
        << format_number(row.abs_dev, significant_digits) << ',' << csv_escape(row.note) << '\n';
  }
  return out.str();
}

nlohmann::ordered_json Report::to_json() const {
  nlohmann::ordered_json rows_json = nlohmann::ordered_json::array();
  for (const ReportRow& row : rows) {
    nlohmann::ordered_json keys = nlohmann::ordered_json::object();
    for (const auto& [k, v] : row.keys) keys[k] = v;
    rows_json.push_back({{"keys", keys},
                         {"quantity", row.quantity},
                         {"computed", row.computed},
                         {"reference", row.reference},
                         {"abs_dev", row.abs_dev},
                         {"note", row.note}});
  }
  return {{"table", std::string(to_string(table))}, {"rows", rows_json}};
}

Report reproduce(TableId id, const ReproduceOptions& options) {
  if (options.reps < 1) throw DomainError("reproduce: reps must be at least 1");
  switch (id) {
    case TableId::Table1:
      return table1(options);
    case TableId::Table2:
      return table2(options);
    case TableId::Table3:
      return table3(options);
    case TableId::Table4:
      return table4(options);
    case TableId::Table5:
      return table5(options);
    case TableId::ExpOptima:
      return exp_optima(options);
  }
  throw DomainError("reproduce: unknown table");
}

}  // namespace steinmm
