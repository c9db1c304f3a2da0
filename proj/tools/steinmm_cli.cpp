#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "steinmm/asymptotics.hpp"
#include "steinmm/errors.hpp"
#include "steinmm/estimators.hpp"
#include "steinmm/io.hpp"
#include "steinmm/report.hpp"
#include "steinmm/simulation.hpp"
#include "steinmm/tuning.hpp"
#include "steinmm/weights.hpp"

using namespace steinmm;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegenerate = 2;
constexpr int kExitBoundary = 3;

struct Output {
  bool json = false;
  int digits = 6;

  double round(double v) const {
    if (!std::isfinite(v)) return v;
    return std::strtod(format_number(v, digits).c_str(), nullptr);
  }
  std::string text(double v) const { return format_number(v, digits); }
};

DistKind parse_dist(const std::string& s) {
  if (s == "exp") return DistKind::Exp;
  if (s == "ig") return DistKind::IG;
  if (s == "nb") return DistKind::NB;
  throw ParseError("unknown distribution '" + s + "' (expected exp, ig or nb)");
}

Target parse_target(DistKind dist, const std::string& s) {
  switch (dist) {
    case DistKind::Exp:
      if (s.empty() || s == "lambda") return Target::ExpLambda;
      break;
    case DistKind::IG:
      if (s.empty() || s == "lambda") return Target::IgLambda;
      if (s == "mu") return Target::IgMu;
      break;
    case DistKind::NB:
      if (s.empty() || s == "nu") return Target::NbNu;
      if (s == "pi") return Target::NbPi;
      break;
  }
  throw ParseError("target '" + s + "' is not available for distribution " + std::string(to_string(dist)));
}

std::map<std::string, double> parse_assignments(const std::string& text) {
  std::map<std::string, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("expected name=value in '" + item + "'");
    const std::string name = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || *end != '\0') throw ParseError("cannot parse number '" + value + "'");
    out[name] = v;
  }
  return out;
}

DistParams make_params(DistKind dist, const std::map<std::string, double>& kv) {
  auto has = [&](const char* k) { return kv.count(k) > 0; };
  auto get = [&](const char* k) { return kv.at(k); };
  for (const auto& [k, v] : kv) {
    const bool known = (dist == DistKind::Exp && k == "lambda") ||
                       (dist == DistKind::IG && (k == "mu" || k == "lambda")) ||
                       (dist == DistKind::NB && (k == "mu" || k == "nu" || k == "pi"));
    if (!known) throw ParseError("unknown parameter '" + k + "' for " + std::string(to_string(dist)));
  }
  switch (dist) {
    case DistKind::Exp:
      if (has("lambda")) return ExpParams::make(get("lambda"));
      break;
    case DistKind::IG:
      if (has("mu") && has("lambda")) return IGParams::make(get("mu"), get("lambda"));
      break;
    case DistKind::NB:
      if (kv.size() != 2) break;
      if (has("nu") && has("pi")) return NBParams::make(get("nu"), get("pi"));
      if (has("mu") && has("nu")) return NBParams::from_mean_size(get("mu"), get("nu"));
      if (has("mu") && has("pi")) return NBParams::from_mean_prob(get("mu"), get("pi"));
      break;
  }
  throw ParseError("incomplete parameters; use lambda=R (exp), mu=R,lambda=R (ig), or two of mu,nu,pi (nb)");
}

DistParams make_params(DistKind dist, const json& j) {
  std::map<std::string, double> kv;
  for (auto it = j.begin(); it != j.end(); ++it) kv[it.key()] = it.value().get<double>();
  return make_params(dist, kv);
}

DistKind kind_of(const DistParams& p) {
  if (std::holds_alternative<ExpParams>(p)) return DistKind::Exp;
  if (std::holds_alternative<IGParams>(p)) return DistKind::IG;
  return DistKind::NB;
}

void require_admissible(const WeightFunction& w, DistKind dist) {
  const Admissibility a = check_admissible(w, dist);
  if (!a.ok) throw DomainError("weight " + w.spec() + " is not admissible: " + a.reason);
}

void print_pairs(const Output& out, const json& j) {
  if (out.json) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::cout << it.key() << ": ";
    if (it.value().is_number_float()) {
      std::cout << out.text(it.value().get<double>());
    } else if (it.value().is_string()) {
      std::cout << it.value().get<std::string>();
    } else {
      std::cout << it.value().dump();
    }
    std::cout << '\n';
  }
}

json summary_json(const Output& out, const AsymptoticSummary& s) {
  return {{"variance", out.round(s.variance)}, {"sd", out.round(s.sd())},
          {"bias", out.round(s.bias)},         {"mse", out.round(s.mse)},
          {"n", s.n}};
}

// estimate ----------------------------------------------------------------

struct EstimateArgs {
  std::string dist, target, weight = "identity", data;
};

int cmd_estimate(const EstimateArgs& a, const Output& out) {
  const DistKind dist = parse_dist(a.dist);
  const Target target = parse_target(dist, a.target);
  const WeightFunction w = parse_weight(a.weight);
  const Sample sample = read_dataset(a.data);
  json j;
  EstimateResult r;
  switch (target) {
    case Target::ExpLambda:
      r = stein_exp(sample.view(), w);
      break;
    case Target::IgMu:
    case Target::IgLambda: {
      const IgEstimate e = ig_estimate(sample.view(), w);
      r = e.lambda_hat;
      j["mu_hat"] = out.round(e.mu_hat);
      if (target == Target::IgMu) {
        r.value = e.mu_hat;
        r.target = Target::IgMu;
      }
      break;
    }
    case Target::NbNu:
      r = nb_estimate_nu(sample.view(), w);
      break;
    case Target::NbPi:
      r = nb_estimate_pi(sample.view(), w);
      break;
  }
  j["target"] = std::string(to_string(r.target));
  j["estimate"] = out.round(r.value);
  j["n"] = r.n;
  j["weight"] = w.spec();
  j["denominator"] = out.round(r.denominator);
  if (r.unchecked) j["unchecked"] = true;
  if (r.boundary) j["boundary"] = true;
  print_pairs(out, j);
  return kExitOk;
}

// asym --------------------------------------------------------------------

struct AsymArgs {
  std::string dist, target, params, weight = "identity";
  long n = 1;
};

int cmd_asym(const AsymArgs& a, const Output& out) {
  const DistKind dist = parse_dist(a.dist);
  const Target target = parse_target(dist, a.target);
  const DistParams params = make_params(dist, parse_assignments(a.params));
  const WeightFunction w = parse_weight(a.weight);
  require_admissible(w, dist);
  const AsymptoticSummary s = asymptotic_summary(params, target, w, a.n);
  json j = summary_json(out, s);
  j["target"] = std::string(to_string(target));
  j["weight"] = w.spec();
  j["params"] = describe(params);
  print_pairs(out, j);
  return kExitOk;
}

// tune --------------------------------------------------------------------

struct TuneArgs {
  std::string dist, target, params, family, criterion = "mse", bracket, branch;
  long n = 1;
};

std::optional<Bracket> parse_bracket(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("bracket must be lo,hi");
  char* end = nullptr;
  const double lo = std::strtod(text.substr(0, comma).c_str(), &end);
  if (*end != '\0') throw ParseError("cannot parse bracket '" + text + "'");
  const double hi = std::strtod(text.substr(comma + 1).c_str(), &end);
  if (*end != '\0') throw ParseError("cannot parse bracket '" + text + "'");
  return Bracket{lo, hi};
}

std::optional<IgBranch> parse_branch(const std::string& text) {
  if (text.empty()) return std::nullopt;
  if (text == "below") return IgBranch::BelowMinusHalf;
  if (text == "above") return IgBranch::AboveMinusHalf;
  throw ParseError("branch must be 'below' or 'above'");
}

int cmd_tune(const TuneArgs& a, const Output& out) {
  const DistKind dist = parse_dist(a.dist);
  TuneSpec spec;
  spec.target = parse_target(dist, a.target);
  spec.params = make_params(dist, parse_assignments(a.params));
  spec.family = parse_family(a.family);
  spec.criterion = parse_criterion(a.criterion);
  spec.n = a.n;
  spec.bracket = parse_bracket(a.bracket);
  spec.branch = parse_branch(a.branch);
  const TuneResult r = optimize_weight(spec);
  json j{{"family", a.family},
         {"criterion", std::string(to_string(spec.criterion))},
         {"optimum", out.round(r.optimum)},
         {"value", out.round(r.value)},
         {"bracket", {out.round(r.bracket.lo), out.round(r.bracket.hi)}},
         {"evaluations", r.evaluations},
         {"boundary", r.boundary},
         {"multimodal", r.multimodal}};
  print_pairs(out, j);
  if (r.multimodal) std::cerr << "warning: criterion has several local minima on the grid\n";
  if (r.boundary) {
    std::cerr << "warning: optimum lies on the bracket boundary\n";
    return kExitBoundary;
  }
  return kExitOk;
}

// curve -------------------------------------------------------------------

struct CurveArgs {
  std::string dist, target, params, family;
  long n = 1;
  double from = 0.0, to = 1.0;
  int points = 101;
};

int cmd_curve(const CurveArgs& a, const Output& out) {
  const DistKind dist = parse_dist(a.dist);
  const Target target = parse_target(dist, a.target);
  const DistParams params = make_params(dist, parse_assignments(a.params));
  const WeightFunction family = parse_family(a.family);
  if (a.points < 2 || !(a.from < a.to)) throw ParseError("curve needs --points >= 2 and --from < --to");
  json rows = json::array();
  if (!out.json) std::cout << "parameter,variance,bias,mse\n";
  for (int i = 0; i < a.points; ++i) {
    const double t = a.from + (a.to - a.from) * i / (a.points - 1);
    double var = NAN, bias = NAN, mse = NAN;
    try {
      const WeightFunction w = family.with_parameter(t);
      require_admissible(w, dist);
      const AsymptoticSummary s = asymptotic_summary(params, target, w, a.n);
      var = s.variance;
      bias = s.bias;
      mse = s.mse;
    } catch (const std::exception&) {
      // the curve is left blank where the weight is not admissible
    }
    if (out.json) {
      rows.push_back({{"parameter", out.round(t)},
                      {"variance", std::isfinite(var) ? json(out.round(var)) : json(nullptr)},
                      {"bias", std::isfinite(bias) ? json(out.round(bias)) : json(nullptr)},
                      {"mse", std::isfinite(mse) ? json(out.round(mse)) : json(nullptr)}});
    } else {
      auto cell = [&](double v) { return std::isfinite(v) ? out.text(v) : std::string(); };
      std::cout << out.text(t) << ',' << cell(var) << ',' << cell(bias) << ',' << cell(mse) << '\n';
    }
  }
  if (out.json) std::cout << rows.dump(2) << '\n';
  return kExitOk;
}

// simulate ----------------------------------------------------------------

struct SimulateArgs {
  std::string spec_file, out_file;
  std::optional<std::uint64_t> seed;
  std::optional<long> reps;
  int threads = 0;
};

SimSpec sim_spec_from_json(const json& j) {
  SimSpec s;
  const DistKind dist = parse_dist(j.at("dist").get<std::string>());
  s.params = make_params(dist, j.at("params"));
  s.target = parse_target(dist, j.value("target", std::string()));
  s.weight = parse_weight(j.value("weight", std::string("identity")));
  require_admissible(s.weight, dist);
  s.n = j.at("n").get<long>();
  s.reps = j.value("reps", 10000L);
  s.seed = j.value("seed", std::uint64_t{1});
  if (j.contains("contamination")) {
    const json& c = j.at("contamination");
    s.contamination = Contamination{c.at("fraction").get<double>(), c.at("shift").get<double>()};
  }
  return s;
}

int cmd_simulate(const SimulateArgs& a, const Output& out) {
  std::ifstream in(a.spec_file);
  if (!in) throw FixtureError("cannot open spec file '" + a.spec_file + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + a.spec_file + "': " + e.what());
  }
  const json specs = doc.is_array() ? doc : json::array({doc});
  json rows = json::array();
  std::ostringstream csv;
  csv << "index,dist,target,weight,n,reps,seed,mean,sd,bias,mse,failed_reps,reps_used\n";
  for (std::size_t i = 0; i < specs.size(); ++i) {
    SimSpec s;
    try {
      s = sim_spec_from_json(specs[i]);
    } catch (const json::exception& e) {
      throw ParseError("spec " + std::to_string(i) + ": " + e.what());
    }
    if (a.seed) s.seed = *a.seed + i;
    if (a.reps) s.reps = *a.reps;
    s.threads = a.threads;
    const SimResult r = run_sim(s);
    const std::string dist(to_string(kind_of(s.params)));
    rows.push_back({{"index", i},
                    {"dist", dist},
                    {"target", std::string(to_string(s.target))},
                    {"weight", s.weight.spec()},
                    {"n", s.n},
                    {"reps", s.reps},
                    {"seed", s.seed},
                    {"mean", out.round(r.mean)},
                    {"sd", out.round(r.sd)},
                    {"bias", out.round(r.bias)},
                    {"mse", out.round(r.mse)},
                    {"failed_reps", r.failed_reps},
                    {"reps_used", r.reps_used}});
    csv << i << ',' << dist << ',' << to_string(s.target) << ',' << s.weight.spec() << ',' << s.n << ','
        << s.reps << ',' << s.seed << ',' << out.text(r.mean) << ',' << out.text(r.sd) << ','
        << out.text(r.bias) << ',' << out.text(r.mse) << ',' << r.failed_reps << ',' << r.reps_used << '\n';
  }
  if (!a.out_file.empty()) {
    std::ofstream f(a.out_file);
    if (!f) throw FixtureError("cannot write '" + a.out_file + "'");
    f << csv.str();
  }
  if (out.json) {
    std::cout << rows.dump(2) << '\n';
  } else {
    std::cout << csv.str();
  }
  return kExitOk;
}

// reproduce ---------------------------------------------------------------

struct ReproduceArgs {
  std::string table, out_dir, data_dir;
  long reps = 10000;
  std::uint64_t seed = ReproduceOptions{}.seed;
  int threads = 0;
  bool no_sim = false;
};

int cmd_reproduce(const ReproduceArgs& a, const Output& out) {
  ReproduceOptions opt;
  opt.reps = a.reps;
  opt.seed = a.seed;
  opt.data_dir = a.data_dir;
  opt.threads = a.threads;
  opt.simulate = !a.no_sim;
  const Report report = reproduce(parse_table_id(a.table), opt);
  const std::string csv = report.to_csv(out.digits);
  json j = report.to_json();
  for (auto& row : j["rows"]) {
    for (const char* k : {"computed", "reference", "abs_dev"}) row[k] = out.round(row[k].get<double>());
  }
  if (!a.out_dir.empty()) {
    std::filesystem::create_directories(a.out_dir);
    const auto base = std::filesystem::path(a.out_dir) / std::string(to_string(report.table));
    std::ofstream(base.string() + ".csv") << csv;
    std::ofstream(base.string() + ".json") << j.dump(2) << '\n';
  }
  if (out.json) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << csv;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stein-MM estimation for the exponential, inverse Gaussian and negative binomial distributions"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_out = false, full_precision = false;
  app.add_flag("--json", json_out, "Emit JSON instead of text/CSV");
  app.add_flag("--full-precision", full_precision, "Print 17 significant digits instead of 6");

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Stein-MM point estimate from a dataset");
  c_est->add_option("--dist", est.dist, "exp | ig | nb")->required();
  c_est->add_option("--target", est.target, "lambda | mu | nu | pi");
  c_est->add_option("--weight", est.weight, "Weight spec, e.g. pow:a=0.9");
  c_est->add_option("--data", est.data, "CSV file (one column or value,count)")->required();

  AsymArgs asym;
  auto* c_asym = app.add_subcommand("asym", "Asymptotic variance, bias and MSE");
  c_asym->add_option("--dist", asym.dist, "exp | ig | nb")->required();
  c_asym->add_option("--target", asym.target, "lambda | nu | pi");
  c_asym->add_option("--params", asym.params, "e.g. mu=1,lambda=1")->required();
  c_asym->add_option("--weight", asym.weight, "Weight spec");
  c_asym->add_option("--n", asym.n, "Sample size")->check(CLI::PositiveNumber);

  TuneArgs tune;
  auto* c_tune = app.add_subcommand("tune", "Optimise the weight parameter for a criterion");
  c_tune->add_option("--dist", tune.dist, "exp | ig | nb")->required();
  c_tune->add_option("--target", tune.target, "lambda | nu | pi");
  c_tune->add_option("--params", tune.params, "e.g. mu=2.5,nu=1")->required();
  c_tune->add_option("--family", tune.family, "pow | geom1m | geom | shiftpow")->required();
  c_tune->add_option("--criterion", tune.criterion, "variance | bias | mse");
  c_tune->add_option("--n", tune.n, "Sample size")->check(CLI::PositiveNumber);
  c_tune->add_option("--bracket", tune.bracket, "Search interval lo,hi");
  c_tune->add_option("--branch", tune.branch, "IG power family: below | above a = -1/2");

  CurveArgs curve;
  auto* c_curve = app.add_subcommand("curve", "Asymptotic criteria over a range of the weight parameter");
  c_curve->add_option("--dist", curve.dist, "exp | ig | nb")->required();
  c_curve->add_option("--target", curve.target, "lambda | nu | pi");
  c_curve->add_option("--params", curve.params, "Distribution parameters")->required();
  c_curve->add_option("--family", curve.family, "pow | geom1m | geom | shiftpow")->required();
  c_curve->add_option("--n", curve.n, "Sample size")->check(CLI::PositiveNumber);
  c_curve->add_option("--from", curve.from, "First parameter value")->required();
  c_curve->add_option("--to", curve.to, "Last parameter value")->required();
  c_curve->add_option("--points", curve.points, "Number of grid points");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo bias and MSE from a JSON spec");
  c_sim->add_option("--spec", sim.spec_file, "JSON spec (object or array)")->required();
  c_sim->add_option("--seed", sim.seed, "Override the seed");
  c_sim->add_option("--reps", sim.reps, "Override the replication count")->check(CLI::PositiveNumber);
  c_sim->add_option("--out", sim.out_file, "Write CSV rows to this file");
  c_sim->add_option("--threads", sim.threads, "Worker threads (0: automatic)");

  ReproduceArgs rep;
  auto* c_rep = app.add_subcommand("reproduce", "Recompute a published table");
  c_rep->add_option("--table", rep.table, "table1..table5 | exp_optima")->required();
  c_rep->add_option("--reps", rep.reps, "Replications per simulated cell")->check(CLI::PositiveNumber);
  c_rep->add_option("--seed", rep.seed, "Base seed");
  c_rep->add_option("--out", rep.out_dir, "Directory for <table>.csv and <table>.json");
  c_rep->add_option("--data-dir", rep.data_dir, "Fixture directory");
  c_rep->add_option("--threads", rep.threads, "Worker threads (0: automatic)");
  c_rep->add_flag("--no-sim", rep.no_sim, "Skip Monte Carlo cells (table2 asymptotic columns only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Output out{json_out, full_precision ? 17 : 6};
  try {
    if (*c_est) return cmd_estimate(est, out);
    if (*c_asym) return cmd_asym(asym, out);
    if (*c_tune) return cmd_tune(tune, out);
    if (*c_curve) return cmd_curve(curve, out);
    if (*c_sim) return cmd_simulate(sim, out);
    if (*c_rep) return cmd_reproduce(rep, out);
  } catch (const DegenerateError& e) {
    std::cerr << "degenerate estimate: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const SimulationError& e) {
    std::cerr << "simulation failed: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    const std::string msg = e.what();
    if (msg.find("weight") != std::string::npos && msg.find(weight_grammar()) == std::string::npos) {
      std::cerr << weight_grammar() << '\n';
    }
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
