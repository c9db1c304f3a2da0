#include "steinmm/simulation.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>
#include <vector>

#include "steinmm/errors.hpp"
#include "steinmm/kernels.hpp"

namespace steinmm {

namespace {

double draw_any(const DistParams& params, Rng& rng) {
  return std::visit([&rng](const auto& p) { return draw(p, rng); }, params);
}

}  // namespace

Sample contaminate(const Sample& data, double fraction, double shift, Rng& rng) {
  if (!(fraction >= 0.0 && fraction < 1.0)) throw DomainError("contaminate: fraction must lie in [0, 1)");
  if (!std::isfinite(shift)) throw DomainError("contaminate: shift must be finite");
  Sample out = data;
  const std::size_t n = data.size();
  // the small offset keeps products such as 0.1·50 from rounding up past an integer
  const auto k = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (k == 0) return out;
  std::vector<std::size_t> index(n);
  std::iota(index.begin(), index.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t remaining = n - i;
    const auto j = i + std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(remaining)),
                                remaining - 1);
    std::swap(index[i], index[j]);
    out.values[index[i]] += shift;
  }
  return out;
}

double target_value(const DistParams& params, Target target) {
  switch (target) {
    case Target::ExpLambda:
      return std::get<ExpParams>(params).lambda;
    case Target::IgMu:
      return std::get<IGParams>(params).mu;
    case Target::IgLambda:
      return std::get<IGParams>(params).lambda;
    case Target::NbNu:
      return std::get<NBParams>(params).nu;
    case Target::NbPi:
      return std::get<NBParams>(params).pi;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double estimate_target(std::span<const double> data, Target target, const WeightFunction& w) {
  switch (target) {
    case Target::ExpLambda:
      return stein_exp(data, w).value;
    case Target::IgMu:
      return sample_mean(data);
    case Target::IgLambda:
      return ig_estimate(data, w).lambda_hat.value;
    case Target::NbNu:
      return nb_estimate_nu(data, w).value;
    case Target::NbPi:
      return nb_estimate_pi(data, w).value;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int worker_count(int requested) {
  int workers = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  if (const char* env = std::getenv("STEINMM_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < workers) workers = cap;
  }
  return workers;
}

SimResult run_sim(const SimSpec& spec) {
  if (spec.reps < 1) throw DomainError("run_sim: reps must be at least 1");
  if (spec.n < 2) throw DomainError("run_sim: n must be at least 2");
  if (spec.contamination) {
    const auto& c = *spec.contamination;
    if (!(c.fraction >= 0.0 && c.fraction < 1.0) || !std::isfinite(c.shift)) {
      throw DomainError("run_sim: contamination needs fraction in [0, 1) and a finite shift");
    }
  }
  SimResult result;
  result.truth = target_value(spec.params, spec.target);

  const auto reps = static_cast<std::size_t>(spec.reps);
  std::vector<double> estimates(reps, std::numeric_limits<double>::quiet_NaN());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    Sample data;
    data.values.resize(static_cast<std::size_t>(spec.n));
    for (std::size_t r = next.fetch_add(1); r < reps; r = next.fetch_add(1)) {
      try {
        Rng rng = Rng::stream(spec.seed, r);
        for (double& v : data.values) v = draw_any(spec.params, rng);
        if (spec.contamination && spec.contamination->fraction > 0.0) {
          const Sample dirty =
              contaminate(data, spec.contamination->fraction, spec.contamination->shift, rng);
          estimates[r] = estimate_target(dirty.view(), spec.target, spec.weight);
        } else {
          estimates[r] = estimate_target(data.view(), spec.target, spec.weight);
        }
      } catch (const DegenerateError&) {
        // counted below as a failed replication
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(reps);
      }
    }
  };

  const int workers = std::min<long>(worker_count(spec.threads), spec.reps);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Aggregate in replication order so the result is independent of scheduling.
  std::vector<double> ok;
  ok.reserve(reps);
  for (double e : estimates) {
    if (std::isfinite(e)) ok.push_back(e);
  }
  result.reps_used = static_cast<long>(ok.size());
  result.failed_reps = spec.reps - result.reps_used;
  if (ok.empty()) throw SimulationError("run_sim: every replication failed (degenerate estimates)");

  const double used = static_cast<double>(ok.size());
  result.mean = kernels::sum(ok) / used;
  std::vector<double> centred(ok.size()), error(ok.size());
  for (std::size_t i = 0; i < ok.size(); ++i) {
    centred[i] = ok[i] - result.mean;
    error[i] = ok[i] - result.truth;
  }
  result.sd = ok.size() > 1 ? std::sqrt(kernels::dot(centred, centred) / (used - 1.0)) : 0.0;
  result.bias = result.mean - result.truth;
  result.mse = kernels::dot(error, error) / used;
  return result;
}

}  // namespace steinmm
