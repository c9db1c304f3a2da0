#pragma once

#include <cstdint>
#include <optional>

#include "steinmm/distributions.hpp"
#include "steinmm/estimators.hpp"
#include "steinmm/rng.hpp"
#include "steinmm/weights.hpp"

namespace steinmm {

struct Contamination {
  double fraction = 0.0;  // in [0, 1)
  double shift = 0.0;
};

struct SimSpec {
  DistParams params = ExpParams{1.0};
  Target target = Target::ExpLambda;
  WeightFunction weight = WeightFunction::identity();
  long n = 10;
  long reps = 10000;
  std::uint64_t seed = 1;
  std::optional<Contamination> contamination;
  int threads = 0;  // 0: hardware concurrency capped by STEINMM_THREADS
};

struct SimResult {
  double truth = 0.0;
  double mean = 0.0;
  double sd = 0.0;    // n−1 divisor over successful replications
  double bias = 0.0;  // mean − truth
  double mse = 0.0;   // mean squared deviation from the truth
  long failed_reps = 0;
  long reps_used = 0;
};

/// Adds `shift` to exactly ⌈fraction·n⌉ observations chosen uniformly
/// without replacement.
Sample contaminate(const Sample& data, double fraction, double shift, Rng& rng);

/// True value of the estimated parameter.
double target_value(const DistParams& params, Target target);

/// Point estimate for one sample; DegenerateError marks a failed replication.
double estimate_target(std::span<const double> data, Target target, const WeightFunction& w);

/// Runs spec.reps replications; replication r draws from Rng::stream(seed, r),
/// so results do not depend on the number of worker threads. Throws
/// SimulationError when every replication fails.
SimResult run_sim(const SimSpec& spec);

/// Worker count: `requested` if positive, otherwise the hardware concurrency,
/// capped by the STEINMM_THREADS environment variable.
int worker_count(int requested);

}  // namespace steinmm
