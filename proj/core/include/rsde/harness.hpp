#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "rsde/model.hpp"
#include "rsde/simulate.hpp"

namespace rsde {

struct McConfig {
  ModelConfig model;
  double theta0;
  SamplingPlan plan;  // plan.n is replaced by each entry of n_values
  SimOptions sim;     // sim.seed is the root seed
  std::size_t replications = 200;
  std::vector<std::size_t> n_values;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

/// Estimates for one sample size. `reps[i]` is the replication index of
/// `estimates[i]`; failed replications are only counted.
struct McRun {
  std::size_t n = 0;
  std::vector<std::size_t> reps;
  std::vector<double> estimates;
  std::size_t failures = 0;
};

struct McSummary {
  std::size_t n = 0;
  double bias = 0.0;
  double std_dev = 0.0;  // population convention (divisor N)
  double mse = 0.0;
};

/// Seed of replication `rep` at sample size `n`.
std::uint64_t replication_seed(std::uint64_t root, std::size_t rep, std::size_t n);

/// Point estimate used by the harness: closed form for power drifts,
/// golden section otherwise. Boundary minima count as failures.
double harness_estimate(const SamplePath& path, const ModelConfig& config);

/// Replicates simulate -> estimate for every n. Results depend only on the
/// root seed, not on the thread count. More than 1% failures at any n
/// throws DataError.
std::vector<McRun> run_mc(const McConfig& cfg);

McSummary summarize(std::span<const double> estimates, double theta0, std::size_t n = 0);

struct NormalityReport {
  std::vector<double> z;
  double mean = 0.0;
  double std_dev = 0.0;  // sample convention
  double ks_statistic = 0.0;
  double p_value = 0.0;
  double significance = 0.01;
  bool pass = false;
};

/// z_i = sqrt(n h G(theta0)) (theta_hat_i - theta0) / sigma, tested against
/// N(0, 1) with a one-sample Kolmogorov-Smirnov test.
NormalityReport normality_diagnostic(std::span<const double> estimates, double theta0,
                                     const SamplingPlan& plan, const ModelConfig& config,
                                     double significance = 0.01);

struct TwoFactorMcConfig {
  TwoFactorParams params;
  SamplingPlan plan;
  SimOptions sim;
  std::size_t replications = 200;
  std::vector<std::size_t> n_values;
  unsigned threads = 0;

  void validate() const;
};

struct TwoFactorMcRun {
  McRun theta1;
  McRun theta2;
};

std::vector<TwoFactorMcRun> run_mc_two_factor(const TwoFactorMcConfig& cfg);

void write_estimates_csv(std::ostream& os, std::span<const McRun> runs);
void write_summary_csv(std::ostream& os, std::span<const McSummary> summaries);
void write_zscores_csv(std::ostream& os, std::span<const std::size_t> reps,
                       std::span<const double> z);

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace rsde
