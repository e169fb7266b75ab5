#include "rsde/harness.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

#include "csv.hpp"
#include "rsde/errors.hpp"
#include "rsde/estimate.hpp"
#include "rsde/random.hpp"
#include "rsde/stationary.hpp"
#include "rsde/stats.hpp"

namespace rsde {
namespace {

unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Collects per-replication outcomes by index, then compacts in index order.
McRun compact(std::size_t n, const std::vector<std::optional<double>>& slots) {
  McRun run;
  run.n = n;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      run.reps.push_back(i);
      run.estimates.push_back(*slots[i]);
    } else {
      ++run.failures;
    }
  }
  if (static_cast<double>(run.failures) > 0.01 * static_cast<double>(slots.size())) {
    throw DataError("more than 1% of replications failed at n=" + std::to_string(n) + " (" +
                    std::to_string(run.failures) + " of " + std::to_string(slots.size()) + ")");
  }
  return run;
}

}  // namespace

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(threads), std::max<std::size_t>(count, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
          }
        }
      });
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

void McConfig::validate() const {
  model.validate(/*allow_noiseless=*/true);
  sim.validate();
  if (replications < 2) throw ConfigError("replications must be >= 2");
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (const std::size_t n : n_values) {
    SamplingPlan p = plan;
    p.n = n;
    p.validate();
  }
  if (!model.theta_domain.contains(theta0)) throw ConfigError("theta0 must lie inside theta domain");
}

std::uint64_t replication_seed(std::uint64_t root, std::size_t rep, std::size_t n) {
  return derive_seed(root, {static_cast<std::uint64_t>(rep), static_cast<std::uint64_t>(n)});
}

double harness_estimate(const SamplePath& path, const ModelConfig& config) {
  const EstimateResult r = config.drift.as_power() != nullptr
                               ? nlse_closed_form_result(path, config)
                               : nlse_optimize(path, config.drift, config.theta_domain);
  if (r.at_boundary) throw DataError("estimate attained the boundary of theta domain");
  return r.theta_hat;
}

std::vector<McRun> run_mc(const McConfig& cfg) {
  cfg.validate();
  std::vector<McRun> runs;
  for (const std::size_t n : cfg.n_values) {
    SamplingPlan plan = cfg.plan;
    plan.n = n;
    std::vector<std::optional<double>> slots(cfg.replications);
    parallel_for(cfg.replications, cfg.threads, [&](std::size_t rep) {
      SimOptions sim = cfg.sim;
      sim.seed = replication_seed(cfg.sim.seed, rep, n);
      try {
        const SamplePath path = simulate_path(cfg.model, cfg.theta0, plan, sim);
        slots[rep] = harness_estimate(path, cfg.model);
      } catch (const DataError&) {
        slots[rep].reset();
      } catch (const DomainError&) {
        slots[rep].reset();
      }
    });
    runs.push_back(compact(n, slots));
  }
  return runs;
}

McSummary summarize(std::span<const double> estimates, double theta0, std::size_t n) {
  if (estimates.size() < 2) throw DataError("summary needs at least two estimates");
  McSummary s;
  s.n = n;
  const double m = stats::mean(estimates);
  s.bias = m - theta0;
  s.std_dev = stats::population_std(estimates);
  double acc = 0.0;
  for (const double e : estimates) acc += (e - theta0) * (e - theta0);
  s.mse = acc / static_cast<double>(estimates.size());
  return s;
}

NormalityReport normality_diagnostic(std::span<const double> estimates, double theta0,
                                     const SamplingPlan& plan, const ModelConfig& config,
                                     double significance) {
  if (estimates.size() < 2) throw DataError("normality diagnostic needs at least two estimates");
  const double g = g_information(config, theta0);
  const double scale = std::sqrt(plan.horizon() * g) / config.sigma;
  NormalityReport rep;
  rep.significance = significance;
  rep.z.reserve(estimates.size());
  for (const double e : estimates) rep.z.push_back(scale * (e - theta0));
  rep.mean = stats::mean(rep.z);
  rep.std_dev = stats::sample_std(rep.z);
  rep.ks_statistic = stats::ks_statistic(rep.z, stats::normal_cdf);
  rep.p_value = stats::ks_p_value(rep.ks_statistic, rep.z.size());
  rep.pass = rep.p_value >= significance;
  return rep;
}

void TwoFactorMcConfig::validate() const {
  params.validate(/*allow_noiseless=*/true);
  sim.validate();
  if (replications < 2) throw ConfigError("replications must be >= 2");
  if (n_values.empty()) throw ConfigError("n_values must not be empty");
  for (const std::size_t n : n_values) {
    SamplingPlan p = plan;
    p.n = n;
    p.validate();
  }
}

std::vector<TwoFactorMcRun> run_mc_two_factor(const TwoFactorMcConfig& cfg) {
  cfg.validate();
  std::vector<TwoFactorMcRun> runs;
  for (const std::size_t n : cfg.n_values) {
    SamplingPlan plan = cfg.plan;
    plan.n = n;
    std::vector<std::optional<double>> slots1(cfg.replications);
    std::vector<std::optional<double>> slots2(cfg.replications);
    parallel_for(cfg.replications, cfg.threads, [&](std::size_t rep) {
      SimOptions sim = cfg.sim;
      sim.seed = replication_seed(cfg.sim.seed, rep, n);
      try {
        const TwoFactorPath path = simulate_two_factor(cfg.params, plan, sim);
        const TwoFactorEstimate est = estimate_two_factor(path, cfg.params.sigma);
        slots1[rep] = est.theta1.theta_hat;
        slots2[rep] = est.theta2.theta_hat;
      } catch (const DataError&) {
      } catch (const DomainError&) {
      }
    });
    runs.push_back({compact(n, slots1), compact(n, slots2)});
  }
  return runs;
}

void write_estimates_csv(std::ostream& os, std::span<const McRun> runs) {
  os << "n,rep,theta_hat\n";
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.estimates.size(); ++i) {
      os << run.n << ',' << run.reps[i] << ',' << csv::fmt17(run.estimates[i]) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& os, std::span<const McSummary> summaries) {
  os << "n,bias,std_dev,mse\n";
  for (const auto& s : summaries) {
    os << s.n << ',' << csv::fmt17(s.bias) << ',' << csv::fmt17(s.std_dev) << ','
       << csv::fmt17(s.mse) << '\n';
  }
}

void write_zscores_csv(std::ostream& os, std::span<const std::size_t> reps,
                       std::span<const double> z) {
  if (reps.size() != z.size()) throw DataError("zscores: rep and z columns differ in length");
  os << "rep,z\n";
  for (std::size_t i = 0; i < z.size(); ++i) os << reps[i] << ',' << csv::fmt17(z[i]) << '\n';
}

}  // namespace rsde
