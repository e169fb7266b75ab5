#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "rsde/errors.hpp"
#include "rsde/estimate.hpp"
#include "rsde/harness.hpp"
#include "rsde/stationary.hpp"

namespace rsde {
namespace {

McConfig table_config(double gamma, BarrierConfig barriers, std::size_t reps,
                      std::vector<std::size_t> n_values) {
  McConfig cfg{make_model(PowerDrift{gamma}, 0.2, barriers, {0.0, 10.0}, 1.0),
               2.0,
               {200, 0.01, 0.25},
               {Scheme::Lepingle, 10, 7},
               reps,
               std::move(n_values),
               1};
  return cfg;
}

TEST(Summarize, Examples) {
  const std::vector<double> same{2.0, 2.0, 2.0};
  const auto s0 = summarize(same, 2.0);
  EXPECT_EQ(s0.bias, 0.0);
  EXPECT_EQ(s0.std_dev, 0.0);
  EXPECT_EQ(s0.mse, 0.0);

  const std::vector<double> spread{1.0, 3.0};
  const auto s1 = summarize(spread, 2.0);
  EXPECT_EQ(s1.bias, 0.0);
  EXPECT_EQ(s1.std_dev, 1.0);
  EXPECT_EQ(s1.mse, 1.0);

  EXPECT_THROW(summarize(std::vector<double>{1.0}, 2.0), DataError);
}

TEST(Summarize, PublishedRowIsInternallyConsistent) {
  const double mse = 0.0010 * 0.0010 + 0.0340 * 0.0340;
  EXPECT_NEAR(mse, 0.00116, 5e-6);
  EXPECT_NEAR(std::round(mse * 1e4) / 1e4, 0.0012, 1e-15);
}

TEST(Summarize, MseIdentityOnRandomSamples) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(2.0, 0.3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(2 + trial);
    for (auto& e : v) e = gauss(rng);
    const auto s = summarize(v, 2.0);
    EXPECT_NEAR(s.mse, s.bias * s.bias + s.std_dev * s.std_dev, 1e-12);
  }
}

TEST(RunMc, NoiselessReplicationsHitTruth) {
  auto cfg = table_config(0.5, BarrierConfig::two_sided(0.0, 3.0), 2, {200});
  cfg.model.sigma = 0.0;
  cfg.sim.substeps = 1;
  const auto runs = run_mc(cfg);
  ASSERT_EQ(runs.size(), 1u);
  ASSERT_EQ(runs[0].estimates.size(), 2u);
  for (const double e : runs[0].estimates) EXPECT_NEAR(e, 2.0, 1e-12);
  const auto s = summarize(runs[0].estimates, 2.0);
  EXPECT_NEAR(s.bias, 0.0, 1e-12);
  EXPECT_NEAR(s.std_dev, 0.0, 1e-12);
  EXPECT_NEAR(s.mse, 0.0, 1e-20);
}

TEST(RunMc, DeterministicAndThreadCountIndependent) {
  auto serial = table_config(0.5, BarrierConfig::two_sided(0.0, 3.0), 40, {50, 100});
  auto parallel = serial;
  parallel.threads = 4;
  const auto a = run_mc(serial);
  const auto b = run_mc(serial);
  const auto c = run_mc(parallel);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].estimates, b[i].estimates);
    EXPECT_EQ(a[i].estimates, c[i].estimates);
    EXPECT_EQ(a[i].reps, c[i].reps);
  }
  std::ostringstream s1;
  std::ostringstream s2;
  std::vector<McSummary> sa{summarize(a[0].estimates, 2.0, 50)};
  std::vector<McSummary> sc{summarize(c[0].estimates, 2.0, 50)};
  write_summary_csv(s1, sa);
  write_summary_csv(s2, sc);
  EXPECT_EQ(s1.str(), s2.str());
}

TEST(RunMc, DisjointReplicationRangesMatchFullRun) {
  const auto cfg = table_config(0.5, BarrierConfig::two_sided(0.0, 3.0), 30, {100});
  const auto full = run_mc(cfg);
  for (std::size_t rep = 10; rep < 20; ++rep) {
    SimOptions sim = cfg.sim;
    sim.seed = replication_seed(cfg.sim.seed, rep, 100);
    SamplingPlan plan = cfg.plan;
    plan.n = 100;
    const auto path = simulate_path(cfg.model, cfg.theta0, plan, sim);
    EXPECT_EQ(harness_estimate(path, cfg.model), full[0].estimates[rep]);
  }
}

TEST(RunMc, TooManyFailuresAbort) {
  // A domain that excludes every plausible estimate forces boundary failures.
  auto cfg = table_config(0.5, BarrierConfig::two_sided(0.0, 3.0), 20, {200});
  cfg.model.theta_domain = {1.99, 2.01};
  EXPECT_THROW(run_mc(cfg), DataError);
}

TEST(RunMc, InvalidConfigRejected) {
  auto cfg = table_config(0.5, BarrierConfig::two_sided(0.0, 3.0), 1, {200});
  EXPECT_THROW(run_mc(cfg), ConfigError);
  cfg.replications = 10;
  cfg.n_values.clear();
  EXPECT_THROW(run_mc(cfg), ConfigError);
}

TEST(Normality, InjectedNormalsPass) {
  const auto model = make_model(PowerDrift{1.0}, 0.2, BarrierConfig::two_sided(0.0, 3.0), {0.0, 10.0}, 0.1);
  const SamplingPlan plan{10000, 0.01, 0.25};
  const double scale = 0.2 / std::sqrt(plan.horizon() * g_information(model, 2.0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> gauss;
  std::vector<double> est(500);
  for (auto& e : est) e = 2.0 + scale * gauss(rng);
  const auto rep = normality_diagnostic(est, 2.0, plan, model);
  EXPECT_TRUE(rep.pass);
  EXPECT_NEAR(rep.std_dev, 1.0, 0.15);
  const double d = oracle::ks_distance(rep.z, oracle::std_normal_cdf);
  EXPECT_NEAR(rep.ks_statistic, d, 1e-15);
}

TEST(Normality, ConstantEstimatesFail) {
  const auto model = make_model(PowerDrift{1.0}, 0.2, BarrierConfig::two_sided(0.0, 3.0), {0.0, 10.0}, 0.1);
  const std::vector<double> est(200, 2.0);
  const auto rep = normality_diagnostic(est, 2.0, {10000, 0.01, 0.25}, model);
  EXPECT_FALSE(rep.pass);
  EXPECT_NEAR(rep.ks_statistic, 0.5, 1e-12);
}

TEST(Normality, ReflectedOrnsteinUhlenbeckLongHorizon) {
  McConfig cfg{make_model(PowerDrift{1.0}, 0.2, BarrierConfig::two_sided(0.0, 3.0), {0.0, 10.0}, 0.1),
               2.0,
               {10000, 0.01, 0.25},
               {Scheme::Lepingle, 10, 4242},
               500,
               {10000},
               0};
  const auto runs = run_mc(cfg);
  const auto rep = normality_diagnostic(runs[0].estimates, 2.0, {10000, 0.01, 0.25}, cfg.model);
  EXPECT_GE(rep.std_dev, 0.85);
  EXPECT_LE(rep.std_dev, 1.15);
  EXPECT_TRUE(rep.pass) << "p=" << rep.p_value;
}

TEST(StandardError, TracksMonteCarloSpreadAtLongHorizon) {
  const auto model =
      make_model(PowerDrift{1.0}, 0.2, BarrierConfig::two_sided(0.0, 3.0), {0.0, 10.0}, 0.1);
  McConfig cfg{model, 2.0, {10000, 0.01, 0.25}, {Scheme::Lepingle, 10, 99}, 200, {10000}, 0};
  const auto runs = run_mc(cfg);
  const auto s = summarize(runs[0].estimates, 2.0);
  const double se = asymptotic_stderr(2.0, model, {10000, 0.01, 0.25});
  EXPECT_LE(std::abs(se - s.std_dev), 0.5 * s.std_dev);
}

TEST(StandardError, WithinHalfOfMonteCarloSpreadAtShortHorizon) {
  // n = 200, h = 0.01 started near the stationary mean.
  const auto model =
      make_model(PowerDrift{1.0}, 0.2, BarrierConfig::two_sided(0.0, 3.0), {-100.0, 100.0}, 0.1);
  McConfig cfg{model, 2.0, {200, 0.01, 0.25}, {Scheme::Lepingle, 10, 5}, 500, {200}, 0};
  const auto runs = run_mc(cfg);
  const auto s = summarize(runs[0].estimates, 2.0);
  const double se = asymptotic_stderr(2.0, model, {200, 0.01, 0.25});
  EXPECT_LE(std::abs(se - s.std_dev), 0.5 * s.std_dev);
}

TEST(OneSided, VarianceShrinksWithSampleSize) {
  const auto cfg = table_config(2.0 / 3.0, BarrierConfig::one_sided_lower(0.0), 500, {50, 100, 200});
  std::vector<double> stds;
  for (const auto& run : run_mc(cfg)) stds.push_back(summarize(run.estimates, 2.0).std_dev);
  ASSERT_EQ(stds.size(), 3u);
  EXPECT_GT(stds[0], stds[1]);
  EXPECT_GT(stds[1], stds[2]);
}

TEST(Csv, Writers) {
  McRun run;
  run.n = 50;
  run.reps = {0, 2};
  run.estimates = {1.5, 0.1};
  std::ostringstream est;
  write_estimates_csv(est, std::vector<McRun>{run});
  EXPECT_EQ(est.str(), "n,rep,theta_hat\n50,0,1.5\n50,2,0.10000000000000001\n");
  std::ostringstream z;
  write_zscores_csv(z, std::vector<std::size_t>{3}, std::vector<double>{-0.25});
  EXPECT_EQ(z.str(), "rep,z\n3,-0.25\n");
}

TEST(ParallelFor, PropagatesFirstException) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw DataError("boom");
                            }),
               DataError);
}

}  // namespace
}  // namespace rsde
