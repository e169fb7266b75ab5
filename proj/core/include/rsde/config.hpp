#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rsde/model.hpp"
#include "rsde/simulate.hpp"

namespace rsde {

/// Everything a config file describes: a single-equation model or the
/// two-factor system, plus the experiment settings shared by the CLI.
///
/// File format: one `key = value` per line, `#` starts a comment.
///
///   drift.kind      power | mean_reversion | shifted | two_factor
///   drift.gamma     power exponent in (0, 1]            (power)
///   drift.c         covariate                            (shifted, default 0)
///   drift.lipschitz declared bound, derived when absent
///   sigma           diffusion coefficient > 0
///   barrier.kind    two_sided | one_sided   (default: two_sided iff barrier.b is set)
///   barrier.a       lower barrier >= 0
///   barrier.b       upper barrier (two-sided only)
///   theta.lo        parameter domain lower end
///   theta.hi        parameter domain upper end
///   x0              initial state (Y_0 for two_factor)
///   theta0          true parameter used for simulation
///   two_factor.theta1, two_factor.theta2, two_factor.r0
///   n, h, alpha     sampling plan (defaults 200, 0.01, 0.25)
///   substeps        fine steps per observation (default 10)
///   scheme          lepingle | projection (default lepingle)
///   seed            root seed (default 0)
///   reps            Monte Carlo replications (default 200)
///   n_values        comma-separated sample sizes (default: n)
///   level           confidence level (default 0.95)
///
/// Unknown or duplicated keys are rejected.
struct ExperimentConfig {
  std::optional<ModelConfig> model;
  std::optional<TwoFactorParams> two_factor;
  std::optional<double> theta0;
  SamplingPlan plan;
  SimOptions sim;
  std::size_t replications = 200;
  std::vector<std::size_t> n_values;
  double level = 0.95;

  bool is_two_factor() const noexcept { return two_factor.has_value(); }
  const ModelConfig& require_model() const;
  double require_theta0() const;
};

using ConfigOverrides = std::map<std::string, std::string>;

/// Parses config text; `overrides` replace (or add) keys before validation.
ExperimentConfig parse_config_text(const std::string& text, const ConfigOverrides& overrides = {});

ExperimentConfig parse_config(const std::filesystem::path& file,
                              const ConfigOverrides& overrides = {});

}  // namespace rsde
