#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rsde/model.hpp"

namespace rsde {

/// Discrete observations {t_k, X_k, L_k, R_k}, k = 0..n, of a reflected path.
/// `r` is identically zero on one-sided paths. `hit_lower[k]` / `hit_upper[k]`
/// record whether the simulated sub-path on [t_k, t_{k+1}] touched a / b.
struct SamplePath {
  double h = 0.0;
  std::vector<double> t;
  std::vector<double> x;
  std::vector<double> l;
  std::vector<double> r;
  std::vector<std::uint8_t> hit_lower;
  std::vector<std::uint8_t> hit_upper;
  BarrierConfig barriers;

  /// Number of observation increments.
  std::size_t increments() const noexcept { return x.empty() ? 0 : x.size() - 1; }

  /// Throws DataError when shapes, barrier membership or regulator
  /// monotonicity are violated. `tol` is the barrier slack.
  void check_invariants(double tol = 1e-12) const;
};

enum class Scheme { Lepingle, Projection };

struct SimOptions {
  Scheme scheme = Scheme::Lepingle;
  std::size_t substeps = 10;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Log-price Y (two-sided on [a, b], regulators L1 and U1 stored in l and r)
/// and short rate R (one-sided at 0, regulator L2 stored in l).
struct TwoFactorPath {
  SamplePath y;
  SamplePath rate;

  double h() const noexcept { return y.h; }
  std::size_t increments() const noexcept { return y.increments(); }
};

/// Running minimum of a drifted Brownian increment over a step of length h,
/// conditioned on its endpoint s, by inversion of the Brownian-bridge minimum
/// law: m = (s - sqrt(s^2 - 2 sigma^2 h ln u)) / 2. Always m <= min(0, s).
double sample_min_given_endpoint(double s, double sigma, double h, double u);

struct LowerStep {
  double x_next;
  double dl;
};

struct TwoSidedStep {
  double x_next;
  double dl;
  double dr;
};

/// Exact-minimum reflection at a lower barrier over one fine step.
LowerStep step_one_sided_lower(double x, double mu, double sigma, double h, double dw, double u,
                               double a);

/// Lower exact-minimum reflection followed by clipping at b.
TwoSidedStep step_two_sided(double x, double mu, double sigma, double h, double dw, double u,
                            double a, double b);

/// Simulates n observation intervals of length plan.h, each split into
/// opts.substeps Euler fine steps with the drift frozen at the fine-step left
/// endpoint. Per fine step the stream yields dw first, then u. sigma == 0 is
/// accepted for deterministic runs.
SamplePath simulate_path(const ModelConfig& config, double theta, const SamplingPlan& plan,
                         const SimOptions& opts);

struct TwoFactorParams {
  double y0 = 1.0;
  double r0 = 0.5;
  double theta1 = 1.0;
  double theta2 = 1.0;
  double sigma = 0.1;
  double a = 0.0;
  double b = 3.0;

  void validate(bool allow_noiseless = false) const;
};

/// dY = (R_t + theta1) dt + sigma dW1 + dL1 - dU1 on [a, b];
/// dR = theta2 (1 - R_t) dt + sigma dW2 + dL2 on [0, inf).
/// W1 and W2 come from independent streams derived from opts.seed.
TwoFactorPath simulate_two_factor(const TwoFactorParams& params, const SamplingPlan& plan,
                                  const SimOptions& opts);

}  // namespace rsde
