#pragma once

#include <cstddef>
#include <functional>
#include <string_view>

#include "rsde/model.hpp"
#include "rsde/simulate.hpp"

namespace rsde {

enum class EstimateMethod { ClosedForm, GoldenSection };

std::string_view to_string(EstimateMethod method);

struct EstimateResult {
  double theta_hat = 0.0;
  double std_error = 0.0;  // NaN when G(theta_hat) is unavailable
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double level = 0.95;
  EstimateMethod method = EstimateMethod::ClosedForm;
  double contrast_at_min = 0.0;
  std::size_t iterations = 0;
  bool at_boundary = false;
};

/// Psi_n(theta) = 1/(n h^2) * sum_k (dX_k - f(X_k, theta) h - dL_k + dR_k)^2.
/// One-sided paths carry R == 0, so the dR term vanishes.
double contrast(const SamplePath& path, const DriftSpec& spec, double theta);

/// Closed-form minimizer of the contrast for f = -theta x^gamma:
/// -sum X_k^gamma (dX_k - dL_k + dR_k) / (h sum X_k^(2 gamma)). Unconstrained.
double nlse_closed_form_power(const SamplePath& path, double gamma);

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
  std::size_t iterations = 0;
  bool at_boundary = false;
};

/// Golden-section search on [lo, hi] until the bracket is narrower than
/// rel_tol * (hi - lo), then one three-point parabolic refinement whose
/// spacing is widened until the second difference clears rounding noise.
/// A flat bracket resolves to its midpoint; boundary minima are pinned to the
/// endpoint and flagged.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& objective, double lo,
                                      double hi, double rel_tol = 1e-10);

/// Minimizes the contrast over the compactified theta domain.
EstimateResult nlse_optimize(const SamplePath& path, const DriftSpec& spec,
                             const ThetaDomain& theta_domain);

/// Closed-form power-drift estimate clamped to the compactified domain.
EstimateResult nlse_closed_form_result(const SamplePath& path, const ModelConfig& config);

/// sqrt(sigma^2 / (n h G(theta_hat))).
double asymptotic_stderr(double theta_hat, const ModelConfig& config, const SamplingPlan& plan);

/// Fills std_error and the confidence interval at `level`.
void attach_inference(EstimateResult& result, const ModelConfig& config, const SamplingPlan& plan,
                      double level = 0.95);

/// Closed form for power drifts, golden section otherwise; inference attached.
EstimateResult fit(const SamplePath& path, const ModelConfig& config, double level = 0.95);

/// Plug-in sigma^2 estimate sum (dX - dL + dR)^2 / (n h). Diagnostic only.
double realized_variance(const SamplePath& path);

struct TwoFactorEstimate {
  EstimateResult theta1;
  EstimateResult theta2;
};

/// Least-squares minimizers of the two per-equation contrasts:
///   theta1 = 1/(n h) sum (dY_k - R_k h - dL1_k + dU1_k)
///   theta2 = sum (1 - R_k)(dR_k - dL2_k) / (h sum (1 - R_k)^2)
/// with G = 1 for theta1 and G = E_pi[(1 - R)^2] for theta2.
TwoFactorEstimate estimate_two_factor(const TwoFactorPath& path, double sigma,
                                      double level = 0.95);

/// The two per-equation contrasts, exposed for oracle checks.
double two_factor_contrast_theta1(const TwoFactorPath& path, double theta1);
double two_factor_contrast_theta2(const TwoFactorPath& path, double theta2);

}  // namespace rsde
