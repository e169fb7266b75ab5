#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <variant>

namespace rsde {

/// f(x, theta) = -theta * x^gamma, gamma in (0, 1].
struct PowerDrift {
  double gamma = 1.0;
};

/// f(x, theta) = theta * (1 - x).
struct MeanReversionToOne {};

/// f(x, theta) = c + theta with an exogenous covariate c.
struct ShiftedCovariate {
  double covariate = 0.0;
};

/// User-supplied drift. The caller owns the correctness of the derivatives.
/// `antiderivative`, when set, is any x-antiderivative of f (the additive
/// constant is irrelevant); without it the stationary module integrates f
/// numerically.
struct CustomDrift {
  using ScalarMap = std::function<double(double x, double theta)>;
  ScalarMap f;
  ScalarMap df_dtheta;
  ScalarMap d2f_dtheta2;
  ScalarMap antiderivative;
};

using DriftKind = std::variant<PowerDrift, MeanReversionToOne, ShiftedCovariate, CustomDrift>;

/// Drift together with a declared Lipschitz bound K in x on the barrier set.
class DriftSpec {
 public:
  DriftSpec(DriftKind kind, double lipschitz_bound);

  const DriftKind& kind() const noexcept { return kind_; }
  double lipschitz_bound() const noexcept { return lipschitz_bound_; }

  /// True when f is affine in theta (all built-in kinds).
  bool linear_in_theta() const noexcept;

  const PowerDrift* as_power() const noexcept { return std::get_if<PowerDrift>(&kind_); }

 private:
  DriftKind kind_;
  double lipschitz_bound_;
};

double eval_drift(const DriftSpec& spec, double x, double theta);
double eval_drift_dtheta(const DriftSpec& spec, double x, double theta);
double eval_drift_dtheta2(const DriftSpec& spec, double x, double theta);

/// Closed-form x-antiderivative of f when one is known (built-ins, or a custom
/// drift that supplies one).
std::optional<double> drift_antiderivative(const DriftSpec& spec, double x, double theta);

struct BarrierConfig {
  enum class Kind { TwoSided, OneSidedLower };

  Kind kind = Kind::TwoSided;
  double a = 0.0;
  double b = std::numeric_limits<double>::infinity();

  static BarrierConfig two_sided(double a, double b);
  static BarrierConfig one_sided_lower(double a);

  bool is_two_sided() const noexcept { return kind == Kind::TwoSided; }
  bool contains(double x) const noexcept { return x >= a && x <= b; }
  void validate() const;
};

/// Open parameter interval (lo, hi). Optimizers work on `compact()`.
struct ThetaDomain {
  double lo = 0.0;
  double hi = 1.0;

  double margin() const noexcept { return 1e-9 * (hi - lo); }
  double compact_lo() const noexcept { return lo + margin(); }
  double compact_hi() const noexcept { return hi - margin(); }
  bool contains(double theta) const noexcept { return theta > lo && theta < hi; }
  void validate() const;
};

/// Conservative x-Lipschitz bound for a built-in drift over the barrier set
/// and parameter domain, maxed with the theta-Lipschitz constant where the
/// support is bounded. For PowerDrift with gamma < 1 the x-bound holds on
/// [max(a, 0.01), b] since x^gamma is not Lipschitz at 0.
double default_lipschitz_bound(const DriftKind& kind, const BarrierConfig& barriers,
                               const ThetaDomain& theta_domain);

struct ModelConfig {
  DriftSpec drift;
  double sigma;
  BarrierConfig barriers;
  ThetaDomain theta_domain;
  double x0;

  /// Checks sigma > 0, barrier geometry, Theta and x0. With `allow_noiseless`
  /// sigma == 0 is accepted (deterministic dynamics for testing).
  void validate(bool allow_noiseless = false) const;
};

/// Builds and validates a model, deriving the Lipschitz bound for built-ins.
ModelConfig make_model(DriftKind kind, double sigma, BarrierConfig barriers,
                       ThetaDomain theta_domain, double x0);

struct SamplingPlan {
  std::size_t n = 2;
  double h = 0.01;
  double alpha = 0.25;

  double horizon() const noexcept { return static_cast<double>(n) * h; }
  void validate() const;
};

struct RegimeDiagnostics {
  double h = 0.0;
  double nh = 0.0;
  double bias_figure = 0.0;  // n * h^(1 + 2 alpha)
  bool weak_ergodic_averaging = false;  // nh < 10
  bool bias_regime = false;  // n * h^(1 + 2 alpha) > 1
};

/// Advisory only: the sampling conditions are asymptotic.
RegimeDiagnostics validate_regime(const SamplingPlan& plan);

}  // namespace rsde
