#include "rsde/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsde/errors.hpp"
#include "rsde/stationary.hpp"
#include "rsde/stats.hpp"

namespace rsde {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_increments(const SamplePath& path) {
  if (path.increments() == 0) throw DataError("path has no increments");
  if (!(path.h > 0.0)) throw DataError("path step size must be positive");
}

void require_aligned(const TwoFactorPath& tf) {
  require_increments(tf.y);
  if (tf.rate.x.size() != tf.y.x.size() || tf.rate.h != tf.y.h) {
    throw DataError("two-factor components are not aligned");
  }
}

double checked_contrast(double value) {
  if (!std::isfinite(value)) throw DomainError("contrast is not finite");
  return value;
}

}  // namespace

std::string_view to_string(EstimateMethod method) {
  return method == EstimateMethod::ClosedForm ? "closed_form" : "golden_section";
}

double contrast(const SamplePath& path, const DriftSpec& spec, double theta) {
  require_increments(path);
  const std::size_t n = path.increments();
  const double h = path.h;
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double res = (path.x[k + 1] - path.x[k]) - eval_drift(spec, path.x[k], theta) * h -
                       (path.l[k + 1] - path.l[k]) + (path.r[k + 1] - path.r[k]);
    acc += res * res;
  }
  return acc / (static_cast<double>(n) * h * h);
}

double nlse_closed_form_power(const SamplePath& path, double gamma) {
  require_increments(path);
  if (!(gamma > 0.0 && gamma <= 1.0)) throw DomainError("gamma must lie in (0, 1]");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < path.increments(); ++k) {
    const double xg = gamma == 1.0 ? path.x[k] : std::pow(path.x[k], gamma);
    num += xg * ((path.x[k + 1] - path.x[k]) - (path.l[k + 1] - path.l[k]) +
                 (path.r[k + 1] - path.r[k]));
    den += xg * xg;
  }
  den *= path.h;
  if (!(den > 0.0)) throw DataError("closed-form denominator vanishes (path stuck at 0)");
  return -num / den;
}

ScalarMinimum golden_section_minimize(const std::function<double(double)>& objective, double lo,
                                      double hi, double rel_tol) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("golden section needs a finite bracket lo < hi");
  }
  const double width = hi - lo;
  const double tol = rel_tol * width;
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);

  double left = lo;
  double right = hi;
  double c = right - ratio * (right - left);
  double d = left + ratio * (right - left);
  double fc = objective(c);
  double fd = objective(d);
  std::size_t iterations = 0;
  while (right - left > tol) {
    ++iterations;
    if (!std::isfinite(fc) || !std::isfinite(fd)) throw DomainError("objective is not finite");
    if (fc < fd) {
      right = d;
      d = c;
      fd = fc;
      c = right - ratio * (right - left);
      fc = objective(c);
    } else if (fc > fd) {
      left = c;
      c = d;
      fc = fd;
      d = left + ratio * (right - left);
      fd = objective(d);
    } else {
      // Flat to machine precision: keep the centre.
      left = c;
      right = d;
      c = right - ratio * (right - left);
      d = left + ratio * (right - left);
      fc = objective(c);
      fd = objective(d);
    }
  }

  ScalarMinimum out;
  out.iterations = iterations;
  double x0 = 0.5 * (left + right);
  if (x0 - lo <= tol) {
    out.argmin = lo;
    out.value = objective(lo);
    out.at_boundary = true;
    return out;
  }
  if (hi - x0 <= tol) {
    out.argmin = hi;
    out.value = objective(hi);
    out.at_boundary = true;
    return out;
  }

  double f0 = objective(x0);
  if (!std::isfinite(f0)) throw DomainError("objective is not finite");
  const double noise_floor = 1e-9 * std::max(std::abs(f0), std::numeric_limits<double>::min());
  for (double delta = 1e-6 * width; delta <= 1e-2 * width; delta *= 4.0) {
    const double xm = x0 - delta;
    const double xp = x0 + delta;
    if (xm < lo || xp > hi) break;
    const double fm = objective(xm);
    const double fp = objective(xp);
    const double curvature = fm - 2.0 * f0 + fp;
    if (!(curvature > noise_floor)) continue;
    const double vertex = x0 - delta * (fp - fm) / (2.0 * curvature);
    if (std::abs(vertex - x0) <= delta) {
      const double fv = objective(vertex);
      if (fv <= f0 + 1e-12 * std::abs(f0)) {
        x0 = vertex;
        f0 = fv;
      }
    }
    break;
  }
  out.argmin = x0;
  out.value = f0;
  return out;
}

EstimateResult nlse_optimize(const SamplePath& path, const DriftSpec& spec,
                             const ThetaDomain& theta_domain) {
  require_increments(path);
  theta_domain.validate();
  const auto min = golden_section_minimize(
      [&](double theta) { return checked_contrast(contrast(path, spec, theta)); },
      theta_domain.compact_lo(), theta_domain.compact_hi());
  EstimateResult out;
  out.theta_hat = min.argmin;
  out.method = EstimateMethod::GoldenSection;
  out.contrast_at_min = min.value;
  out.iterations = min.iterations;
  out.at_boundary = min.at_boundary;
  return out;
}

EstimateResult nlse_closed_form_result(const SamplePath& path, const ModelConfig& config) {
  const auto* power = config.drift.as_power();
  if (power == nullptr) throw ConfigError("closed form requires a power drift");
  const double raw = nlse_closed_form_power(path, power->gamma);
  EstimateResult out;
  out.method = EstimateMethod::ClosedForm;
  const double lo = config.theta_domain.compact_lo();
  const double hi = config.theta_domain.compact_hi();
  out.theta_hat = std::clamp(raw, lo, hi);
  out.at_boundary = raw <= lo || raw >= hi;
  out.contrast_at_min = contrast(path, config.drift, out.theta_hat);
  return out;
}

double asymptotic_stderr(double theta_hat, const ModelConfig& config, const SamplingPlan& plan) {
  const double g = g_information(config, theta_hat);
  return std::sqrt(config.sigma * config.sigma / (plan.horizon() * g));
}

void attach_inference(EstimateResult& result, const ModelConfig& config, const SamplingPlan& plan,
                      double level) {
  const double z = stats::two_sided_z(level);
  result.level = level;
  result.std_error = asymptotic_stderr(result.theta_hat, config, plan);
  result.ci_lo = result.theta_hat - z * result.std_error;
  result.ci_hi = result.theta_hat + z * result.std_error;
}

EstimateResult fit(const SamplePath& path, const ModelConfig& config, double level) {
  config.validate();
  EstimateResult out = config.drift.as_power() != nullptr
                           ? nlse_closed_form_result(path, config)
                           : nlse_optimize(path, config.drift, config.theta_domain);
  const SamplingPlan plan{path.increments(), path.h, 0.25};
  attach_inference(out, config, plan, level);
  return out;
}

double realized_variance(const SamplePath& path) {
  require_increments(path);
  double acc = 0.0;
  for (std::size_t k = 0; k < path.increments(); ++k) {
    const double d = (path.x[k + 1] - path.x[k]) - (path.l[k + 1] - path.l[k]) +
                     (path.r[k + 1] - path.r[k]);
    acc += d * d;
  }
  return acc / (static_cast<double>(path.increments()) * path.h);
}

double two_factor_contrast_theta1(const TwoFactorPath& tf, double theta1) {
  require_aligned(tf);
  const auto& y = tf.y;
  const auto& rate = tf.rate;
  const double h = tf.h();
  const std::size_t n = tf.increments();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double res = (y.x[k + 1] - y.x[k]) - (rate.x[k] + theta1) * h - (y.l[k + 1] - y.l[k]) +
                       (y.r[k + 1] - y.r[k]);
    acc += res * res;
  }
  return acc / (static_cast<double>(n) * h * h);
}

double two_factor_contrast_theta2(const TwoFactorPath& tf, double theta2) {
  require_aligned(tf);
  const auto& rate = tf.rate;
  const double h = tf.h();
  const std::size_t n = tf.increments();
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double res = (rate.x[k + 1] - rate.x[k]) - theta2 * (1.0 - rate.x[k]) * h -
                       (rate.l[k + 1] - rate.l[k]);
    acc += res * res;
  }
  return acc / (static_cast<double>(n) * h * h);
}

TwoFactorEstimate estimate_two_factor(const TwoFactorPath& tf, double sigma, double level) {
  require_aligned(tf);
  const auto& y = tf.y;
  const auto& rate = tf.rate;
  const double h = tf.h();
  const std::size_t n = tf.increments();
  const double horizon = static_cast<double>(n) * h;

  double sum1 = 0.0;
  double num2 = 0.0;
  double den2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum1 += (y.x[k + 1] - y.x[k]) - rate.x[k] * h - (y.l[k + 1] - y.l[k]) + (y.r[k + 1] - y.r[k]);
    const double w = 1.0 - rate.x[k];
    num2 += w * ((rate.x[k + 1] - rate.x[k]) - (rate.l[k + 1] - rate.l[k]));
    den2 += w * w;
  }
  den2 *= h;
  if (!(den2 > 0.0)) throw DataError("theta2 denominator vanishes (short rate stuck at 1)");

  const double z = stats::two_sided_z(level);
  TwoFactorEstimate out;
  auto finish = [&](EstimateResult& r, double stderr_value) {
    r.method = EstimateMethod::ClosedForm;
    r.level = level;
    r.std_error = stderr_value;
    r.ci_lo = r.theta_hat - z * stderr_value;
    r.ci_hi = r.theta_hat + z * stderr_value;
  };

  out.theta1.theta_hat = sum1 / horizon;
  out.theta1.contrast_at_min = two_factor_contrast_theta1(tf, out.theta1.theta_hat);
  finish(out.theta1, sigma / std::sqrt(horizon));

  out.theta2.theta_hat = num2 / den2;
  out.theta2.contrast_at_min = two_factor_contrast_theta2(tf, out.theta2.theta_hat);
  double stderr2 = kNaN;
  if (sigma > 0.0) {
    try {
      const double theta2 = out.theta2.theta_hat;
      const ThetaDomain domain{theta2 - 1.0, theta2 + 1.0};
      const auto rate_model = make_model(MeanReversionToOne{}, sigma,
                                         BarrierConfig::one_sided_lower(0.0), domain, 0.0);
      const double g = g_information(rate_model, theta2);
      stderr2 = sigma / std::sqrt(horizon * g);
    } catch (const ModelError&) {
      // Non-ergodic estimate (theta2 <= 0): no stationary law to integrate against.
    }
  }
  finish(out.theta2, stderr2);
  return out;
}

}  // namespace rsde
