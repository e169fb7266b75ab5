#include "rsde/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rsde/errors.hpp"
#include "rsde/random.hpp"

namespace rsde {
namespace {

void reserve_path(SamplePath& path, std::size_t n) {
  path.t.assign(n + 1, 0.0);
  path.x.assign(n + 1, 0.0);
  path.l.assign(n + 1, 0.0);
  path.r.assign(n + 1, 0.0);
  path.hit_lower.assign(n, 0);
  path.hit_upper.assign(n, 0);
}

// Running state of one reflected coordinate across fine steps.
struct Reflected {
  double x;
  double l = 0.0;
  double r = 0.0;
  bool hit_lower = false;
  bool hit_upper = false;

  void advance(Scheme scheme, const BarrierConfig& barriers, double mu, double sigma, double dt,
               double dw, double u) {
    double dl = 0.0;
    double dr = 0.0;
    if (scheme == Scheme::Lepingle) {
      if (barriers.is_two_sided()) {
        const auto s = step_two_sided(x, mu, sigma, dt, dw, u, barriers.a, barriers.b);
        x = s.x_next;
        dl = s.dl;
        dr = s.dr;
      } else {
        const auto s = step_one_sided_lower(x, mu, sigma, dt, dw, u, barriers.a);
        x = s.x_next;
        dl = s.dl;
      }
    } else {
      x += mu * dt + sigma * dw;
      dl = std::max(0.0, barriers.a - x);
      x += dl;
      if (barriers.is_two_sided()) {
        dr = std::max(0.0, x - barriers.b);
        x -= dr;
      }
      if (dl > 0.0) x = barriers.a;
      if (dr > 0.0) x = barriers.b;
    }
    l += dl;
    r += dr;
    hit_lower = hit_lower || dl > 0.0;
    hit_upper = hit_upper || dr > 0.0;
  }

  void record(SamplePath& path, std::size_t k) {
    path.x[k] = x;
    path.l[k] = l;
    path.r[k] = r;
    if (k > 0) {
      path.hit_lower[k - 1] = hit_lower ? 1 : 0;
      path.hit_upper[k - 1] = hit_upper ? 1 : 0;
    }
    hit_lower = false;
    hit_upper = false;
  }
};

}  // namespace

void SamplePath::check_invariants(double tol) const {
  const std::size_t size = x.size();
  if (size < 1 || t.size() != size || l.size() != size || r.size() != size) {
    throw DataError("path columns have inconsistent lengths");
  }
  if (!hit_lower.empty() && hit_lower.size() + 1 != size) throw DataError("hit_lower length");
  if (!hit_upper.empty() && hit_upper.size() + 1 != size) throw DataError("hit_upper length");
  if (!(h > 0.0)) throw DataError("path step size must be positive");
  if (l[0] != 0.0 || r[0] != 0.0) throw DataError("regulators must start at 0");
  for (std::size_t k = 0; k < size; ++k) {
    if (!std::isfinite(x[k]) || x[k] < barriers.a - tol || x[k] > barriers.b + tol) {
      throw DataError("state outside barrier set at index " + std::to_string(k));
    }
    if (!barriers.is_two_sided() && r[k] != 0.0) {
      throw DataError("one-sided path has a nonzero upper regulator");
    }
    if (k > 0 && (l[k] < l[k - 1] || r[k] < r[k - 1])) {
      throw DataError("regulator decreases at index " + std::to_string(k));
    }
  }
}

void SimOptions::validate() const {
  if (substeps < 1) throw ConfigError("substeps must be >= 1");
}

void TwoFactorParams::validate(bool allow_noiseless) const {
  const bool sigma_ok = allow_noiseless ? sigma >= 0.0 : sigma > 0.0;
  if (!std::isfinite(sigma) || !sigma_ok) throw ConfigError("sigma must be > 0");
  BarrierConfig::two_sided(a, b);
  if (!std::isfinite(y0) || y0 < a || y0 > b) throw ConfigError("y0 must lie in [a, b]");
  if (!std::isfinite(r0) || r0 < 0.0) throw ConfigError("r0 must be >= 0");
  if (!std::isfinite(theta1) || !std::isfinite(theta2)) throw ConfigError("theta must be finite");
}

double sample_min_given_endpoint(double s, double sigma, double h, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("uniform draw must lie in (0, 1]");
  if (!std::isfinite(s) || !(sigma >= 0.0) || !(h > 0.0)) {
    throw DomainError("invalid increment, sigma or step");
  }
  const double root = std::sqrt(s * s - 2.0 * sigma * sigma * h * std::log(u));
  return std::min(0.5 * (s - root), std::min(0.0, s));
}

LowerStep step_one_sided_lower(double x, double mu, double sigma, double h, double dw, double u,
                               double a) {
  const double s = mu * h + sigma * dw;
  const double m = sample_min_given_endpoint(s, sigma, h, u);
  const double dl = std::max(0.0, a - x - m);
  if (dl == 0.0) return {std::max(a, x + s), 0.0};
  // The reflected sub-path bottoms out exactly at a; the endpoint sits s - m above it.
  return {std::max(a, a + (s - m)), dl};
}

TwoSidedStep step_two_sided(double x, double mu, double sigma, double h, double dw, double u,
                            double a, double b) {
  const auto lower = step_one_sided_lower(x, mu, sigma, h, dw, u, a);
  const double dr = std::max(0.0, lower.x_next - b);
  return {dr > 0.0 ? b : lower.x_next, lower.dl, dr};
}

SamplePath simulate_path(const ModelConfig& config, double theta, const SamplingPlan& plan,
                         const SimOptions& opts) {
  config.validate(/*allow_noiseless=*/true);
  plan.validate();
  opts.validate();
  if (!std::isfinite(theta) || !config.theta_domain.contains(theta)) {
    throw ConfigError("true parameter must lie inside theta domain");
  }

  SamplePath path;
  path.h = plan.h;
  path.barriers = config.barriers;
  reserve_path(path, plan.n);

  const double dt = plan.h / static_cast<double>(opts.substeps);
  const double sqrt_dt = std::sqrt(dt);
  RandomStream rng(opts.seed);
  Reflected state{config.x0};
  state.record(path, 0);

  for (std::size_t k = 0; k < plan.n; ++k) {
    for (std::size_t j = 0; j < opts.substeps; ++j) {
      const double mu = eval_drift(config.drift, state.x, theta);
      const double dw = sqrt_dt * rng.normal();
      const double u = rng.uniform_open_closed();
      state.advance(opts.scheme, config.barriers, mu, config.sigma, dt, dw, u);
    }
    path.t[k + 1] = static_cast<double>(k + 1) * plan.h;
    state.record(path, k + 1);
  }
  return path;
}

TwoFactorPath simulate_two_factor(const TwoFactorParams& params, const SamplingPlan& plan,
                                  const SimOptions& opts) {
  params.validate(/*allow_noiseless=*/true);
  plan.validate();
  opts.validate();

  TwoFactorPath out;
  out.y.h = plan.h;
  out.y.barriers = BarrierConfig::two_sided(params.a, params.b);
  out.rate.h = plan.h;
  out.rate.barriers = BarrierConfig::one_sided_lower(0.0);
  reserve_path(out.y, plan.n);
  reserve_path(out.rate, plan.n);

  const double dt = plan.h / static_cast<double>(opts.substeps);
  const double sqrt_dt = std::sqrt(dt);
  RandomStream rng_y(derive_seed(opts.seed, {1}));
  RandomStream rng_r(derive_seed(opts.seed, {2}));
  Reflected y{params.y0};
  Reflected rate{params.r0};
  y.record(out.y, 0);
  rate.record(out.rate, 0);

  for (std::size_t k = 0; k < plan.n; ++k) {
    for (std::size_t j = 0; j < opts.substeps; ++j) {
      const double mu_y = rate.x + params.theta1;
      const double mu_r = params.theta2 * (1.0 - rate.x);
      const double dw1 = sqrt_dt * rng_y.normal();
      const double u1 = rng_y.uniform_open_closed();
      const double dw2 = sqrt_dt * rng_r.normal();
      const double u2 = rng_r.uniform_open_closed();
      y.advance(opts.scheme, out.y.barriers, mu_y, params.sigma, dt, dw1, u1);
      rate.advance(opts.scheme, out.rate.barriers, mu_r, params.sigma, dt, dw2, u2);
    }
    const double t = static_cast<double>(k + 1) * plan.h;
    out.y.t[k + 1] = t;
    out.rate.t[k + 1] = t;
    y.record(out.y, k + 1);
    rate.record(out.rate, k + 1);
  }
  return out;
}

}  // namespace rsde
