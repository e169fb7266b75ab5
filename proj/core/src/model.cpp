#include "rsde/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "rsde/errors.hpp"

namespace rsde {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_finite(double x, double theta) {
  if (!std::isfinite(x) || !std::isfinite(theta)) {
    throw DomainError("drift evaluated at non-finite argument");
  }
}

double checked(double value, const char* what) {
  if (!std::isfinite(value)) {
    throw DomainError(std::string("custom drift ") + what + " returned a non-finite value");
  }
  return value;
}

// x^gamma for x >= 0; negative states never occur on a barrier set with a >= 0.
double power(double x, double gamma) { return gamma == 1.0 ? x : std::pow(x, gamma); }

}  // namespace

DriftSpec::DriftSpec(DriftKind kind, double lipschitz_bound)
    : kind_(std::move(kind)), lipschitz_bound_(lipschitz_bound) {
  if (!(lipschitz_bound_ > 0.0) || !std::isfinite(lipschitz_bound_)) {
    throw ConfigError("drift.lipschitz must be positive and finite");
  }
  if (const auto* p = std::get_if<PowerDrift>(&kind_)) {
    if (!(p->gamma > 0.0 && p->gamma <= 1.0)) {
      throw ConfigError("drift.gamma must lie in (0, 1]");
    }
  }
  if (const auto* c = std::get_if<CustomDrift>(&kind_)) {
    if (!c->f || !c->df_dtheta || !c->d2f_dtheta2) {
      throw ConfigError("custom drift must supply f and both theta-derivatives");
    }
  }
  if (const auto* s = std::get_if<ShiftedCovariate>(&kind_)) {
    if (!std::isfinite(s->covariate)) throw ConfigError("drift.c must be finite");
  }
}

bool DriftSpec::linear_in_theta() const noexcept {
  return !std::holds_alternative<CustomDrift>(kind_);
}

double eval_drift(const DriftSpec& spec, double x, double theta) {
  require_finite(x, theta);
  return std::visit(Overloaded{
                        [&](const PowerDrift& p) { return -theta * power(x, p.gamma); },
                        [&](const MeanReversionToOne&) { return theta * (1.0 - x); },
                        [&](const ShiftedCovariate& s) { return s.covariate + theta; },
                        [&](const CustomDrift& c) { return checked(c.f(x, theta), "f"); },
                    },
                    spec.kind());
}

double eval_drift_dtheta(const DriftSpec& spec, double x, double theta) {
  require_finite(x, theta);
  return std::visit(Overloaded{
                        [&](const PowerDrift& p) { return -power(x, p.gamma); },
                        [&](const MeanReversionToOne&) { return 1.0 - x; },
                        [&](const ShiftedCovariate&) { return 1.0; },
                        [&](const CustomDrift& c) { return checked(c.df_dtheta(x, theta), "df/dtheta"); },
                    },
                    spec.kind());
}

double eval_drift_dtheta2(const DriftSpec& spec, double x, double theta) {
  require_finite(x, theta);
  if (const auto* c = std::get_if<CustomDrift>(&spec.kind())) {
    return checked(c->d2f_dtheta2(x, theta), "d2f/dtheta2");
  }
  return 0.0;
}

std::optional<double> drift_antiderivative(const DriftSpec& spec, double x, double theta) {
  require_finite(x, theta);
  return std::visit(
      Overloaded{
          [&](const PowerDrift& p) -> std::optional<double> {
            return -theta * std::pow(x, p.gamma + 1.0) / (p.gamma + 1.0);
          },
          [&](const MeanReversionToOne&) -> std::optional<double> {
            return theta * (x - 0.5 * x * x);
          },
          [&](const ShiftedCovariate& s) -> std::optional<double> {
            return (s.covariate + theta) * x;
          },
          [&](const CustomDrift& c) -> std::optional<double> {
            if (!c.antiderivative) return std::nullopt;
            return checked(c.antiderivative(x, theta), "antiderivative");
          },
      },
      spec.kind());
}

BarrierConfig BarrierConfig::two_sided(double a, double b) {
  BarrierConfig cfg{Kind::TwoSided, a, b};
  cfg.validate();
  return cfg;
}

BarrierConfig BarrierConfig::one_sided_lower(double a) {
  BarrierConfig cfg{Kind::OneSidedLower, a, std::numeric_limits<double>::infinity()};
  cfg.validate();
  return cfg;
}

void BarrierConfig::validate() const {
  if (!std::isfinite(a) || a < 0.0) throw ConfigError("barrier.a must be finite and >= 0");
  if (kind == Kind::TwoSided) {
    if (!std::isfinite(b) || !(a < b)) throw ConfigError("barrier.b must be finite and > barrier.a");
  } else if (b != std::numeric_limits<double>::infinity()) {
    throw ConfigError("one-sided barrier must not carry an upper barrier");
  }
}

void ThetaDomain::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw ConfigError("theta.lo must be < theta.hi, both finite");
  }
}

double default_lipschitz_bound(const DriftKind& kind, const BarrierConfig& barriers,
                               const ThetaDomain& theta_domain) {
  const double theta_abs = std::max(std::abs(theta_domain.lo), std::abs(theta_domain.hi));
  const bool bounded = barriers.is_two_sided();
  const double bound = std::visit(
      Overloaded{
          [&](const PowerDrift& p) {
            const double x_lo = std::max(barriers.a, 0.01);
            const double in_x = theta_abs * p.gamma * std::pow(x_lo, p.gamma - 1.0);
            const double in_theta = bounded ? std::pow(barriers.b, p.gamma) : 0.0;
            return std::max(in_x, in_theta);
          },
          [&](const MeanReversionToOne&) {
            const double in_theta =
                bounded ? std::max(std::abs(1.0 - barriers.a), std::abs(1.0 - barriers.b)) : 0.0;
            return std::max(theta_abs, in_theta);
          },
          [&](const ShiftedCovariate&) { return 1.0; },
          [&](const CustomDrift&) -> double {
            throw ConfigError("custom drifts must declare their own Lipschitz bound");
          },
      },
      kind);
  return std::max(bound, std::numeric_limits<double>::min());
}

void ModelConfig::validate(bool allow_noiseless) const {
  const bool sigma_ok = allow_noiseless ? sigma >= 0.0 : sigma > 0.0;
  if (!std::isfinite(sigma) || !sigma_ok) throw ConfigError("sigma must be > 0");
  barriers.validate();
  theta_domain.validate();
  if (!std::isfinite(x0) || !barriers.contains(x0)) {
    throw ConfigError("x0 must lie inside the barrier set");
  }
}

ModelConfig make_model(DriftKind kind, double sigma, BarrierConfig barriers,
                       ThetaDomain theta_domain, double x0) {
  barriers.validate();
  theta_domain.validate();
  const double bound = default_lipschitz_bound(kind, barriers, theta_domain);
  ModelConfig cfg{DriftSpec(std::move(kind), bound), sigma, barriers, theta_domain, x0};
  cfg.validate();
  return cfg;
}

void SamplingPlan::validate() const {
  if (n < 2) throw ConfigError("n must be >= 2");
  if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("h must be > 0");
  if (!(alpha > 0.0 && alpha < 0.5)) throw ConfigError("alpha must lie in (0, 0.5)");
}

RegimeDiagnostics validate_regime(const SamplingPlan& plan) {
  plan.validate();
  RegimeDiagnostics d;
  d.h = plan.h;
  d.nh = plan.horizon();
  d.bias_figure = static_cast<double>(plan.n) * std::pow(plan.h, 1.0 + 2.0 * plan.alpha);
  d.weak_ergodic_averaging = d.nh < 10.0;
  d.bias_regime = d.bias_figure > 1.0;
  return d;
}

}  // namespace rsde
