#include "rsde/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rsde/errors.hpp"

namespace rsde {
namespace {

// int_lo^hi f(y, theta) dy for drifts without a closed-form antiderivative.
double integrate_drift(const DriftSpec& spec, double theta, double lo, double hi) {
  if (lo == hi) return 0.0;
  auto f = [&](double y) { return eval_drift(spec, y, theta); };
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 10, 1e-9);
}

// (2 / sigma^2) * int_a^x f(y, theta) dy.
class Potential {
 public:
  Potential(const ModelConfig& config, double theta)
      : config_(config), theta_(theta), factor_(2.0 / (config.sigma * config.sigma)) {
    if (auto fa = drift_antiderivative(config.drift, config.barriers.a, theta)) {
      closed_form_ = true;
      offset_ = *fa;
    }
  }

  double at(double x) const {
    const double a = config_.barriers.a;
    if (closed_form_) return factor_ * (*drift_antiderivative(config_.drift, x, theta_) - offset_);
    return factor_ * integrate_drift(config_.drift, theta_, a, x);
  }

  /// Values at ascending nodes; the numeric path accumulates piecewise.
  std::vector<double> at(const std::vector<double>& nodes) const {
    std::vector<double> out(nodes.size());
    if (closed_form_) {
      for (std::size_t i = 0; i < nodes.size(); ++i) out[i] = at(nodes[i]);
      return out;
    }
    double prev_x = config_.barriers.a;
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      acc += integrate_drift(config_.drift, theta_, prev_x, nodes[i]);
      prev_x = nodes[i];
      out[i] = factor_ * acc;
    }
    return out;
  }

 private:
  const ModelConfig& config_;
  double theta_;
  double factor_;
  bool closed_form_ = false;
  double offset_ = 0.0;
};

struct Grid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Composite Simpson on `intervals` (even) panels. With `graded`, nodes follow
// x = lo + (hi - lo) u^2 so that x^gamma-type cusps at lo become smooth in u.
Grid simpson_grid(double lo, double hi, std::size_t intervals, bool graded) {
  if (intervals % 2 != 0) ++intervals;
  Grid g;
  g.nodes.resize(intervals + 1);
  g.weights.resize(intervals + 1);
  const double span = hi - lo;
  const double du = 1.0 / static_cast<double>(intervals);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double u = static_cast<double>(i) * du;
    double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w *= du / 3.0;
    if (graded) {
      g.nodes[i] = lo + span * u * u;
      g.weights[i] = w * 2.0 * span * u;
    } else {
      g.nodes[i] = lo + span * u;
      g.weights[i] = w * span;
    }
  }
  g.nodes.back() = hi;
  return g;
}

bool needs_grading(const ModelConfig& config) {
  const auto* p = config.drift.as_power();
  return p != nullptr && p->gamma < 1.0 && config.barriers.a == 0.0;
}

double unnormalized_mass(const Grid& grid, const std::vector<double>& phi, double shift,
                         std::vector<double>* values) {
  double z = 0.0;
  if (values) values->resize(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double v = std::exp(phi[i] - shift);
    z += grid.weights[i] * v;
    if (values) (*values)[i] = v;
  }
  return z;
}

// Upper end of the truncated support for one-sided models.
double one_sided_support(const ModelConfig& config, double theta, const Potential& potential,
                         bool graded) {
  constexpr std::size_t kCoarse = 512;
  constexpr double kTailMass = 1e-10;
  const double a = config.barriers.a;
  const double stiffness = std::max(std::abs(theta), 1e-8);
  double width = 20.0 * config.sigma / std::sqrt(2.0 * stiffness);
  for (int doubling = 0; doubling < 40; ++doubling) {
    const Grid body = simpson_grid(a, a + width, kCoarse, graded);
    const Grid tail = simpson_grid(a + width, a + 2.0 * width, kCoarse, false);
    const auto phi_body = potential.at(body.nodes);
    const auto phi_tail = potential.at(tail.nodes);
    const double shift = std::max(*std::max_element(phi_body.begin(), phi_body.end()),
                                  *std::max_element(phi_tail.begin(), phi_tail.end()));
    const double z_body = unnormalized_mass(body, phi_body, shift, nullptr);
    const double z_tail = unnormalized_mass(tail, phi_tail, shift, nullptr);
    if (!std::isfinite(z_body) || !std::isfinite(z_tail)) break;
    if (z_tail <= kTailMass * (z_body + z_tail)) return a + width;
    width *= 2.0;
  }
  throw ModelError("one-sided stationary density is not integrable (tail mass does not decay)");
}

}  // namespace

double DensityGrid::expectation(const std::function<double(double)>& g) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * values[i] * g(nodes[i]);
  return acc;
}

double scale_density(const ModelConfig& config, double theta, double x) {
  config.validate();
  if (!std::isfinite(x) || !config.barriers.contains(x)) {
    throw DomainError("scale density evaluated outside the barrier set");
  }
  if (x == config.barriers.a) return 1.0;
  return std::exp(-Potential(config, theta).at(x));
}

DensityGrid invariant_density(const ModelConfig& config, double theta,
                              const QuadratureOptions& opts) {
  config.validate();
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
  const Potential potential(config, theta);
  const bool graded = needs_grading(config);
  const double lo = config.barriers.a;
  const double hi = config.barriers.is_two_sided()
                        ? config.barriers.b
                        : one_sided_support(config, theta, potential, graded);

  std::size_t intervals = std::max<std::size_t>(opts.intervals, 2);
  Grid grid = simpson_grid(lo, hi, intervals, graded);
  auto phi = potential.at(grid.nodes);
  const double shift = *std::max_element(phi.begin(), phi.end());
  std::vector<double> values;
  double z = unnormalized_mass(grid, phi, shift, &values);
  if (!std::isfinite(z) || !(z > 0.0)) throw ModelError("stationary density cannot be normalized");

  while (2 * intervals <= opts.max_intervals) {
    intervals *= 2;
    Grid finer = simpson_grid(lo, hi, intervals, graded);
    const auto phi_finer = potential.at(finer.nodes);
    std::vector<double> finer_values;
    const double z_finer = unnormalized_mass(finer, phi_finer, shift, &finer_values);
    if (!std::isfinite(z_finer)) throw ModelError("stationary density cannot be normalized");
    const bool converged = std::abs(z_finer - z) <= opts.rel_tol * z_finer;
    grid = std::move(finer);
    values = std::move(finer_values);
    z = z_finer;
    if (converged) break;
  }

  DensityGrid out;
  out.lo = lo;
  out.hi = hi;
  for (double& v : values) v /= z;
  out.nodes = std::move(grid.nodes);
  out.weights = std::move(grid.weights);
  out.values = std::move(values);
  return out;
}

double stationary_average(const ModelConfig& config, double theta,
                          const std::function<double(double)>& g, const QuadratureOptions& opts) {
  return invariant_density(config, theta, opts).expectation(g);
}

double g_information(const ModelConfig& config, double theta, const QuadratureOptions& opts) {
  const auto& drift = config.drift;
  const double g = stationary_average(
      config, theta,
      [&](double x) {
        const double d = eval_drift_dtheta(drift, x, theta);
        return d * d;
      },
      opts);
  if (!(g > 1e-14)) {
    throw ModelError("G(theta) is degenerate: the drift does not depend on theta under pi");
  }
  return g;
}

}  // namespace rsde
