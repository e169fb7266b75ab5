#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rsde/model.hpp"

namespace rsde {

/// Normalized stationary density tabulated on composite-Simpson nodes.
struct DensityGrid {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> values;

  /// Sum of weights * values * g(nodes).
  double expectation(const std::function<double(double)>& g) const;
};

struct QuadratureOptions {
  std::size_t intervals = 4096;  // starting resolution; doubled until converged
  double rel_tol = 1e-10;        // on the normalizing constant
  std::size_t max_intervals = std::size_t{1} << 18;
};

/// exp(-(2 / sigma^2) * int_a^x f(y, theta) dy). Closed form for built-in
/// drifts, adaptive Gauss-Kronrod otherwise.
double scale_density(const ModelConfig& config, double theta, double x);

/// pi(x) proportional to exp(+(2 / sigma^2) * int_a^x f) on [a, b], or on a
/// truncated [a, x_max] for one-sided models with tail mass below 1e-10.
DensityGrid invariant_density(const ModelConfig& config, double theta,
                              const QuadratureOptions& opts = {});

double stationary_average(const ModelConfig& config, double theta,
                          const std::function<double(double)>& g,
                          const QuadratureOptions& opts = {});

/// G(theta) = E_pi[(d f / d theta)^2]. Throws ModelError when G <= 1e-14.
double g_information(const ModelConfig& config, double theta, const QuadratureOptions& opts = {});

}  // namespace rsde
