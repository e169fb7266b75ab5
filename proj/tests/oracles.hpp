#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's numerical paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace rsde::oracle {

inline double central_difference(const std::function<double(double)>& f, double at, double eps) {
  return (f(at + eps) - f(at - eps)) / (2.0 * eps);
}

inline double second_difference(const std::function<double(double)>& f, double at, double eps) {
  return (f(at + eps) - 2.0 * f(at) + f(at - eps)) / (eps * eps);
}

/// Composite trapezoid with `panels` equal panels.
inline double trapezoid(const std::function<double(double)>& f, double lo, double hi,
                        std::size_t panels = 200000) {
  const double dx = (hi - lo) / static_cast<double>(panels);
  double acc = 0.5 * (f(lo) + f(hi));
  for (std::size_t i = 1; i < panels; ++i) acc += f(lo + static_cast<double>(i) * dx);
  return acc * dx;
}

inline double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::acos(-1.0));
}

inline double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

/// Moments of N(0, s^2) truncated to [0, upper].
struct TruncatedMoments {
  double mean;
  double second;
};

inline TruncatedMoments zero_mean_gaussian_on(double s, double upper) {
  const double beta = upper / s;
  const double z = std_normal_cdf(beta) - 0.5;
  const double mean = s * (std_normal_pdf(0.0) - std_normal_pdf(beta)) / z;
  const double second = s * s * (1.0 - beta * std_normal_pdf(beta) / z);
  return {mean, second};
}

/// Argmin of f on the grid lo, lo+step, ..., hi.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi,
                          double step) {
  double best_x = lo;
  double best_f = std::numeric_limits<double>::infinity();
  for (double x = lo; x <= hi + 0.5 * step; x += step) {
    const double v = f(x);
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
  }
  return best_x;
}

/// Grid argmin refined by the vertex of the parabola through the best grid
/// point and its neighbours. Exact (to rounding) for quadratic objectives.
inline double grid_parabola_argmin(const std::function<double(double)>& f, double lo, double hi,
                                   double step) {
  const double x0 = grid_argmin(f, lo, hi, step);
  const double fm = f(x0 - step);
  const double f0 = f(x0);
  const double fp = f(x0 + step);
  return x0 - step * (fp - fm) / (2.0 * (fp - 2.0 * f0 + fm));
}

inline double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

/// One-sample KS statistic, computed independently of the library.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::max(static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n));
  }
  return d;
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
inline double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

}  // namespace rsde::oracle
