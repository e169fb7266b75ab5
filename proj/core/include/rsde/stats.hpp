#pragma once

#include <functional>
#include <span>

namespace rsde::stats {

double mean(std::span<const double> xs);

/// Divisor N.
double population_std(std::span<const double> xs);

/// Divisor N - 1.
double sample_std(std::span<const double> xs);

double normal_cdf(double z);
double normal_quantile(double p);

/// Two-sided critical value z_{1 - (1 - level) / 2} for a confidence level.
double two_sided_z(double level);

/// sup_x |F_n(x) - F(x)| for the empirical CDF of `xs` against `cdf`.
double ks_statistic(std::span<const double> xs, const std::function<double(double)>& cdf);

/// Asymptotic P(D_n > d) with Stephens' small-sample correction.
double ks_p_value(double d, std::size_t n);

}  // namespace rsde::stats
