#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sgdlab::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance (n - 1 denominator).
double variance(std::span<const double> x);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  double slope_stderr = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least two distinct x.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Survival function of the Kolmogorov distribution, P(K > lambda).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct ExponentialFitTest {
  double rate = 0.0;             ///< maximum-likelihood rate, 1 / mean
  double statistic = 0.0;        ///< sup |F_n - F_fit|
  double modified_statistic = 0.0;
  double critical_1pct = 1.308;  ///< Stephens' 1% point for the modified statistic
  bool rejected_at_1pct = false;
};

/// Lilliefors-type goodness of fit to an exponential with estimated mean
/// (Stephens' modified statistic and tabulated critical value).
ExponentialFitTest exponential_fit_test(std::span<const double> samples);

/// One-sided Mann-Whitney U test of H1: values in `greater` tend to exceed
/// values in `lesser`. Exact permutation p-value when there are no ties and
/// the samples are small, normal approximation otherwise.
double mann_whitney_greater_p(std::span<const double> greater,
                              std::span<const double> lesser);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Percentile bootstrap interval for the mean.
Interval bootstrap_mean_ci(std::span<const double> x, int resamples, double level,
                           std::uint64_t seed);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace sgdlab::stats
