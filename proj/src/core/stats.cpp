#include "sgdlab/core/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sgdlab/core/rng.hpp"

namespace sgdlab::stats {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of empty sample");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) throw std::invalid_argument("variance needs two samples");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line needs matching samples of size >= 2");
  }
  const double n = static_cast<double>(x.size());
  const double mx = mean(x), my = mean(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: x values are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - fit.intercept - fit.slope * x[i];
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0.0;
  return fit;
}

double kolmogorov_survival(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  KsResult r;
  r.statistic = d;
  r.p_value = kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d);
  return r;
}

ExponentialFitTest exponential_fit_test(std::span<const double> samples) {
  if (samples.size() < 5) throw std::invalid_argument("exponential_fit_test: need >= 5 samples");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  ExponentialFitTest t;
  t.rate = 1.0 / mean(x);
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = 1.0 - std::exp(-t.rate * x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  t.statistic = d;
  t.modified_statistic = (d - 0.2 / n) * (std::sqrt(n) + 0.26 + 0.5 / std::sqrt(n));
  t.rejected_at_1pct = t.modified_statistic > t.critical_1pct;
  return t;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double mann_whitney_greater_p(std::span<const double> greater,
                              std::span<const double> lesser) {
  const std::size_t n1 = greater.size(), n2 = lesser.size();
  if (n1 == 0 || n2 == 0) throw std::invalid_argument("mann_whitney: empty sample");
  // U counts pairs where `greater` wins; ties count one half.
  double u = 0.0;
  bool ties = false;
  for (double g : greater) {
    for (double l : lesser) {
      if (g > l) u += 1.0;
      else if (g == l) { u += 0.5; ties = true; }
    }
  }
  if (!ties && n1 * n2 <= 900) {
    // Exact null distribution of U by counting rank arrangements:
    // ways[k][u] = arrangements of the first k draws with statistic u.
    const std::size_t umax = n1 * n2;
    // f(i, j, u): number of sequences with i from sample 1, j from sample 2.
    std::vector<std::vector<double>> prev(n2 + 1, std::vector<double>(umax + 1, 0.0));
    for (std::size_t j = 0; j <= n2; ++j) prev[j][0] = 1.0;
    for (std::size_t i = 1; i <= n1; ++i) {
      std::vector<std::vector<double>> cur(n2 + 1, std::vector<double>(umax + 1, 0.0));
      for (std::size_t j = 0; j <= n2; ++j) {
        for (std::size_t k = 0; k <= umax; ++k) {
          // Largest element belongs to sample 1: it beats all j of sample 2.
          double c = (k >= j) ? prev[j][k - j] : 0.0;
          if (j > 0) c += cur[j - 1][k];
          cur[j][k] = c;
        }
      }
      prev.swap(cur);
    }
    const auto& dist = prev[n2];
    const double total = std::accumulate(dist.begin(), dist.end(), 0.0);
    double tail = 0.0;
    for (std::size_t k = static_cast<std::size_t>(u); k <= umax; ++k) tail += dist[k];
    return tail / total;
  }
  const double mu = 0.5 * static_cast<double>(n1 * n2);
  const double sigma = std::sqrt(static_cast<double>(n1 * n2 * (n1 + n2 + 1)) / 12.0);
  return 1.0 - normal_cdf((u - 0.5 - mu) / sigma);
}

Interval bootstrap_mean_ci(std::span<const double> x, int resamples, double level,
                           std::uint64_t seed) {
  if (x.empty()) throw std::invalid_argument("bootstrap of empty sample");
  if (resamples < 1) throw std::invalid_argument("bootstrap needs resamples >= 1");
  RandomStream rng(seed, 0xB007);
  std::vector<double> means(static_cast<std::size_t>(resamples));
  const std::uint64_t n = x.size();
  for (auto& m : means) {
    double s = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) s += x[rng.below(n)];
    m = s / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double alpha = 0.5 * (1.0 - level);
  auto quantile = [&](double q) {
    const double pos = q * static_cast<double>(means.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, means.size() - 1);
    return means[lo] + (pos - static_cast<double>(lo)) * (means[hi] - means[lo]);
  };
  return {quantile(alpha), quantile(1.0 - alpha)};
}

}  // namespace sgdlab::stats
