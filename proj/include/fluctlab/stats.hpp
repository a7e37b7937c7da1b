#pragma once

// Small sample-statistics helpers for the Monte Carlo acceptance checks.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fluctlab {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;   // unbiased
  double m2 = 0.0;    // central, biased 1/n
  double m3 = 0.0;
  double m4 = 0.0;

  double skewness() const { return m3 / std::pow(m2, 1.5); }
  double excess_kurtosis() const { return m4 / (m2 * m2) - 3.0; }
  double se_mean() const { return std::sqrt(var / static_cast<double>(n)); }
  // standard error of the sample variance from the fourth moment
  double se_var() const {
    return std::sqrt(std::max(m4 - m2 * m2, 0.0) / static_cast<double>(n));
  }
  // Gaussian-null standard errors for the shape diagnostics
  double se_skewness() const { return std::sqrt(6.0 / static_cast<double>(n)); }
  double se_kurtosis() const { return std::sqrt(24.0 / static_cast<double>(n)); }
};

inline Moments compute_moments(std::span<const double> xs) {
  Moments m;
  m.n = xs.size();
  if (m.n < 2) throw std::invalid_argument("moments: need at least two samples");
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(m.n);
  for (double x : xs) {
    const double d = x - m.mean;
    m.m2 += d * d;
    m.m3 += d * d * d;
    m.m4 += d * d * d * d;
  }
  m.m2 /= static_cast<double>(m.n);
  m.m3 /= static_cast<double>(m.n);
  m.m4 /= static_cast<double>(m.n);
  m.var = m.m2 * static_cast<double>(m.n) / static_cast<double>(m.n - 1);
  return m;
}

// z-score of `observed` mean against `expected` with sample-based error
inline double z_mean(std::span<const double> xs, double expected) {
  const Moments m = compute_moments(xs);
  return (m.mean - expected) / m.se_mean();
}

inline double z_variance(std::span<const double> xs, double expected) {
  const Moments m = compute_moments(xs);
  return (m.var - expected) / m.se_var();
}

// covariance of paired samples with the standard error of the product terms
struct Covariance {
  double value = 0.0;
  double se = 0.0;
};

inline Covariance sample_covariance(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("covariance: mismatched or short samples");
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  std::vector<double> prod(n);
  for (std::size_t i = 0; i < n; ++i) prod[i] = (xs[i] - mx) * (ys[i] - my);
  const Moments pm = compute_moments(prod);
  Covariance c;
  c.value = pm.mean;
  c.se = pm.se_mean();
  return c;
}

// batch-means standard error for a correlated time series
inline double batch_means_se(std::span<const double> xs, std::size_t batches = 32) {
  if (xs.size() < 2 * batches) batches = xs.size() / 2;
  if (batches < 2) throw std::invalid_argument("batch means: too few samples");
  const std::size_t len = xs.size() / batches;
  std::vector<double> means(batches, 0.0);
  for (std::size_t b = 0; b < batches; ++b) {
    for (std::size_t i = 0; i < len; ++i) means[b] += xs[b * len + i];
    means[b] /= static_cast<double>(len);
  }
  const Moments m = compute_moments(means);
  return m.se_mean();
}

}  // namespace fluctlab
