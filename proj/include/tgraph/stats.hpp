#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tgraph/errors.hpp"

namespace tgraph {

struct SummaryStats {
  std::size_t count = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
  /// (level, value) pairs; value is the nearest-rank quantile.
  std::vector<std::pair<double, double>> quantiles;
  /// (x, F(x)) at every distinct sample value, x ascending.
  std::vector<std::pair<double, double>> ecdf;

  double quantile(double level) const {
    for (const auto& [l, v] : quantiles) {
      if (l == level) return v;
    }
    throw InvalidArgument("quantile level not tabulated");
  }
  double median() const { return quantile(0.5); }
};

inline constexpr double kQuantileLevels[] = {0.05, 0.25, 0.5, 0.75, 0.95};

/// Nearest-rank quantile of sorted data.
inline double nearest_rank(std::span<const double> sorted, double level) {
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(level * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  return sorted[rank - 1];
}

/// Empirical CDF at each distinct value of sorted data.
inline std::vector<std::pair<double, double>> ecdf_points(std::span<const double> sorted) {
  std::vector<std::pair<double, double>> out;
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 == sorted.size() || sorted[i + 1] != sorted[i]) {
      out.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
    }
  }
  return out;
}

inline SummaryStats summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("summarize: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  SummaryStats s;
  s.count = sorted.size();
  const double n = static_cast<double>(s.count);
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = std::clamp(sum / n, sorted.front(), sorted.back());
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  s.min = sorted.front();
  s.max = sorted.back();
  for (double level : kQuantileLevels) s.quantiles.emplace_back(level, nearest_rank(sorted, level));
  s.ecdf = ecdf_points(sorted);
  return s;
}

/// Fraction of values <= x.
inline double ecdf_at(std::span<const double> sorted, double x) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

/// Dvoretzky-Kiefer-Wolfowitz half-width for an n-sample ECDF at level alpha.
inline double dkw_epsilon(std::size_t n, double alpha) {
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

struct EcdfVerdict {
  bool pass = false;
  double max_violation = 0.0;  // max over x of F_b(x) - F_a(x), floored at 0
  double at = 0.0;             // where the maximum is attained
  double band = 0.0;           // eps_a + eps_b
};

/// Checks that `a` is stochastically dominated by `b` (F_a >= F_b everywhere)
/// up to the sum of the two DKW half-widths at level alpha.
inline EcdfVerdict ecdf_compare(std::span<const double> a, std::span<const double> b,
                                double alpha = 0.01) {
  if (a.empty() || b.empty()) throw InvalidArgument("ecdf_compare: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0,1)");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  EcdfVerdict v;
  v.band = dkw_epsilon(sa.size(), alpha) + dkw_epsilon(sb.size(), alpha);
  std::vector<double> support = sa;
  support.insert(support.end(), sb.begin(), sb.end());
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (double x : support) {
    const double gap = ecdf_at(sb, x) - ecdf_at(sa, x);
    if (gap > v.max_violation) {
      v.max_violation = gap;
      v.at = x;
    }
  }
  v.pass = v.max_violation <= v.band;
  return v;
}

/// Kolmogorov-Smirnov distance between a sample and Uniform(lo, hi).
inline double ks_uniform(std::span<const double> samples, double lo, double hi) {
  if (samples.empty()) throw InvalidArgument("ks_uniform: empty input");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = std::clamp((sorted[i] - lo) / (hi - lo), 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

/// Asymptotic one-sample KS critical value at level alpha.
inline double ks_critical(std::size_t n, double alpha) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

struct CovarianceEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Sample covariance mean(ab) - mean(a) mean(b) with a delta-method standard
/// error (influence values (a - abar)(b - bbar) - cov).
inline CovarianceEstimate covariance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw InvalidArgument("covariance: samples must be non-empty and paired");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) cov += (a[i] - ma) * (b[i] - mb);
  cov /= n;
  CovarianceEstimate out{cov, 0.0};
  if (a.size() > 1) {
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double inf = (a[i] - ma) * (b[i] - mb) - cov;
      ss += inf * inf;
    }
    out.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  return out;
}

/// |mean - target| <= k standard errors.
inline bool within_se(const SummaryStats& s, double target, double k = 3.0) {
  return std::abs(s.mean - target) <= k * s.std_error;
}

}  // namespace tgraph
