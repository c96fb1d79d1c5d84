// stats.hpp
//
// Five-number summaries and the two-sided Mann-Whitney-Wilcoxon rank-sum test
// used to compare best-fitness samples of two operators.
//
// U is reported for the first sample: U_a = R_a - m(m+1)/2, where R_a is the
// sum of (mid)ranks of a in the pooled sample. U_a + U_b = m*n.
//
// p-values:
//   - every pooled value identical: p = 1 and U_a = m*n/2;
//   - no ties and min(m, n) <= 8: exact null distribution of U, obtained by
//     counting rank assignments (p = 2 * smaller tail, capped at 1);
//   - otherwise: normal approximation with tie-corrected variance and a 0.5
//     continuity correction.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace balcross {

inline constexpr double kSignificanceLevel = 0.01;

struct SampleSummary {
  double median = 0;
  double min = 0;
  double max = 0;
  double first_quartile = 0;
  double third_quartile = 0;
  std::size_t count = 0;
};

struct TestReport {
  double u_statistic = 0;
  double p_value = 1;
  bool significant = false;
  bool exact = false;  // which branch produced p_value
};

/// Quantile by linear interpolation between order statistics (h = (n-1)q).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline SampleSummary summarize(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("summarize: empty sample");
  std::vector<double> s(sample.begin(), sample.end());
  std::sort(s.begin(), s.end());
  SampleSummary out;
  out.count = s.size();
  out.min = s.front();
  out.max = s.back();
  out.median = quantile_sorted(s, 0.5);
  out.first_quartile = quantile_sorted(s, 0.25);
  out.third_quartile = quantile_sorted(s, 0.75);
  return out;
}

/// Percentage of true flags.
inline double success_rate(std::span<const bool> successes) {
  if (successes.empty()) throw std::invalid_argument("success_rate: no runs");
  const auto hits = std::count(successes.begin(), successes.end(), true);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(successes.size());
}

namespace detail {

struct RankSums {
  double rank_sum_a = 0;
  double tie_term = 0;  // sum over tie groups of (g^3 - g)
  bool has_ties = false;
  bool all_equal = false;
};

inline RankSums rank_sums(std::span<const double> a, std::span<const double> b) {
  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(), [](const Item& x, const Item& y) { return x.value < y.value; });

  RankSums out;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j + 1 < pooled.size() && pooled[j + 1].value == pooled[i].value) ++j;
    const double g = static_cast<double>(j - i + 1);
    const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t r = i; r <= j; ++r)
      if (pooled[r].from_a) out.rank_sum_a += midrank;
    if (g > 1) {
      out.has_ties = true;
      out.tie_term += g * g * g - g;
    }
    i = j + 1;
  }
  out.all_equal = !pooled.empty() && pooled.front().value == pooled.back().value;
  return out;
}

/// Number of orderings giving each U value, for sample sizes m and n
/// (index u = 0..m*n). Uses f(m,n,u) = f(m-1,n,u-n) + f(m,n-1,u).
inline std::vector<double> u_null_counts(std::size_t m, std::size_t n) {
  // table[i][j] is the distribution for sizes (i, j); built row by row over i.
  std::vector<std::vector<double>> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = {1.0};  // i = 0
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = {1.0};
    for (std::size_t j = 1; j <= n; ++j) {
      std::vector<double> dist(i * j + 1, 0.0);
      // last element belongs to the first sample: contributes j to U
      for (std::size_t u = 0; u < prev[j].size(); ++u) dist[u + j] += prev[j][u];
      // last element belongs to the second sample
      for (std::size_t u = 0; u < cur[j - 1].size(); ++u) dist[u] += cur[j - 1][u];
      cur[j] = std::move(dist);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

inline double standard_normal_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace detail

/// Exact two-sided p-value of U_a for tie-free samples of sizes m and n.
inline double mann_whitney_exact_p(double u, std::size_t m, std::size_t n) {
  const std::vector<double> counts = detail::u_null_counts(m, n);
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const auto u_index = static_cast<std::size_t>(std::llround(u));
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (k <= u_index) lower += counts[k];
    if (k >= u_index) upper += counts[k];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / total);
}

/// Normal-approximation two-sided p-value with tie correction and 0.5
/// continuity correction.
inline double mann_whitney_normal_p(double u, std::size_t m, std::size_t n, double tie_term) {
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double total = md + nd;
  const double mean = md * nd / 2.0;
  const double variance = md * nd / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
  if (variance <= 0.0) return 1.0;
  const double distance = std::max(0.0, std::abs(u - mean) - 0.5);
  return std::min(1.0, 2.0 * detail::standard_normal_upper(distance / std::sqrt(variance)));
}

inline TestReport mann_whitney(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("mann_whitney: empty sample");
  const std::size_t m = a.size();
  const std::size_t n = b.size();
  const detail::RankSums ranks = detail::rank_sums(a, b);

  TestReport report;
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  if (ranks.all_equal) {
    report.u_statistic = md * nd / 2.0;
    report.p_value = 1.0;
    report.exact = true;
  } else {
    report.u_statistic = ranks.rank_sum_a - md * (md + 1.0) / 2.0;
    if (!ranks.has_ties && std::min(m, n) <= 8) {
      report.p_value = mann_whitney_exact_p(report.u_statistic, m, n);
      report.exact = true;
    } else {
      report.p_value = mann_whitney_normal_p(report.u_statistic, m, n, ranks.tie_term);
    }
  }
  report.significant = report.p_value < kSignificanceLevel;
  return report;
}

}  // namespace balcross
