#pragma once

// Rank-based comparison of algorithms over a set of problem instances:
// average ranks, tie-corrected Friedman test, Nemenyi all-pairs post-hoc via
// the studentized range distribution, and pairwise Wilcoxon signed-rank tests
// with Bonferroni adjustment.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mfl/error.hpp"
#include "mfl/model.hpp"

namespace mfl::stats {

/// N instances (rows) by g algorithms (columns). Lower values are better.
struct ResultMatrix {
  std::vector<std::string> labels;    // algorithm names, one per column
  std::vector<std::string> row_ids;   // instance ids, one per row (may be empty)
  std::vector<std::vector<double>> rows;

  int n() const { return static_cast<int>(rows.size()); }
  int g() const { return static_cast<int>(labels.size()); }
  std::vector<double> column(int j) const {
    std::vector<double> c;
    c.reserve(rows.size());
    for (const auto& row : rows) c.push_back(row[j]);
    return c;
  }
};

inline void require_complete(const ResultMatrix& m) {
  if (m.g() < 2 || m.n() < 2) throw Error(Errc::IncompleteMatrix, "need at least 2 rows and 2 columns");
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    if (static_cast<int>(m.rows[i].size()) != m.g())
      throw Error(Errc::IncompleteMatrix, "row " + std::to_string(i) + " has the wrong number of cells");
    for (double v : m.rows[i])
      if (!std::isfinite(v)) throw Error(Errc::IncompleteMatrix, "row " + std::to_string(i) + " has a missing cell");
  }
}

/// Ranks 1..n of the values, ascending; ties share the mean of their positions.
inline std::vector<double> rank_with_ties(const std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
    const double mean = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mean;
    i = j + 1;
  }
  return rank;
}

/// Sum over tie groups of (t^3 - t).
inline double tie_term(const std::vector<double>& v) {
  auto s = v;
  std::sort(s.begin(), s.end());
  double total = 0.0;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    total += t * t * t - t;
    i = j + 1;
  }
  return total;
}

/// Within-row ranks (row-major N x g).
inline std::vector<std::vector<double>> average_ranks(const ResultMatrix& m) {
  require_complete(m);
  std::vector<std::vector<double>> out;
  out.reserve(m.rows.size());
  for (const auto& row : m.rows) out.push_back(rank_with_ties(row));
  return out;
}

inline std::vector<double> mean_ranks(const std::vector<std::vector<double>>& ranks) {
  std::vector<double> mean(ranks.front().size(), 0.0);
  for (const auto& row : ranks)
    for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
  for (auto& x : mean) x /= static_cast<double>(ranks.size());
  return mean;
}

/// Upper tail of the chi-squared distribution.
inline double chi2_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

/// log10 of the chi-squared upper tail; stays finite where chi2_sf underflows.
inline double chi2_log10_sf(double x, double df) {
  const double p = chi2_sf(x, df);
  if (p > 0.0) return std::log10(p);
  // Q(a, z) ~ z^(a-1) e^(-z) / Gamma(a) * (1 + (a-1)/z + ...)
  const double a = 0.5 * df, z = 0.5 * x;
  const double ln = (a - 1.0) * std::log(z) - z - std::lgamma(a) + std::log1p((a - 1.0) / z);
  return ln / std::log(10.0);
}

struct FriedmanResult {
  double chi2 = 0.0;
  int df = 0;
  double p = 1.0;
  double log10_p = 0.0;
};

/// Tie-corrected Friedman statistic:
///   12 * sum_j (R_j - N(g+1)/2)^2 / (N g (g+1) - sum_ties (t^3 - t) / (g - 1)).
/// A matrix whose every row is fully tied yields (0, g-1, 1).
inline FriedmanResult friedman(const ResultMatrix& m) {
  const auto ranks = average_ranks(m);
  const double N = m.n(), g = m.g();
  std::vector<double> sums(m.g(), 0.0);
  for (const auto& row : ranks)
    for (int j = 0; j < m.g(); ++j) sums[j] += row[j];
  double ss = 0.0;
  for (double s : sums) ss += (s - N * (g + 1) / 2) * (s - N * (g + 1) / 2);
  double ties = 0.0;
  for (const auto& row : m.rows) ties += tie_term(row);
  const double denom = N * g * (g + 1) - ties / (g - 1);

  FriedmanResult r;
  r.df = m.g() - 1;
  if (denom <= 0.0) return r;
  r.chi2 = 12.0 * ss / denom;
  r.p = chi2_sf(r.chi2, r.df);
  r.log10_p = chi2_log10_sf(r.chi2, r.df);
  return r;
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
inline double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }

/// P(Q > q) for the studentized range of k independent standard normals
/// (infinite degrees of freedom):
///   1 - F(q) = k * Int phi(z) [Phi(z)^(k-1) - (Phi(z) - Phi(z-q))^(k-1)] dz.
/// The bracket is expanded as b * sum a^i (a-b)^(k-2-i) with a = Phi(z),
/// b = Phi(z-q), so small tails are computed without cancellation.
inline double studentized_range_sf(double q, int k) {
  if (k < 2) throw Error(Errc::InvalidParams, "studentized range needs k >= 2");
  if (!(q > 0.0)) return 1.0;
  auto integrand = [q, k](double z) {
    const double a = normal_cdf(z);
    const double b = normal_cdf(z - q);
    const double c = a - b;
    double sum = 0.0, ai = 1.0;
    for (int i = 0; i <= k - 2; ++i) {
      sum += ai * std::pow(c, k - 2 - i);
      ai *= a;
    }
    return normal_pdf(z) * b * sum;
  };
  // phi(z) is below 1e-18 outside [-9, 9]; the tail integrand also decays by q.
  double err = 0.0;
  const double v = k * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                           integrand, -9.0, 9.0 + q, 12, 1e-13, &err);
  return std::clamp(v, 0.0, 1.0);
}

/// Upper-alpha quantile of the studentized range (infinite df), by bisection.
inline double studentized_range_isf(double alpha, int k) {
  double lo = 0.0, hi = 20.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (studentized_range_sf(mid, k) > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

using PMatrix = std::vector<std::vector<double>>;  // g x g; NaN on the diagonal

inline PMatrix empty_pmatrix(int g) {
  return PMatrix(g, std::vector<double>(g, std::numeric_limits<double>::quiet_NaN()));
}

/// Nemenyi all-pairs test: q = |Rbar_i - Rbar_j| / sqrt(g(g+1)/(12N)),
/// p = P(Q > q) for the studentized range with g groups and infinite df.
inline PMatrix nemenyi(const ResultMatrix& m) {
  const auto mean = mean_ranks(average_ranks(m));
  const double se = std::sqrt(m.g() * (m.g() + 1.0) / (12.0 * m.n()));
  auto p = empty_pmatrix(m.g());
  for (int i = 0; i < m.g(); ++i)
    for (int j = i + 1; j < m.g(); ++j) p[i][j] = p[j][i] = studentized_range_sf(std::abs(mean[i] - mean[j]) / se, m.g());
  return p;
}

/// Sample sizes up to this use the exact null distribution.
inline constexpr int kWilcoxonExactMaxN = 25;

struct WilcoxonResult {
  double p = 1.0;
  double w_plus = 0.0;  // sum of ranks of positive differences
  int n = 0;            // nonzero differences
  bool exact = false;
};

/// Two-sided Wilcoxon signed-rank test of x - y. Zero differences are dropped;
/// tied |differences| share average ranks. Exact null distribution (over the
/// actual, possibly tied, ranks) for n <= 25; otherwise the normal
/// approximation with tie-corrected variance and continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(Errc::LengthMismatch, "wilcoxon needs equal-length samples");
  if (x.size() < 2) throw Error(Errc::LengthMismatch, "wilcoxon needs at least 2 pairs");
  std::vector<double> diff, mag;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    if (d != 0.0) {
      diff.push_back(d);
      mag.push_back(std::abs(d));
    }
  }
  WilcoxonResult res;
  res.n = static_cast<int>(diff.size());
  if (res.n == 0) return res;
  const auto rank = rank_with_ties(mag);
  for (int i = 0; i < res.n; ++i)
    if (diff[i] > 0) res.w_plus += rank[i];
  const double n = res.n;

  if (res.n <= kWilcoxonExactMaxN) {
    // Doubled ranks are integers; count sign patterns by doubled W+.
    std::vector<int> r2(res.n);
    int total = 0;
    for (int i = 0; i < res.n; ++i) total += r2[i] = static_cast<int>(std::lround(2.0 * rank[i]));
    std::vector<double> count(static_cast<std::size_t>(total) + 1, 0.0);
    count[0] = 1.0;
    int reach = 0;
    for (int r : r2) {
      for (int s = reach; s >= 0; --s)
        if (count[s] != 0.0) count[s + r] += count[s];
      reach += r;
    }
    const int w2 = static_cast<int>(std::lround(2.0 * res.w_plus));
    double lower = 0.0, upper = 0.0;
    for (int s = 0; s <= total; ++s) {
      if (s <= w2) lower += count[s];
      if (s >= w2) upper += count[s];
    }
    const double all = std::ldexp(1.0, res.n);
    res.p = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    res.exact = true;
    return res;
  }

  const double mean = n * (n + 1) / 4.0;
  const double var = n * (n + 1) * (2 * n + 1) / 24.0 - tie_term(mag) / 48.0;
  if (var <= 0.0) return res;
  const double dev = std::max(0.0, std::abs(res.w_plus - mean) - 0.5);
  const double z = dev / std::sqrt(var);
  res.p = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return res;
}

/// Each p multiplied by the number of comparisons, clamped at 1. NaNs pass through.
inline PMatrix bonferroni_adjust(const PMatrix& p, int comparisons) {
  if (comparisons < 1) throw Error(Errc::InvalidParams, "comparisons must be >= 1");
  auto out = p;
  for (auto& row : out)
    for (auto& v : row)
      if (!std::isnan(v)) v = std::min(1.0, v * comparisons);
  return out;
}

inline double bonferroni_adjust(double p, int comparisons) {
  if (comparisons < 1) throw Error(Errc::InvalidParams, "comparisons must be >= 1");
  return std::min(1.0, p * comparisons);
}

/// Raw pairwise Wilcoxon p-values between all columns.
inline PMatrix pairwise_wilcoxon(const ResultMatrix& m) {
  require_complete(m);
  auto p = empty_pmatrix(m.g());
  for (int i = 0; i < m.g(); ++i)
    for (int j = i + 1; j < m.g(); ++j) p[i][j] = p[j][i] = wilcoxon_signed_rank(m.column(i), m.column(j)).p;
  return p;
}

struct StatReport {
  std::vector<std::string> labels;
  int n = 0;
  std::vector<std::vector<double>> ranks;
  std::vector<double> mean_ranks;
  FriedmanResult friedman;
  PMatrix nemenyi_p;
  PMatrix wilcoxon_bonferroni_p;
};

/// Friedman, then Nemenyi, then Bonferroni-adjusted pairwise Wilcoxon.
inline StatReport compare(const ResultMatrix& m) {
  StatReport r;
  r.labels = m.labels;
  r.n = m.n();
  r.ranks = average_ranks(m);
  r.mean_ranks = mean_ranks(r.ranks);
  r.friedman = friedman(m);
  r.nemenyi_p = nemenyi(m);
  r.wilcoxon_bonferroni_p = bonferroni_adjust(pairwise_wilcoxon(m), m.g() * (m.g() - 1) / 2);
  return r;
}

}  // namespace mfl::stats
