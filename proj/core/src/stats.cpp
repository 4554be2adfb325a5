#include "lgpkit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "lgpkit/errors.hpp"

namespace lgpkit {

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

std::vector<double> midranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("spearman needs paired samples");
  const auto rx = midranks(x);
  const auto ry = midranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("rank-sum test needs two non-empty samples");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  const std::size_t n1 = a.size();
  const std::size_t n2 = b.size();
  const std::size_t total = n1 + n2;

  RankSumResult r;
  for (std::size_t i = 0; i < n1; ++i) r.w += ranks[i];

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  const bool ties = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();

  if (!ties && n1 <= 25 && n2 <= 25) {
    // ways[k][s]: subsets of {1..N} with k elements summing to s.
    const std::size_t max_sum = total * (total + 1) / 2;
    std::vector<std::vector<double>> ways(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
    ways[0][0] = 1.0;
    for (std::size_t v = 1; v <= total; ++v) {
      for (std::size_t k = std::min(n1, v); k >= 1; --k) {
        for (std::size_t s = max_sum; s >= v; --s) ways[k][s] += ways[k - 1][s - v];
      }
    }
    const double all = std::accumulate(ways[n1].begin(), ways[n1].end(), 0.0);
    const auto w = static_cast<std::size_t>(std::llround(r.w));
    double lower = 0.0, upper = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
      if (s <= w) lower += ways[n1][s];
      if (s >= w) upper += ways[n1][s];
    }
    r.p_value = std::min(1.0, 2.0 * std::min(lower, upper) / all);
    r.exact = true;
    return r;
  }

  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(total);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  const double var = dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (!(var > 0.0)) {
    r.p_value = 1.0;
    return r;
  }
  const double u = r.w - dn1 * (dn1 + 1.0) / 2.0;
  const double diff = std::fabs(u - dn1 * dn2 / 2.0);
  const double z = std::max(0.0, diff - 0.5) / std::sqrt(var);
  const boost::math::normal_distribution<double> normal;
  r.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(normal, z)));
  return r;
}

FriedmanResult friedman(const std::vector<std::vector<double>>& values) {
  if (values.empty()) throw InputError("friedman needs at least one block");
  const std::size_t k = values.front().size();
  if (k < 1) throw InputError("friedman needs at least one treatment");
  FriedmanResult res;
  res.mean_ranks.assign(k, 0.0);
  for (const auto& block : values) {
    if (block.size() != k) throw InputError("friedman blocks differ in size");
    const auto ranks = midranks(block);
    for (std::size_t j = 0; j < k; ++j) res.mean_ranks[j] += ranks[j];
  }
  const double b = static_cast<double>(values.size());
  const double dk = static_cast<double>(k);
  double sum_sq = 0.0;
  for (auto& r : res.mean_ranks) {
    sum_sq += r * r;
    r /= b;
  }
  if (k < 2) return res;
  res.statistic = 12.0 / (b * dk * (dk + 1.0)) * sum_sq - 3.0 * b * (dk + 1.0);
  const boost::math::chi_squared_distribution<double> chi(dk - 1.0);
  res.p_value = boost::math::cdf(boost::math::complement(chi, std::max(0.0, res.statistic)));
  return res;
}

ChiSquareResult chi_square_gof(std::span<const double> observed,
                               std::span<const double> expected) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw InputError("chi-square needs matching observed and expected counts");
  }
  ChiSquareResult r;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (!(expected[i] > 0.0)) throw InputError("expected counts must be positive");
    const double d = observed[i] - expected[i];
    r.statistic += d * d / expected[i];
  }
  const boost::math::chi_squared_distribution<double> chi(static_cast<double>(observed.size() - 1));
  r.p_value = boost::math::cdf(boost::math::complement(chi, r.statistic));
  return r;
}

} // namespace lgpkit
