#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lgpkit {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(std::span<const double> xs);

/// 1-based ranks with ties given their average rank.
std::vector<double> midranks(std::span<const double> xs);

double spearman(std::span<const double> x, std::span<const double> y);

struct RankSumResult {
  double w = 0.0; // rank sum of the first sample
  double p_value = 1.0;
  bool exact = false;
};

/// Two-sided Wilcoxon rank-sum test. Uses the exact null distribution when
/// both samples have at most 25 values and there are no ties, otherwise the
/// tie-corrected normal approximation with continuity correction.
RankSumResult rank_sum_test(std::span<const double> a, std::span<const double> b);

struct FriedmanResult {
  std::vector<double> mean_ranks; // one per treatment; rank 1 = smallest value
  double statistic = 0.0;
  double p_value = 1.0;
};

/// values[block][treatment]. Ranks within each block, ties averaged.
FriedmanResult friedman(const std::vector<std::vector<double>>& values);

struct ChiSquareResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Goodness of fit of observed counts to expected counts (df = k - 1).
ChiSquareResult chi_square_gof(std::span<const double> observed, std::span<const double> expected);

} // namespace lgpkit
