#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgpkit/bounds.hpp"
#include "lgpkit/tiny_spaces.hpp"

namespace lgpkit {

inline constexpr std::uint8_t kUnreached = 0xFF;

/// Programs of one size are numbered in base n, first instruction most
/// significant.
class ProgramCodec {
public:
  ProgramCodec(std::size_t n, std::size_t max_size);

  std::size_t n() const noexcept { return n_; }
  std::size_t max_size() const noexcept { return pow_.size() - 1; }
  std::uint64_t layer_size(std::size_t s) const { return pow_[s]; }

  std::vector<std::size_t> decode(std::size_t size, std::uint64_t index) const;
  std::uint64_t encode(const std::vector<std::size_t>& digits) const;
  std::uint64_t insert(std::size_t size, std::uint64_t index, std::size_t pos,
                       std::size_t digit) const;
  std::uint64_t erase(std::size_t size, std::uint64_t index, std::size_t pos) const;

private:
  std::size_t n_;
  std::vector<std::uint64_t> pow_;
};

/// Exact delta* for every program of size <= m_max.
struct DeltaStarTable {
  std::size_t n = 0;
  std::size_t m_max = 0;
  std::size_t m_star = 0;
  /// Largest size held in the search universe, 2 m_max + m*.
  std::size_t universe_size = 0;
  /// dist[s][index] for s <= universe_size. Entries for s > m_max are only
  /// distances within the truncated universe.
  std::vector<std::vector<std::uint8_t>> dist;
  std::vector<std::vector<std::uint8_t>> optimal;

  std::uint8_t delta_star(std::size_t size, std::uint64_t index) const {
    return dist[size][index];
  }
};

/// Flags programs whose outputs match the reference on the probes, for all
/// sizes up to 2 m_max + m*, and the smallest optimal size m*.
DeltaStarTable find_optimal_programs(const TinySpace& space);

/// Multi-source breadth-first search from every optimal program over
/// single-instruction insertions and deletions.
DeltaStarTable enumerate_delta_star(const TinySpace& space);

/// Independent recount for sizes <= m_max: delete down to a kept
/// subsequence, then insert up to the nearest optimal supersequence, with the
/// insert-only distances filled by dynamic programming from the largest size
/// downward. Uses only the optimal flags of `table`.
std::vector<std::vector<std::uint8_t>> recount_delta_star(const DeltaStarTable& table);

struct LayerStats {
  std::size_t n = 0;
  std::size_t m_max = 0;
  std::size_t m_star = 0;
  /// counts[m][d] = number of size-m programs with delta* = d.
  std::vector<std::vector<std::uint64_t>> counts;

  std::uint64_t layer_total(std::size_t m) const;
  Rational probability(std::size_t m, std::size_t d) const;
  Rational expectation(std::size_t m) const;
  std::string to_csv() const;
};

LayerStats layer_stats(const DeltaStarTable& table);

struct DeltaStarBoundsReport {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
};
DeltaStarBoundsReport verify_delta_star_bounds(const DeltaStarTable& table);

struct SimilarDeltaReport {
  Rational difference;
  bool within = false;
};
SimilarDeltaReport verify_similar_delta_probability(const LayerStats& stats, std::size_t d,
                                                    std::size_t m, const Rational& eps_check);

struct ExpectationReport {
  std::size_t m_from = 0;
  /// margins[k] = E[delta* | P_{m_from+k+1}] - E[delta* | P_{m_from+k}].
  std::vector<Rational> margins;
  std::size_t violations = 0;
};
/// Checks strict growth of E[delta* | P_m] over m_from..m_max.
ExpectationReport verify_expectation_growth(const LayerStats& stats, std::size_t m_from = 1);

struct BloatReport {
  std::size_t m = 0;
  std::size_t d_m = 0;
  std::optional<Rational> remove; // size m - 1, absent when m == 0
  Rational keep;                  // size m
  Rational add;                   // size m + 1
  bool corollary_holds = false;   // add >= keep
  bool remark_holds = false;      // add >= remove (vacuous without a remove layer)
};
/// Expected reduction sum_{d <= d_m} Pr_{m'}(d) (d_m - d) for m' in {m-1, m, m+1}.
Rational expected_reduction(const LayerStats& stats, std::size_t m, std::size_t d_m);
BloatReport verify_bloat_expectation(const LayerStats& stats, std::size_t m, std::size_t d_m);
/// Every cell with m_from <= m < m_max and d_m <= m*.
std::vector<BloatReport> sweep_bloat_expectation(const LayerStats& stats, std::size_t m_from = 1);

/// Relative square error of every program of size <= m_max, indexed like
/// the table layers, against the reference outputs on the probes.
std::vector<std::vector<double>> program_fitness(const TinySpace& space);

struct FitnessBucketRow {
  std::size_t d = 0;
  std::int64_t bucket = 0;
  std::uint64_t new_with_v = 0;  // |P^(d+1,v) \ P^(d,v)|
  std::uint64_t new_total = 0;   // |P^(d+1) \ P^d|
  std::uint64_t with_v = 0;      // |P^(d,v)|
  std::uint64_t total = 0;       // |P^d|
  std::uint64_t with_v_next = 0; // |P^(d+1,v)|
  std::uint64_t total_next = 0;  // |P^(d+1)|
  bool hypothesis = false;
  bool conclusion = false;
};
struct FitnessProbabilityReport {
  double bucket_width = 0.05;
  std::vector<FitnessBucketRow> rows;
  std::size_t hypothesis_held = 0;
  std::size_t implication_failures = 0; // hypothesis true, conclusion false
  bool degenerate = false;              // a single fitness bucket overall
};
/// Programs of every size 0..m_max are pooled; P^d holds those with delta* <= d.
FitnessProbabilityReport verify_fitness_probability_condition(
    const DeltaStarTable& table, const std::vector<std::vector<double>>& fitness,
    double bucket_width = 0.05);

struct FitnessGapReport {
  DeltaConstants constants;
  std::size_t max_len = 0;
  std::uint64_t pairs = 0;
  std::uint64_t linear_violations = 0;    // gap > f_psi (i_sq d + i_star (L - d))
  std::uint64_t saturated_violations = 0; // gap > f_psi psi
};
/// Pads every program of size <= max_len (and every optimal one) to
/// max_len with an identity instruction, computes the distance constants as
/// exact suprema over the padded semantics, and checks every
/// (program, optimal program) pair. `f_psi_scale` rescales the fitness
/// constant before checking.
FitnessGapReport verify_fitness_gap(const TinySpace& space, const DeltaStarTable& table,
                                    std::size_t max_len, double f_psi_scale = 1.0);

struct BloatingFactors {
  Rational omega;
  Rational lambda;
};
/// Averages, over all size-m1 programs, the number of distinct size-m2
/// programs obtained by inserting m2 - m1 instructions that are all introns
/// (omega) or all exons (lambda) in the result.
BloatingFactors exact_bloating_factors(const RegisterConfig& config,
                                       const std::vector<Instruction>& instructions,
                                       std::size_t m1, std::size_t m2);

} // namespace lgpkit
