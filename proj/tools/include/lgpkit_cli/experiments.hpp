#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgpkit/evolution.hpp"
#include "lgpkit/oracle.hpp"
#include "lgpkit/stats.hpp"
#include "lgpkit_cli/config.hpp"

namespace lgpkit::cli {

RegisterConfig register_config_for(const Dataset& data, std::size_t gamma);

// evolve

struct SeedRun {
  std::size_t u = 1;
  std::uint64_t seed = 0;
  EvolutionResult result;
  double test_rse = 0.0;
};

/// One run per (u, seed), ordered by u as configured, then by ascending seed.
std::vector<SeedRun> run_evolve(const ExperimentConfig& cfg);

struct AggregateRow {
  std::size_t generation = 0;
  double mean_best = 0.0, std_best = 0.0;
  double mean_fitness = 0.0, std_fitness = 0.0;
  double mean_size = 0.0, std_size = 0.0;
  double mean_exons = 0.0, std_exons = 0.0;
};

/// Mean and standard deviation across runs per generation. All traces must
/// have the same length.
std::vector<AggregateRow> aggregate_traces(const std::vector<const RunTrace*>& traces);
std::string aggregate_to_csv(const std::vector<AggregateRow>& rows);
/// u,seed,best_train_rse,test_rse,best_size,best_exons
std::string evolve_summary_csv(const std::vector<SeedRun>& runs, const RegisterConfig& config);

// sample

struct SampleRow {
  std::size_t m = 0;
  double mean_rse = 0.0;
  double std_rse = 0.0; // across seeds
};

/// Mean RSE of `count` random size-m programs on the training set of seed `seed`.
double sample_mean_rse(const std::string& problem, std::uint64_t seed, std::size_t m,
                       std::size_t count, std::size_t gamma);
std::vector<SampleRow> run_sample(const ExperimentConfig& cfg);
std::string sample_to_csv(const std::vector<SampleRow>& rows);

// study

struct StudyCell {
  std::vector<double> test_rse; // by ascending seed
  double mean = 0.0;
  double std = 0.0;
  std::optional<double> p_vs_default;
};

struct StudyResult {
  std::vector<std::string> problems;
  std::vector<std::string> variants;
  std::vector<std::vector<StudyCell>> cells; // [problem][variant]
  FriedmanResult ranks;                       // blocks = problems, rank 1 = lowest mean
};

StudyResult run_study(const ExperimentConfig& cfg);
std::string study_table_csv(const StudyResult& r);
std::string study_ranks_csv(const StudyResult& r);

// oracle

struct OracleCheck {
  std::string target;
  std::string check;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  bool gated = true; // informational checks never fail the command
};

struct BloatRow {
  std::string name;
  std::size_t m1 = 0, m2 = 0;
  double omega = 0.0, omega_lower = 0.0, omega_upper = 0.0;
  double lambda = 0.0, lambda_lower = 0.0, lambda_upper = 0.0;
  bool omega_inside = false;
  bool lambda_inside = false;
};

struct OracleResult {
  std::vector<OracleCheck> checks;
  std::vector<BloatRow> bloat;

  bool passed() const;
};

/// Verifications on one enumerated tiny space.
std::vector<OracleCheck> verify_tiny_space(const TinySpace& space, bool negative_control);
std::vector<BloatRow> verify_bloat_cases();

/// Throws GuardViolation when a configured space is too large to enumerate.
OracleResult run_oracle(const ExperimentConfig& cfg);
std::string oracle_checks_csv(const OracleResult& r);
std::string bloat_csv(const std::vector<BloatRow>& rows);

// bounds

/// quantity,lower,upper,note rows for the configured (m, m2, d, u) query.
std::string bounds_query_csv(const ExperimentConfig& cfg);

} // namespace lgpkit::cli
