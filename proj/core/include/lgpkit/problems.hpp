#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgpkit/instruction.hpp"
#include "lgpkit/program.hpp"
#include "lgpkit/semantics.hpp"

namespace lgpkit {

/// A x B feature matrix (row-major) with one target per row.
struct Dataset {
  std::string name;
  std::size_t num_features = 1;
  std::vector<double> features;
  std::vector<double> targets;

  std::size_t num_cases() const noexcept { return targets.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features).subspan(i * num_features, num_features);
  }

  /// Throws InputError unless A >= 2, the matrix shape matches and the
  /// target variance is positive.
  void validate() const;
};

struct SyntheticSpec {
  std::string name;
  std::size_t num_features;
  std::size_t default_points;
  double lo;
  double hi;
};

/// Nguyen4, Nguyen5, Nguyen7, Keijzer11, R1.
const std::vector<SyntheticSpec>& synthetic_problems();
const SyntheticSpec& synthetic_spec(std::string_view name);

/// Canonical target formula evaluated at one input row.
double synthetic_target(std::string_view name, std::span<const double> x);

/// Inputs drawn uniformly on [lo, hi]^B. n_points == 0 uses the default count.
Dataset gen_synthetic(std::string_view name, std::mt19937_64& rng, std::size_t n_points = 0);
Dataset gen_synthetic(std::string_view name, std::size_t n_points, double lo, double hi,
                      std::mt19937_64& rng);

/// Headered CSV, last column is the target.
Dataset read_csv(const std::string& path);
Dataset parse_csv(std::string_view text, std::string name = "csv");
std::string to_csv(const Dataset& data);

/// Shuffled split: round(train_frac * A) rows go to the training set.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::uint64_t split_seed,
                                          double train_frac = 0.7);
std::pair<Dataset, Dataset> load_csv(const std::string& path, std::uint64_t split_seed,
                                     double train_frac = 0.7);

/// Training and test sets for one run. Synthetic test sets are a fresh
/// sample from the same domain under a seed derived from (but distinct to)
/// the training seed.
struct Problem {
  Dataset train;
  Dataset test;
};

std::uint64_t test_seed_for(std::uint64_t seed) noexcept;
/// `name_or_path` is a synthetic name or a path to a CSV file.
Problem make_problem(std::string_view name_or_path, std::uint64_t seed);

/// Relative square error of a program on a dataset, reading predictions from
/// the first output register.
class Fitness {
public:
  Fitness(Dataset data, RegisterConfig config);

  double rse(std::span<const Instruction> instructions) const;
  double rse(const Program& program) const { return rse(program.instructions()); }
  std::vector<double> predict(std::span<const Instruction> instructions) const;

  const Dataset& data() const noexcept { return data_; }
  const RegisterConfig& config() const noexcept { return config_; }
  const Semantics& input() const noexcept { return input_; }

private:
  Dataset data_;
  RegisterConfig config_;
  Semantics input_;
  double mean_ = 0.0;
  double denom_ = 0.0;
};

/// Sum of squared residuals over the total sum of squares.
double rse(std::span<const double> predictions, std::span<const double> targets);

} // namespace lgpkit
