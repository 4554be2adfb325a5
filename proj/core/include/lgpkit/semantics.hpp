#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lgpkit/instruction.hpp"
#include "lgpkit/program.hpp"

namespace lgpkit {

/// Register and feature values for every fitness case, laid out as
/// num_cases blocks of [gamma register values | B feature values].
class Semantics {
public:
  Semantics() = default;
  Semantics(std::size_t num_cases, std::size_t gamma, std::size_t num_features);

  std::size_t num_cases() const noexcept { return num_cases_; }
  std::size_t gamma() const noexcept { return gamma_; }
  std::size_t num_features() const noexcept { return num_features_; }
  std::size_t block_size() const noexcept { return gamma_ + num_features_; }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::span<const double> block(std::size_t c) const noexcept {
    return std::span<const double>(values_).subspan(c * block_size(), block_size());
  }
  std::span<double> block(std::size_t c) noexcept {
    return std::span<double>(values_).subspan(c * block_size(), block_size());
  }

  double reg(std::size_t c, std::size_t r) const noexcept { return values_[c * block_size() + r]; }
  double feature(std::size_t c, std::size_t j) const noexcept {
    return values_[c * block_size() + gamma_ + j];
  }

  friend bool operator==(const Semantics&, const Semantics&) = default;

private:
  std::size_t num_cases_ = 0;
  std::size_t gamma_ = 0;
  std::size_t num_features_ = 0;
  std::vector<double> values_;
};

/// Register i of every case starts as feature (i mod B).
Semantics init_registers(const RegisterConfig& config,
                         const std::vector<std::vector<double>>& cases);
/// Same, from a row-major num_cases x B feature matrix.
Semantics init_registers(const RegisterConfig& config, std::span<const double> features,
                         std::size_t num_cases);

/// Apply one instruction to every case in place.
void apply(const Instruction& ins, Semantics& s);
void apply_block(const Instruction& ins, std::span<double> block, std::size_t gamma) noexcept;

Semantics execute(const Program& program, const Semantics& input, const RegisterConfig& config);
Semantics execute(std::span<const Instruction> instructions, const Semantics& input,
                  const RegisterConfig& config);

/// Input semantics followed by the semantics after each instruction
/// (m + 1 entries).
std::vector<Semantics> execute_trace(std::span<const Instruction> instructions,
                                     const Semantics& input, const RegisterConfig& config);

/// Euclidean norm of the difference over the full A x (gamma + B) vector.
double distance(const Semantics& a, const Semantics& b);

} // namespace lgpkit
