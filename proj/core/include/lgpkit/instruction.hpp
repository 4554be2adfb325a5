#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lgpkit {

/// Primitive functions. Every primitive is total: see apply_function().
enum class Func : std::uint8_t {
  Add,
  Sub,
  Mul,
  Div,
  Sin,
  Cos,
  Sqrt, // sqrt(|a|)
  Log,  // ln(|a|)
  Exp,
  Nop,  // identity; only used to pad programs to a fixed length
};

inline constexpr double kProtectEpsilon = 1e-9;
inline constexpr double kValueBound = 1e12;

int arity(Func f) noexcept;
std::string_view function_name(Func f) noexcept;
Func parse_function(std::string_view name);

/// The eight primitives used throughout the experiments:
/// {+, -, *, /, sin, cos, sqrt|.|, ln|.|}.
std::vector<Func> default_functions();

/// Raw primitive evaluation with protected division and logarithm.
double apply_function(Func f, double a, double b) noexcept;

/// NaN -> 0, then clamp into [-kValueBound, kValueBound].
double sanitize(double v) noexcept;

/// Source operand: a register or an input feature.
struct Operand {
  enum class Kind : std::uint8_t { Register, Feature };

  Kind kind = Kind::Register;
  std::uint16_t index = 0;

  static constexpr Operand reg(std::uint16_t i) noexcept { return {Kind::Register, i}; }
  static constexpr Operand feature(std::uint16_t i) noexcept { return {Kind::Feature, i}; }

  bool is_register() const noexcept { return kind == Kind::Register; }

  /// Offset of this operand inside one fitness-case block [registers | features].
  std::size_t slot(std::size_t gamma) const noexcept {
    return is_register() ? index : gamma + index;
  }

  friend bool operator==(const Operand&, const Operand&) = default;
  friend auto operator<=>(const Operand&, const Operand&) = default;
};

/// Affine post-processing of an instruction result: out = scale * raw + offset.
/// Used by the manipulated instruction sets (fx-c scales, add+c offsets).
struct OutputTransform {
  double scale = 1.0;
  double offset = 0.0;

  bool is_identity() const noexcept { return scale == 1.0 && offset == 0.0; }
  double apply(double raw) const noexcept { return scale * raw + offset; }

  friend bool operator==(const OutputTransform&, const OutputTransform&) = default;
  friend auto operator<=>(const OutputTransform&, const OutputTransform&) = default;
};

/// One register-machine statement: R[dest] = transform(func(src1, src2)).
/// Unary functions ignore src2 but still store it, so two instructions that
/// differ only in an inert src2 are different members of the instruction set.
struct Instruction {
  std::uint16_t dest = 0;
  Func func = Func::Add;
  Operand src1{};
  Operand src2{};
  OutputTransform transform{};

  bool reads_src2() const noexcept { return arity(func) == 2; }

  friend bool operator==(const Instruction&, const Instruction&) = default;
  friend auto operator<=>(const Instruction&, const Instruction&) = default;
};

/// Register file layout shared by programs, semantics and instruction sets.
struct RegisterConfig {
  std::size_t gamma = 8;
  std::vector<std::uint16_t> output_registers{0};
  std::size_t num_features = 1;

  std::size_t gamma_out() const noexcept { return output_registers.size(); }
  std::size_t block_size() const noexcept { return gamma + num_features; }

  /// Throws InputError when the invariants (1 <= gamma_out <= gamma,
  /// B >= 1, distinct in-range outputs) do not hold.
  void validate() const;

  bool valid(const Instruction& ins) const noexcept;

  static RegisterConfig with_defaults(std::size_t num_features);

  friend bool operator==(const RegisterConfig&, const RegisterConfig&) = default;
};

/// "R3 = div(R0, x1)", "R0 = 2 * add(R1, x0) + 100", "R1 = nop(R0, R0)".
std::string to_string(const Instruction& ins);
Instruction parse_instruction(std::string_view text);

} // namespace lgpkit
