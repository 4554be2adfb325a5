#include "lgpkit/semantics.hpp"

#include <cmath>
#include <string>

#include "lgpkit/errors.hpp"

namespace lgpkit {

Semantics::Semantics(std::size_t num_cases, std::size_t gamma, std::size_t num_features)
    : num_cases_(num_cases), gamma_(gamma), num_features_(num_features),
      values_(num_cases * (gamma + num_features), 0.0) {}

Semantics init_registers(const RegisterConfig& config, std::span<const double> features,
                         std::size_t num_cases) {
  config.validate();
  const std::size_t b = config.num_features;
  if (features.size() != num_cases * b) {
    throw InputError("feature matrix has " + std::to_string(features.size()) +
                     " values, expected " + std::to_string(num_cases * b));
  }
  Semantics s(num_cases, config.gamma, b);
  for (std::size_t c = 0; c < num_cases; ++c) {
    auto blk = s.block(c);
    const auto row = features.subspan(c * b, b);
    for (std::size_t r = 0; r < config.gamma; ++r) blk[r] = row[r % b];
    for (std::size_t j = 0; j < b; ++j) blk[config.gamma + j] = row[j];
  }
  return s;
}

Semantics init_registers(const RegisterConfig& config,
                         const std::vector<std::vector<double>>& cases) {
  std::vector<double> flat;
  flat.reserve(cases.size() * config.num_features);
  for (const auto& row : cases) {
    if (row.size() != config.num_features) {
      throw InputError("fitness case has " + std::to_string(row.size()) +
                       " features, expected " + std::to_string(config.num_features));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return init_registers(config, flat, cases.size());
}

void apply_block(const Instruction& ins, std::span<double> block, std::size_t gamma) noexcept {
  const double a = block[ins.src1.slot(gamma)];
  const double b = block[ins.src2.slot(gamma)];
  block[ins.dest] = sanitize(ins.transform.apply(apply_function(ins.func, a, b)));
}

void apply(const Instruction& ins, Semantics& s) {
  for (std::size_t c = 0; c < s.num_cases(); ++c) apply_block(ins, s.block(c), s.gamma());
}

Semantics execute(std::span<const Instruction> instructions, const Semantics& input,
                  const RegisterConfig& config) {
  if (input.gamma() != config.gamma || input.num_features() != config.num_features) {
    throw InputError("semantics layout does not match register config");
  }
  Semantics out = input;
  const std::size_t gamma = config.gamma;
  for (std::size_t c = 0; c < out.num_cases(); ++c) {
    auto blk = out.block(c);
    for (const auto& ins : instructions) apply_block(ins, blk, gamma);
  }
  return out;
}

Semantics execute(const Program& program, const Semantics& input, const RegisterConfig& config) {
  return execute(program.instructions(), input, config);
}

std::vector<Semantics> execute_trace(std::span<const Instruction> instructions,
                                     const Semantics& input, const RegisterConfig& config) {
  if (input.gamma() != config.gamma || input.num_features() != config.num_features) {
    throw InputError("semantics layout does not match register config");
  }
  std::vector<Semantics> trace;
  trace.reserve(instructions.size() + 1);
  trace.push_back(input);
  for (const auto& ins : instructions) {
    Semantics next = trace.back();
    apply(ins, next);
    trace.push_back(std::move(next));
  }
  return trace;
}

double distance(const Semantics& a, const Semantics& b) {
  if (a.values().size() != b.values().size()) {
    throw InputError("semantics dimensions differ");
  }
  double sum = 0.0;
  const auto va = a.values();
  const auto vb = b.values();
  for (std::size_t i = 0; i < va.size(); ++i) {
    const double d = va[i] - vb[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

} // namespace lgpkit
