#include "lgpkit/instruction_set.hpp"

#include <algorithm>
#include <set>

#include "lgpkit/errors.hpp"

namespace lgpkit {

InstructionSet::InstructionSet(std::vector<Instruction> members, const RegisterConfig& config)
    : members_(std::move(members)), config_(config) {
  config_.validate();
  if (members_.empty()) throw InputError("instruction set is empty");
  std::set<Instruction> seen;
  for (const auto& ins : members_) {
    if (!config_.valid(ins)) throw InputError("instruction '" + to_string(ins) + "' is invalid");
    if (!seen.insert(ins).second) {
      throw InputError("duplicate instruction '" + to_string(ins) + "'");
    }
  }
}

InstructionSet build_default(const RegisterConfig& config, std::span<const Func> funcs) {
  config.validate();
  if (funcs.empty()) throw InputError("function list is empty");
  const std::size_t width = config.gamma + config.num_features;
  auto operand = [&](std::size_t k) {
    return k < config.gamma ? Operand::reg(static_cast<std::uint16_t>(k))
                            : Operand::feature(static_cast<std::uint16_t>(k - config.gamma));
  };
  std::vector<Instruction> members;
  members.reserve(config.gamma * funcs.size() * width * width);
  for (std::size_t d = 0; d < config.gamma; ++d) {
    for (Func f : funcs) {
      for (std::size_t a = 0; a < width; ++a) {
        for (std::size_t b = 0; b < width; ++b) {
          members.push_back({static_cast<std::uint16_t>(d), f, operand(a), operand(b), {}});
        }
      }
    }
  }
  return InstructionSet(std::move(members), config);
}

InstructionSet build_default(const RegisterConfig& config) {
  const auto funcs = default_functions();
  return build_default(config, funcs);
}

const std::vector<std::string>& variant_names() {
  static const std::vector<std::string> names = {"default", "fx1.1", "fx2",     "fx4",
                                                 "exp",     "add+100", "add+1000"};
  return names;
}

InstructionSet build_variant(std::string_view name, const InstructionSet& base) {
  const auto& cfg = base.config();
  std::vector<Instruction> members(base.members().begin(), base.members().end());

  auto scaled = [&](double c) {
    for (const auto& ins : base.members()) {
      Instruction w = ins;
      w.transform.scale *= c;
      members.push_back(w);
    }
  };
  auto offset = [&](double c) {
    for (const auto& ins : base.members()) {
      if (ins.func != Func::Add) continue;
      Instruction w = ins;
      w.transform.offset += c;
      members.push_back(w);
    }
  };

  if (name == "default") {
    return base;
  } else if (name == "fx1.1") {
    scaled(1.1);
  } else if (name == "fx2") {
    scaled(2.0);
  } else if (name == "fx4") {
    scaled(4.0);
  } else if (name == "add+100") {
    offset(100.0);
  } else if (name == "add+1000") {
    offset(1000.0);
  } else if (name == "exp") {
    const std::size_t width = cfg.gamma + cfg.num_features;
    for (std::size_t d = 0; d < cfg.gamma; ++d) {
      for (std::size_t a = 0; a < width; ++a) {
        const auto src = a < cfg.gamma
                             ? Operand::reg(static_cast<std::uint16_t>(a))
                             : Operand::feature(static_cast<std::uint16_t>(a - cfg.gamma));
        Instruction e{static_cast<std::uint16_t>(d), Func::Exp, src, src, {}};
        if (std::find(members.begin(), members.end(), e) == members.end()) members.push_back(e);
      }
    }
  } else {
    throw InputError("unknown instruction-set variant '" + std::string(name) + "'");
  }
  return InstructionSet(std::move(members), cfg);
}

} // namespace lgpkit
