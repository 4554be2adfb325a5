#include "lgpkit/tiny_spaces.hpp"

#include <cmath>
#include <set>

#include "lgpkit/errors.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

namespace {

Instruction ins(std::uint16_t dest, Func f, Operand a, Operand b) { return {dest, f, a, b, {}}; }

const std::vector<std::vector<double>>& default_probes() {
  static const std::vector<std::vector<double>> probes = {{0.5}, {1.5}, {2.5}, {-1.25}, {3.1}};
  return probes;
}

RegisterConfig registers(std::size_t gamma, std::vector<std::uint16_t> outputs) {
  RegisterConfig c;
  c.gamma = gamma;
  c.output_registers = std::move(outputs);
  c.num_features = 1;
  return c;
}

// R_d = f(R_s, x0) for every listed destination, function and source register.
std::vector<Instruction> register_feature_set(std::size_t gamma, const std::vector<Func>& funcs) {
  std::vector<Instruction> out;
  for (std::uint16_t d = 0; d < gamma; ++d) {
    for (Func f : funcs) {
      for (std::uint16_t s = 0; s < gamma; ++s) {
        out.push_back(ins(d, f, Operand::reg(s), Operand::feature(0)));
      }
    }
  }
  return out;
}

} // namespace

void TinySpace::validate() const {
  config.validate();
  if (instructions.empty() || instructions.size() > kTinyMaxInstructions) {
    throw InputError("tiny space needs 1..12 instructions");
  }
  if (m_max > kTinyMaxSize) throw InputError("tiny space m_max must be at most 5");
  std::set<Instruction> seen;
  for (const auto& i : instructions) {
    if (!config.valid(i)) throw InputError("invalid instruction '" + to_string(i) + "'");
    if (!seen.insert(i).second) throw InputError("duplicate instruction '" + to_string(i) + "'");
  }
  if (reference.empty()) throw InputError("reference program is empty");
  for (const auto& i : reference) {
    if (!config.valid(i)) throw InputError("invalid reference instruction '" + to_string(i) + "'");
  }
  if (probes.empty()) throw InputError("tiny space needs probe cases");
  for (const auto& p : probes) {
    if (p.size() != config.num_features) throw InputError("probe has the wrong feature count");
  }
  double layers = 0.0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    layers += std::pow(static_cast<double>(instructions.size()), static_cast<double>(m));
  }
  if (layers > kLayerGuard) {
    throw GuardViolation("enumeration of " + detail::format_double(layers) +
                             " programs exceeds the guard",
                         layers);
  }
}

std::vector<TinySpace> bundled_tiny_spaces() {
  std::vector<TinySpace> spaces;
  const auto r0 = Operand::reg(0);
  const auto r1 = Operand::reg(1);
  const auto x0 = Operand::feature(0);

  {
    TinySpace s;
    s.name = "g1-addmul-double";
    s.config = registers(1, {0});
    s.instructions = register_feature_set(1, {Func::Add, Func::Mul});
    s.m_max = 5;
    s.probes = default_probes();
    s.reference = {ins(0, Func::Add, r0, x0)};
    spaces.push_back(s);
  }
  {
    TinySpace s;
    s.name = "g1-addmul-square-plus";
    s.config = registers(1, {0});
    s.instructions = register_feature_set(1, {Func::Add, Func::Mul});
    s.m_max = 5;
    s.probes = default_probes();
    s.reference = {ins(0, Func::Mul, r0, x0), ins(0, Func::Add, r0, x0)};
    spaces.push_back(s);
  }
  {
    TinySpace s;
    s.name = "g1-arith4";
    s.config = registers(1, {0});
    s.instructions = register_feature_set(1, {Func::Add, Func::Sub, Func::Mul, Func::Div});
    s.m_max = 4;
    s.probes = default_probes();
    s.reference = {ins(0, Func::Add, r0, x0), ins(0, Func::Mul, r0, x0)};
    spaces.push_back(s);
  }
  {
    TinySpace s;
    s.name = "g2-addmul";
    s.config = registers(2, {0});
    s.instructions = register_feature_set(2, {Func::Add, Func::Mul});
    s.m_max = 3;
    s.probes = default_probes();
    s.reference = {ins(0, Func::Mul, r0, x0)};
    spaces.push_back(s);
  }
  {
    TinySpace s;
    s.name = "g2-arith3";
    s.config = registers(2, {0});
    s.instructions = register_feature_set(2, {Func::Add, Func::Sub, Func::Mul});
    s.m_max = 2;
    s.probes = default_probes();
    s.reference = {ins(1, Func::Mul, r1, x0), ins(0, Func::Add, r0, r1)};
    spaces.push_back(s);
  }
  return spaces;
}

TinySpace bundled_tiny_space(std::string_view name) {
  for (auto& s : bundled_tiny_spaces()) {
    if (s.name == name) return s;
  }
  throw InputError("unknown tiny space '" + std::string(name) + "'");
}

std::vector<BloatCase> bloat_cases() {
  std::vector<BloatCase> out;
  auto add = [](std::uint16_t d, std::uint16_t a, std::uint16_t b) {
    return ins(d, Func::Add, Operand::reg(a), Operand::reg(b));
  };

  std::vector<std::pair<std::size_t, std::vector<Instruction>>> sets;
  {
    std::vector<Instruction> s;
    for (std::uint16_t d = 0; d < 2; ++d)
      for (std::uint16_t a = 0; a < 2; ++a)
        for (std::uint16_t b = 0; b < 2; ++b) s.push_back(add(d, a, b));
    sets.emplace_back(2, s);
  }
  {
    std::vector<Instruction> s;
    for (std::uint16_t d = 0; d < 3; ++d)
      for (std::uint16_t a = 0; a < 3; ++a)
        for (std::uint16_t b = a + 1; b < 3; ++b) s.push_back(add(d, a, b));
    sets.emplace_back(3, s);
  }
  {
    std::vector<Instruction> s;
    for (std::uint16_t d = 0; d < 4; ++d) {
      const auto r = [d](int k) { return static_cast<std::uint16_t>((d + k) % 4); };
      s.push_back(add(d, r(1), r(2)));
      s.push_back(add(d, r(1), r(3)));
      s.push_back(add(d, r(2), r(3)));
    }
    sets.emplace_back(4, s);
  }

  for (const auto& [gamma, set] : sets) {
    for (std::size_t gout = 1; gout <= 2; ++gout) {
      for (std::size_t step = 1; step <= 2; ++step) {
        BloatCase c;
        c.config = registers(gamma, gout == 1 ? std::vector<std::uint16_t>{0}
                                              : std::vector<std::uint16_t>{0, 1});
        c.instructions = set;
        c.m1 = 2;
        c.m2 = 2 + step;
        c.name = "gamma" + std::to_string(gamma) + "-out" + std::to_string(gout) + "-n" +
                 std::to_string(set.size()) + "-m" + std::to_string(c.m1) + "to" +
                 std::to_string(c.m2);
        out.push_back(c);
      }
    }
  }
  return out;
}

} // namespace lgpkit
