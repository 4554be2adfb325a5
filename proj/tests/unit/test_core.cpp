#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "lgpkit/errors.hpp"
#include "lgpkit/instruction_set.hpp"
#include "lgpkit/introns.hpp"
#include "lgpkit/program.hpp"
#include "lgpkit/semantics.hpp"

using namespace lgpkit;

namespace {

RegisterConfig cfg(std::size_t gamma, std::size_t features) {
  RegisterConfig c;
  c.gamma = gamma;
  c.num_features = features;
  return c;
}

// The four-instruction example with one intron (third line).
std::vector<Instruction> figure_program() {
  return {
      parse_instruction("R3 = div(R0, x1)"),
      parse_instruction("R1 = mul(R3, x0)"),
      parse_instruction("R2 = sub(R1, x0)"),
      parse_instruction("R0 = add(R0, R1)"),
  };
}

} // namespace

TEST_CASE("init_registers alternates features across registers") {
  const auto s = init_registers(cfg(4, 2), std::vector<std::vector<double>>{{2, 3}});
  CHECK(s.reg(0, 0) == 2);
  CHECK(s.reg(0, 1) == 3);
  CHECK(s.reg(0, 2) == 2);
  CHECK(s.reg(0, 3) == 3);
  CHECK(s.feature(0, 0) == 2);
  CHECK(s.feature(0, 1) == 3);

  const auto one = init_registers(cfg(1, 1), std::vector<std::vector<double>>{{7}});
  CHECK(one.reg(0, 0) == 7);
  CHECK(one.feature(0, 0) == 7);

  const auto odd = init_registers(cfg(3, 2), std::vector<std::vector<double>>{{1, 5}});
  CHECK(odd.reg(0, 0) == 1);
  CHECK(odd.reg(0, 1) == 5);
  CHECK(odd.reg(0, 2) == 1);

  CHECK_THROWS_AS(init_registers(cfg(3, 2), std::vector<std::vector<double>>{{1}}), InputError);
}

TEST_CASE("execute follows the instructions in order") {
  const auto c = cfg(4, 2);
  const auto input = init_registers(c, std::vector<std::vector<double>>{{2, 3}});
  const auto prog = figure_program();

  const auto after_first = execute(std::span<const Instruction>(prog).first(1), input, c);
  CHECK(after_first.reg(0, 3) == doctest::Approx(0.67).epsilon(0.01));
  CHECK(after_first.reg(0, 3) == 2.0 / 3.0);

  // R3 = 2/3, R1 = 4/3, R2 = 4/3 - 2, R0 = 2 + 4/3.
  const auto out = execute(prog, input, c);
  CHECK(out.reg(0, 0) == doctest::Approx(10.0 / 3.0));
  CHECK(out.reg(0, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(out.reg(0, 2) == doctest::Approx(-2.0 / 3.0));

  CHECK(execute(std::span<const Instruction>{}, input, c) == input);

  const std::vector<Instruction> twice = {parse_instruction("R0 = add(x0, x0)")};
  CHECK(execute(twice, input, c).reg(0, 0) == 4.0);
}

TEST_CASE("primitives are total") {
  CHECK(apply_function(Func::Div, 5.0, 0.0) == 5.0);
  CHECK(apply_function(Func::Div, 5.0, 1e-10) == 5.0);
  CHECK(apply_function(Func::Div, 6.0, 2.0) == 3.0);
  CHECK(apply_function(Func::Log, 0.0, 0.0) == 0.0);
  CHECK(apply_function(Func::Log, -std::exp(1.0), 0.0) == doctest::Approx(1.0));
  CHECK(apply_function(Func::Sqrt, -4.0, 0.0) == 2.0);
  CHECK(sanitize(std::numeric_limits<double>::quiet_NaN()) == 0.0);
  CHECK(sanitize(1e300) == kValueBound);
  CHECK(sanitize(-std::numeric_limits<double>::infinity()) == -kValueBound);

  // Overflow through repeated squaring stays finite.
  const auto c = cfg(1, 1);
  const auto input = init_registers(c, std::vector<std::vector<double>>{{10}});
  std::vector<Instruction> prog(8, parse_instruction("R0 = mul(R0, R0)"));
  const auto out = execute(prog, input, c);
  CHECK(out.reg(0, 0) == kValueBound);
  prog.push_back(parse_instruction("R0 = sub(R0, R0)"));
  prog.push_back(parse_instruction("R0 = div(x0, R0)"));
  CHECK(execute(prog, input, c).reg(0, 0) == 10.0);
}

TEST_CASE("scaled instructions scale before clamping") {
  const auto c = cfg(1, 1);
  const auto input = init_registers(c, std::vector<std::vector<double>>{{0.75e12}});
  auto ins = parse_instruction("R0 = 2 * add(R0, R0) + 5");
  CHECK(ins.transform.scale == 2.0);
  CHECK(ins.transform.offset == 5.0);
  CHECK(execute(std::vector{ins}, input, c).reg(0, 0) == kValueBound);
  const auto small = init_registers(c, std::vector<std::vector<double>>{{1.5}});
  CHECK(execute(std::vector{ins}, small, c).reg(0, 0) == 11.0);
}

TEST_CASE("detect_introns marks structurally dead instructions") {
  const auto c = cfg(4, 2);
  const auto mask = detect_introns(figure_program(), c);
  CHECK(mask == std::vector<bool>{false, false, true, false});

  CHECK(detect_introns(std::vector<Instruction>{}, c).empty());
  CHECK(detect_introns(std::vector{parse_instruction("R2 = add(R1, x0)")}, c) ==
        std::vector<bool>{true});

  // Unary functions do not make their inert second source effective.
  const std::vector<Instruction> unary = {parse_instruction("R1 = add(x0, x0)"),
                                          parse_instruction("R0 = sin(R0, R1)")};
  CHECK(detect_introns(unary, c) == std::vector<bool>{true, false});

  // A redefinition kills earlier writes to the same register.
  const std::vector<Instruction> overwritten = {parse_instruction("R0 = add(R1, x0)"),
                                                parse_instruction("R0 = mul(x0, x1)")};
  CHECK(detect_introns(overwritten, c) == std::vector<bool>{true, false});
}

TEST_CASE("count_possible_introns") {
  const auto c = cfg(4, 1);
  CHECK(count_possible_introns(1, c, 32) == 24);
  CHECK(count_possible_introns(4, c, 32) == 0);
  CHECK(count_possible_introns(2, c, 32) == 16);
  CHECK_THROWS_AS(count_possible_introns(5, c, 32), InputError);

  // Enumeration: members whose destination is outside {R0, R1}.
  const Func add[] = {Func::Add};
  const auto iset = build_default(c, add);
  std::uint64_t outside = 0;
  for (const auto& ins : iset.members()) outside += ins.dest >= 2 ? 1 : 0;
  CHECK(count_possible_introns(2, c, iset.size()) == outside);
}

TEST_CASE("program text round-trips") {
  const Program p(figure_program(), 10);
  const auto text = to_text(p);
  CHECK(text.find("R3 = div(R0, x1)") != std::string::npos);
  CHECK(parse_program(text, 10) == p);
  CHECK(parse_program("# comment\n\nR0 = ln(R1, x0)\n").size() == 1);

  auto scaled = parse_instruction("R0 = 1.1 * mul(R1, x0) + 1000");
  CHECK(parse_instruction(to_string(scaled)) == scaled);

  CHECK_THROWS_AS(parse_instruction("R0 add(R1, x0)"), InputError);
  CHECK_THROWS_AS(parse_instruction("R0 = foo(R1, x0)"), InputError);
  CHECK_THROWS_AS(parse_instruction("R0 = add(R1)"), InputError);
  CHECK_THROWS_AS(parse_instruction("Q0 = add(R1, x0)"), InputError);
  CHECK_THROWS_AS(Program(figure_program(), 3), InputError);
}

TEST_CASE("program editing respects the length cap") {
  Program p(figure_program(), 5);
  p.insert(0, parse_instruction("R1 = add(x0, x0)"));
  CHECK(p.size() == 5);
  CHECK_THROWS_AS(p.insert(0, p[0]), InputError);
  p.erase(4);
  CHECK(p.size() == 4);
  CHECK_THROWS_AS(p.erase(9), InputError);
}

TEST_CASE("register config validation") {
  RegisterConfig c;
  CHECK_NOTHROW(c.validate());
  c.output_registers = {0, 0};
  CHECK_THROWS_AS(c.validate(), InputError);
  c.output_registers = {8};
  CHECK_THROWS_AS(c.validate(), InputError);
  c.output_registers = {};
  CHECK_THROWS_AS(c.validate(), InputError);
  c.output_registers = {0};
  c.num_features = 0;
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK_FALSE(cfg(2, 1).valid(parse_instruction("R2 = add(R0, x0)")));
  CHECK_FALSE(cfg(2, 1).valid(parse_instruction("R0 = add(R0, x1)")));
}

TEST_CASE("property: deleting introns never changes the outputs") {
  std::mt19937_64 rng(11);
  const auto c = RegisterConfig::with_defaults(2);
  const auto iset = build_default(c);
  const auto input = testing::random_input(c, 16, rng);
  std::uniform_int_distribution<std::size_t> len(0, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const auto prog = testing::random_instructions(iset, len(rng), rng);
    const auto full = execute(prog, input, c);
    const auto stripped = execute(effective_instructions(prog, c), input, c);
    REQUIRE(testing::outputs(full, c) == testing::outputs(stripped, c));
  }
}

TEST_CASE("property: deleting an exon almost always changes the outputs") {
  // Structural exons can still be semantically neutral (e.g. a protected
  // division by zero), so this is a rate, not a rule.
  std::mt19937_64 rng(12);
  const auto c = RegisterConfig::with_defaults(1);
  const auto iset = build_default(c);
  const auto input = testing::random_input(c, 64, rng);
  std::uniform_int_distribution<std::size_t> len(1, 30);
  std::size_t exons = 0, changed = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const auto prog = testing::random_instructions(iset, len(rng), rng);
    const auto base = testing::outputs(execute(prog, input, c), c);
    const auto mask = detect_introns(prog, c);
    for (std::size_t k = 0; k < prog.size(); ++k) {
      if (mask[k]) continue;
      auto cut = prog;
      cut.erase(cut.begin() + static_cast<std::ptrdiff_t>(k));
      ++exons;
      changed += testing::outputs(execute(cut, input, c), c) != base ? 1 : 0;
    }
  }
  REQUIRE(exons > 100);
  MESSAGE("exon deletion changed outputs in " << changed << " of " << exons);
  CHECK(static_cast<double>(changed) / static_cast<double>(exons) >= 0.90);
}

TEST_CASE("property: execution is deterministic and never writes features") {
  std::mt19937_64 rng(13);
  const auto c = RegisterConfig::with_defaults(2);
  const auto iset = build_default(c);
  const auto input = testing::random_input(c, 8, rng);
  for (int trial = 0; trial < 200; ++trial) {
    const auto prog = testing::random_instructions(iset, 25, rng);
    const auto a = execute(prog, input, c);
    const auto b = execute(prog, input, c);
    REQUIRE(a == b);
    for (std::size_t k = 0; k < a.num_cases(); ++k) {
      REQUIRE(a.feature(k, 0) == input.feature(k, 0));
      REQUIRE(a.feature(k, 1) == input.feature(k, 1));
    }
    for (double v : a.values()) REQUIRE(std::isfinite(v));
  }
}

TEST_CASE("execute_trace and distance") {
  const auto c = cfg(4, 2);
  const auto input = init_registers(c, std::vector<std::vector<double>>{{2, 3}});
  const auto prog = figure_program();
  const auto trace = execute_trace(prog, input, c);
  REQUIRE(trace.size() == 5);
  CHECK(trace.front() == input);
  CHECK(trace.back() == execute(prog, input, c));
  CHECK(distance(input, input) == 0.0);
  // Only R3 moves in the first step: 3 -> 2/3.
  CHECK(distance(trace[0], trace[1]) == doctest::Approx(3.0 - 2.0 / 3.0));
}
