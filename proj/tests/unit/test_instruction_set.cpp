#include <set>

#include "doctest.h"
#include "lgpkit/errors.hpp"
#include "lgpkit/instruction_set.hpp"

using namespace lgpkit;

namespace {

RegisterConfig cfg(std::size_t gamma, std::size_t features) {
  RegisterConfig c;
  c.gamma = gamma;
  c.num_features = features;
  return c;
}

} // namespace

TEST_CASE("build_default enumerates every combination") {
  CHECK(build_default(cfg(8, 2)).size() == 8 * 8 * 100);
  const Func add[] = {Func::Add};
  CHECK(build_default(cfg(1, 1), add).size() == 4);
  CHECK(build_default(cfg(4, 1), add).size() == 100);
  CHECK(build_default(cfg(8, 1)).size() == 5184);
  CHECK_THROWS_AS(build_default(cfg(4, 1), std::span<const Func>{}), InputError);

  const auto iset = build_default(cfg(3, 2));
  std::set<Instruction> unique(iset.members().begin(), iset.members().end());
  CHECK(unique.size() == iset.size());
  for (const auto& ins : iset.members()) CHECK(iset.config().valid(ins));
}

TEST_CASE("variants extend the default set") {
  const auto base = build_default(cfg(4, 1));
  const std::size_t n = base.size();
  CHECK(build_variant("default", base).size() == n);
  CHECK(build_variant("fx2", base).size() == 2 * n);
  CHECK(build_variant("fx1.1", base).size() == 2 * n);
  CHECK(build_variant("fx4", base).size() == 2 * n);
  CHECK(build_variant("add+100", base).size() == n + n / 8);
  CHECK(build_variant("add+1000", base).size() == n + n / 8);
  // One exp instruction per (destination, source) pair.
  CHECK(build_variant("exp", base).size() == n + 4 * 5);
  CHECK_THROWS_AS(build_variant("fx3", base), InputError);

  for (const auto& name : variant_names()) {
    const auto v = build_variant(name, base);
    for (std::size_t i = 0; i < n; ++i) REQUIRE(v[i] == base[i]);
  }

  const auto fx2 = build_variant("fx2", base);
  CHECK(fx2[n].transform.scale == 2.0);
  CHECK(fx2[n].func == base[0].func);
  const auto add100 = build_variant("add+100", base);
  for (std::size_t i = n; i < add100.size(); ++i) {
    CHECK(add100[i].func == Func::Add);
    CHECK(add100[i].transform.offset == 100.0);
  }
  const auto exp = build_variant("exp", base);
  for (std::size_t i = n; i < exp.size(); ++i) {
    CHECK(exp[i].func == Func::Exp);
    CHECK(exp[i].src1 == exp[i].src2);
  }
}

TEST_CASE("variant membership is deterministic") {
  const auto a = build_variant("fx4", build_default(cfg(2, 1)));
  const auto b = build_variant("fx4", build_default(cfg(2, 1)));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(to_string(a[i]) == to_string(b[i]));
}

TEST_CASE("instruction sets reject duplicates and invalid members") {
  const auto c = cfg(2, 1);
  const auto ins = parse_instruction("R0 = add(R1, x0)");
  CHECK_THROWS_AS(InstructionSet({ins, ins}, c), InputError);
  CHECK_THROWS_AS(InstructionSet({parse_instruction("R5 = add(R1, x0)")}, c), InputError);
  CHECK_THROWS_AS(InstructionSet({}, c), InputError);
}
