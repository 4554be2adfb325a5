#include "lgpkit/delta_constants.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lgpkit/errors.hpp"

namespace lgpkit {

namespace {

std::vector<Semantics> images(const std::vector<Semantics>& sems,
                              const std::vector<Instruction>& instructions) {
  std::vector<Semantics> out;
  out.reserve(sems.size() * instructions.size());
  for (const auto& s : sems) {
    for (const auto& ins : instructions) {
      Semantics t = s;
      apply(ins, t);
      out.push_back(std::move(t));
    }
  }
  return out;
}

} // namespace

std::vector<Semantics> unique_semantics(std::vector<Semantics> sems) {
  std::vector<Semantics> out;
  std::set<std::vector<double>> seen;
  for (auto& s : sems) {
    std::vector<double> key(s.values().begin(), s.values().end());
    if (seen.insert(std::move(key)).second) out.push_back(std::move(s));
  }
  return out;
}

DeltaConstants compute_delta_constants(const DeltaInputs& in, const SemanticFitness& fitness) {
  if (in.psi.empty() || in.psi_star.empty() || in.targets.empty()) {
    throw InputError("semantic sets must be non-empty");
  }
  DeltaConstants c;

  for (const auto& s1 : in.psi) {
    for (const auto& s2 : in.psi_star) c.psi = std::max(c.psi, distance(s1, s2));
  }

  std::vector<double> target_fitness;
  for (const auto& t : in.targets) target_fitness.push_back(fitness(t));
  for (const auto& s : in.psi) {
    const double fs = fitness(s);
    for (std::size_t k = 0; k < in.targets.size(); ++k) {
      const double dist = distance(s, in.targets[k]);
      if (dist > 0.0) c.f_psi = std::max(c.f_psi, std::fabs(fs - target_fitness[k]) / dist);
    }
  }

  const std::size_t ni = in.instructions.size();
  const std::size_t ns = in.optimal_instructions.size();
  const auto img_all = images(in.psi, in.instructions);
  const auto img_star = images(in.psi, in.optimal_instructions);
  for (std::size_t a = 0; a < in.psi.size(); ++a) {
    for (std::size_t b = 0; b < in.psi.size(); ++b) {
      const double base = distance(in.psi[a], in.psi[b]);
      for (std::size_t k = 0; k < ns; ++k) {
        const double moved = distance(img_star[a * ns + k], img_star[b * ns + k]);
        c.i_star = std::max(c.i_star, moved - base);
      }
      for (std::size_t k1 = 0; k1 < ni; ++k1) {
        for (std::size_t k2 = 0; k2 < ns; ++k2) {
          const double moved = distance(img_all[a * ni + k1], img_star[b * ns + k2]);
          c.i_sq = std::max(c.i_sq, moved - base);
        }
      }
    }
  }
  return c;
}

DeltaEstimate estimate_delta_constants(std::span<const Instruction> iset_members,
                                       const std::vector<std::vector<Instruction>>& optimal,
                                       const Semantics& input, const RegisterConfig& config,
                                       const SemanticFitness& fitness, std::size_t max_len,
                                       std::size_t sample_budget, std::mt19937_64& rng) {
  if (sample_budget < 1) throw InputError("sample budget must be positive");
  if (optimal.empty()) throw InputError("need at least one optimal program");
  if (iset_members.empty()) throw InputError("instruction set is empty");

  DeltaInputs in;
  in.instructions.assign(iset_members.begin(), iset_members.end());
  std::set<Instruction> star;
  for (const auto& prog : optimal) {
    auto trace = execute_trace(prog, input, config);
    in.targets.push_back(trace.back());
    for (auto& s : trace) in.psi_star.push_back(std::move(s));
    star.insert(prog.begin(), prog.end());
  }
  in.optimal_instructions.assign(star.begin(), star.end());
  if (in.optimal_instructions.empty()) {
    throw InputError("optimal programs contain no instructions");
  }

  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, iset_members.size() - 1);
  in.psi = in.psi_star;
  for (std::size_t k = 0; k < sample_budget; ++k) {
    std::vector<Instruction> prog(len(rng));
    for (auto& ins : prog) ins = iset_members[pick(rng)];
    for (auto& s : execute_trace(prog, input, config)) in.psi.push_back(std::move(s));
  }
  in.psi = unique_semantics(std::move(in.psi));
  in.psi_star = unique_semantics(std::move(in.psi_star));
  in.targets = unique_semantics(std::move(in.targets));

  DeltaConstants c;
  for (const auto& s1 : in.psi) {
    for (const auto& s2 : in.psi_star) c.psi = std::max(c.psi, distance(s1, s2));
    const double fs = fitness(s1);
    for (const auto& t : in.targets) {
      const double dist = distance(s1, t);
      if (dist > 0.0) c.f_psi = std::max(c.f_psi, std::fabs(fs - fitness(t)) / dist);
    }
  }

  // The instruction terms range over |psi|^2 |I| |I*| combinations, so they
  // are sampled. The optimal instruction is also scanned as sigma_1, which
  // keeps the I^2 estimate at least the I* estimate.
  std::uniform_int_distribution<std::size_t> pick_s(0, in.psi.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_star(0, in.optimal_instructions.size() - 1);
  for (std::size_t k = 0; k < sample_budget; ++k) {
    const auto& s1 = in.psi[pick_s(rng)];
    const auto& s2 = in.psi[pick_s(rng)];
    const auto& sigma1 = in.instructions[pick(rng)];
    const auto& sigma2 = in.optimal_instructions[pick_star(rng)];
    const double base = distance(s1, s2);
    Semantics a = s1, b = s2, a_star = s1;
    apply(sigma1, a);
    apply(sigma2, b);
    apply(sigma2, a_star);
    const double same = distance(a_star, b) - base;
    c.i_star = std::max(c.i_star, same);
    c.i_sq = std::max({c.i_sq, same, distance(a, b) - base});
  }
  return {c, true};
}

} // namespace lgpkit
