#include "lgpkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lgpkit/delta_constants.hpp"
#include "lgpkit/errors.hpp"
#include "lgpkit/introns.hpp"
#include "lgpkit/problems.hpp"
#include "lgpkit/semantics.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

ProgramCodec::ProgramCodec(std::size_t n, std::size_t max_size) : n_(n) {
  if (n < 1) throw InputError("codec needs at least one instruction");
  pow_.push_back(1);
  for (std::size_t s = 1; s <= max_size; ++s) {
    if (pow_.back() > (std::uint64_t{1} << 62) / n) throw InputError("program space too large");
    pow_.push_back(pow_.back() * n);
  }
}

std::vector<std::size_t> ProgramCodec::decode(std::size_t size, std::uint64_t index) const {
  std::vector<std::size_t> digits(size);
  for (std::size_t k = size; k-- > 0;) {
    digits[k] = static_cast<std::size_t>(index % n_);
    index /= n_;
  }
  return digits;
}

std::uint64_t ProgramCodec::encode(const std::vector<std::size_t>& digits) const {
  std::uint64_t idx = 0;
  for (auto d : digits) idx = idx * n_ + d;
  return idx;
}

std::uint64_t ProgramCodec::insert(std::size_t size, std::uint64_t index, std::size_t pos,
                                   std::size_t digit) const {
  const std::uint64_t tail = pow_[size - pos];
  return ((index / tail) * n_ + digit) * tail + index % tail;
}

std::uint64_t ProgramCodec::erase(std::size_t size, std::uint64_t index, std::size_t pos) const {
  const std::uint64_t tail = pow_[size - pos - 1];
  return (index / pow_[size - pos]) * tail + index % tail;
}

namespace {

struct ProbeSetup {
  Semantics input;
  std::vector<double> reference; // per case, per output register
};

ProbeSetup probe_setup(const TinySpace& space) {
  ProbeSetup p;
  p.input = init_registers(space.config, space.probes);
  const auto out = execute(std::span<const Instruction>(space.reference), p.input, space.config);
  for (std::size_t c = 0; c < out.num_cases(); ++c) {
    for (auto r : space.config.output_registers) p.reference.push_back(out.reg(c, r));
  }
  return p;
}

bool matches(std::span<const double> state, std::size_t num_cases, const RegisterConfig& cfg,
             const std::vector<double>& reference) {
  const std::size_t block = cfg.block_size();
  std::size_t k = 0;
  for (std::size_t c = 0; c < num_cases; ++c) {
    for (auto r : cfg.output_registers) {
      const double v = state[c * block + r];
      const double want = reference[k++];
      if (std::fabs(v - want) > 1e-9 * std::max(1.0, std::fabs(want))) return false;
    }
  }
  return true;
}

// Depth-first walk over all programs up to max_size, sharing prefix execution.
void flag_optimal(const TinySpace& space, const ProbeSetup& setup, std::size_t max_size,
                  std::vector<std::vector<std::uint8_t>>& optimal) {
  const std::size_t n = space.n();
  const std::size_t num_cases = setup.input.num_cases();
  const std::size_t block = space.config.block_size();
  const std::size_t gamma = space.config.gamma;
  std::vector<std::vector<double>> states(max_size + 1);
  states[0].assign(setup.input.values().begin(), setup.input.values().end());

  optimal.assign(max_size + 1, {});
  for (std::size_t s = 0, count = 1; s <= max_size; ++s, count *= n) optimal[s].assign(count, 0);
  optimal[0][0] = matches(states[0], num_cases, space.config, setup.reference) ? 1 : 0;

  auto visit = [&](auto&& self, std::size_t size, std::uint64_t index) -> void {
    if (size == max_size) return;
    auto& next = states[size + 1];
    for (std::size_t c = 0; c < n; ++c) {
      next = states[size];
      for (std::size_t k = 0; k < num_cases; ++k) {
        apply_block(space.instructions[c], std::span<double>(next).subspan(k * block, block),
                    gamma);
      }
      const std::uint64_t child = index * n + c;
      optimal[size + 1][child] = matches(next, num_cases, space.config, setup.reference) ? 1 : 0;
      self(self, size + 1, child);
    }
  };
  visit(visit, 0, 0);
}

double universe_count(std::size_t n, std::size_t max_size) {
  double total = 0.0;
  for (std::size_t s = 0; s <= max_size; ++s) total += std::pow(static_cast<double>(n), s);
  return total;
}

} // namespace

DeltaStarTable find_optimal_programs(const TinySpace& space) {
  space.validate();
  const auto setup = probe_setup(space);
  const std::size_t n = space.n();

  std::vector<std::vector<std::uint8_t>> flags;
  flag_optimal(space, setup, space.reference.size(), flags);
  std::size_t m_star = 0;
  while (m_star < flags.size() &&
         std::find(flags[m_star].begin(), flags[m_star].end(), 1) == flags[m_star].end()) {
    ++m_star;
  }
  if (m_star == 0) throw InputError("the empty program already matches the reference");

  DeltaStarTable t;
  t.n = n;
  t.m_max = space.m_max;
  t.m_star = m_star;
  t.universe_size = 2 * space.m_max + m_star;
  const double universe = universe_count(n, t.universe_size);
  if (universe > kUniverseGuard) {
    throw GuardViolation("search universe of " + detail::format_double(universe) +
                             " programs exceeds the guard",
                         universe);
  }
  flag_optimal(space, setup, t.universe_size, t.optimal);
  return t;
}

DeltaStarTable enumerate_delta_star(const TinySpace& space) {
  DeltaStarTable t = find_optimal_programs(space);
  const std::size_t S = t.universe_size;
  const std::size_t n = t.n;
  const ProgramCodec codec(n, S + 1);

  t.dist.assign(S + 1, {});
  std::vector<std::pair<std::uint8_t, std::uint64_t>> frontier;
  for (std::size_t s = 0; s <= S; ++s) {
    t.dist[s].assign(t.optimal[s].size(), kUnreached);
    for (std::uint64_t i = 0; i < t.optimal[s].size(); ++i) {
      if (t.optimal[s][i]) {
        t.dist[s][i] = 0;
        frontier.emplace_back(static_cast<std::uint8_t>(s), i);
      }
    }
  }

  std::uint8_t level = 0;
  std::vector<std::pair<std::uint8_t, std::uint64_t>> next;
  while (!frontier.empty()) {
    ++level;
    next.clear();
    auto relax = [&](std::size_t s, std::uint64_t i) {
      if (t.dist[s][i] == kUnreached) {
        t.dist[s][i] = level;
        next.emplace_back(static_cast<std::uint8_t>(s), i);
      }
    };
    for (const auto& [s, i] : frontier) {
      for (std::size_t pos = 0; pos < s; ++pos) relax(s - 1, codec.erase(s, i, pos));
      if (s < S) {
        for (std::size_t pos = 0; pos <= s; ++pos) {
          for (std::size_t c = 0; c < n; ++c) relax(s + 1, codec.insert(s, i, pos, c));
        }
      }
    }
    frontier.swap(next);
  }
  return t;
}

std::vector<std::vector<std::uint8_t>> recount_delta_star(const DeltaStarTable& table) {
  const std::size_t S = table.universe_size;
  const std::size_t n = table.n;
  const ProgramCodec codec(n, S + 1);

  // ins[s][i]: fewest insertions turning program i of size s into an optimal one.
  std::vector<std::vector<std::uint8_t>> ins(S + 1);
  for (std::size_t s = S + 1; s-- > 0;) {
    ins[s].assign(table.optimal[s].size(), kUnreached);
    for (std::uint64_t i = 0; i < ins[s].size(); ++i) {
      if (table.optimal[s][i]) {
        ins[s][i] = 0;
        continue;
      }
      if (s == S) continue;
      std::uint8_t best = kUnreached;
      for (std::size_t pos = 0; pos <= s; ++pos) {
        for (std::size_t c = 0; c < n; ++c) {
          best = std::min(best, ins[s + 1][codec.insert(s, i, pos, c)]);
        }
      }
      if (best != kUnreached) ins[s][i] = static_cast<std::uint8_t>(best + 1);
    }
  }

  std::vector<std::vector<std::uint8_t>> out(table.m_max + 1);
  for (std::size_t m = 0; m <= table.m_max; ++m) {
    out[m].assign(codec.layer_size(m), kUnreached);
    for (std::uint64_t i = 0; i < out[m].size(); ++i) {
      const auto digits = codec.decode(m, i);
      unsigned best = kUnreached;
      for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        std::vector<std::size_t> kept;
        for (std::size_t k = 0; k < m; ++k) {
          if (mask & (1u << k)) kept.push_back(digits[k]);
        }
        const auto v = ins[kept.size()][codec.encode(kept)];
        if (v == kUnreached) continue;
        best = std::min(best, static_cast<unsigned>(m - kept.size() + v));
      }
      out[m][i] = static_cast<std::uint8_t>(std::min(best, unsigned{kUnreached}));
    }
  }
  return out;
}

std::uint64_t LayerStats::layer_total(std::size_t m) const {
  std::uint64_t total = 0;
  for (auto c : counts[m]) total += c;
  return total;
}

Rational LayerStats::probability(std::size_t m, std::size_t d) const {
  if (m >= counts.size() || d >= counts[m].size()) return 0;
  return Rational(BigInt(counts[m][d]), BigInt(layer_total(m)));
}

Rational LayerStats::expectation(std::size_t m) const {
  BigInt sum = 0;
  for (std::size_t d = 0; d < counts[m].size(); ++d) sum += BigInt(d) * counts[m][d];
  return Rational(sum, BigInt(layer_total(m)));
}

std::string LayerStats::to_csv() const {
  std::string out = "m,d,count,probability\n";
  for (std::size_t m = 0; m < counts.size(); ++m) {
    const double total = static_cast<double>(layer_total(m));
    for (std::size_t d = 0; d < counts[m].size(); ++d) {
      if (counts[m][d] == 0) continue;
      out += std::to_string(m) + "," + std::to_string(d) + "," + std::to_string(counts[m][d]) +
             "," + detail::format_double(static_cast<double>(counts[m][d]) / total) + "\n";
    }
  }
  return out;
}

LayerStats layer_stats(const DeltaStarTable& table) {
  LayerStats st;
  st.n = table.n;
  st.m_max = table.m_max;
  st.m_star = table.m_star;
  st.counts.resize(table.m_max + 1);
  for (std::size_t m = 0; m <= table.m_max; ++m) {
    for (auto d : table.dist[m]) {
      if (d == kUnreached) throw InputError("program without a path to an optimal program");
      if (st.counts[m].size() <= d) st.counts[m].resize(d + 1, 0);
      ++st.counts[m][d];
    }
  }
  return st;
}

DeltaStarBoundsReport verify_delta_star_bounds(const DeltaStarTable& table) {
  DeltaStarBoundsReport r;
  for (std::size_t m = 0; m <= table.m_max; ++m) {
    const std::size_t lo = table.m_star > m ? table.m_star - m : 0;
    const std::size_t hi = table.m_star + m;
    for (auto d : table.dist[m]) {
      ++r.checked;
      if (d < lo || d > hi) ++r.violations;
    }
  }
  return r;
}

SimilarDeltaReport verify_similar_delta_probability(const LayerStats& stats, std::size_t d,
                                                    std::size_t m, const Rational& eps_check) {
  if (m + 1 > stats.m_max) throw InputError("layer statistics do not cover m + 1");
  SimilarDeltaReport r;
  r.difference = abs(stats.probability(m, d) - stats.probability(m + 1, d));
  r.within = r.difference <= eps_check;
  return r;
}

ExpectationReport verify_expectation_growth(const LayerStats& stats, std::size_t m_from) {
  ExpectationReport r;
  r.m_from = m_from;
  for (std::size_t m = m_from; m < stats.m_max; ++m) {
    r.margins.push_back(stats.expectation(m + 1) - stats.expectation(m));
    if (r.margins.back() <= 0) ++r.violations;
  }
  return r;
}

Rational expected_reduction(const LayerStats& stats, std::size_t m, std::size_t d_m) {
  Rational sum = 0;
  const auto& row = stats.counts.at(m);
  for (std::size_t d = 0; d <= d_m && d < row.size(); ++d) {
    sum += stats.probability(m, d) * Rational(d_m - d);
  }
  return sum;
}

BloatReport verify_bloat_expectation(const LayerStats& stats, std::size_t m, std::size_t d_m) {
  if (m + 1 > stats.m_max) throw InputError("layer statistics do not cover m + 1");
  BloatReport r;
  r.m = m;
  r.d_m = d_m;
  r.keep = expected_reduction(stats, m, d_m);
  r.add = expected_reduction(stats, m + 1, d_m);
  if (m > 0) r.remove = expected_reduction(stats, m - 1, d_m);
  r.corollary_holds = r.add >= r.keep;
  r.remark_holds = !r.remove || r.add >= *r.remove;
  return r;
}

std::vector<BloatReport> sweep_bloat_expectation(const LayerStats& stats, std::size_t m_from) {
  std::vector<BloatReport> out;
  for (std::size_t m = m_from; m < stats.m_max; ++m) {
    for (std::size_t d = 0; d <= stats.m_star; ++d) out.push_back(verify_bloat_expectation(stats, m, d));
  }
  return out;
}

std::vector<std::vector<double>> program_fitness(const TinySpace& space) {
  space.validate();
  const auto setup = probe_setup(space);
  const std::size_t out_reg = space.config.output_registers.front();
  const std::size_t gout = space.config.gamma_out();
  std::vector<double> targets;
  for (std::size_t c = 0; c < setup.input.num_cases(); ++c) targets.push_back(setup.reference[c * gout]);

  const ProgramCodec codec(space.n(), space.m_max);
  std::vector<std::vector<double>> out(space.m_max + 1);
  std::vector<double> pred(targets.size());
  for (std::size_t m = 0; m <= space.m_max; ++m) {
    out[m].resize(codec.layer_size(m));
    for (std::uint64_t i = 0; i < out[m].size(); ++i) {
      std::vector<Instruction> prog;
      for (auto d : codec.decode(m, i)) prog.push_back(space.instructions[d]);
      const auto s = execute(std::span<const Instruction>(prog), setup.input, space.config);
      for (std::size_t c = 0; c < pred.size(); ++c) pred[c] = s.reg(c, out_reg);
      out[m][i] = rse(pred, targets);
    }
  }
  return out;
}

FitnessProbabilityReport verify_fitness_probability_condition(
    const DeltaStarTable& table, const std::vector<std::vector<double>>& fitness,
    double bucket_width) {
  if (!(bucket_width > 0.0)) throw InputError("bucket width must be positive");
  FitnessProbabilityReport rep;
  rep.bucket_width = bucket_width;

  // Per distance d, the number of pooled programs and the per-bucket counts.
  std::size_t max_d = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> items;
  for (std::size_t m = 0; m <= table.m_max; ++m) {
    for (std::uint64_t i = 0; i < table.dist[m].size(); ++i) {
      const double v = std::min(fitness[m][i] / bucket_width, 9.0e15);
      items.emplace_back(table.dist[m][i], static_cast<std::int64_t>(std::floor(v)));
      max_d = std::max<std::size_t>(max_d, table.dist[m][i]);
    }
  }
  std::set<std::int64_t> buckets;
  for (const auto& it : items) buckets.insert(it.second);
  rep.degenerate = buckets.size() <= 1;

  // exact[d][v] = programs with delta* == d in bucket v.
  std::vector<std::vector<std::uint64_t>> exact(max_d + 1,
                                                std::vector<std::uint64_t>(buckets.size(), 0));
  const std::vector<std::int64_t> bucket_list(buckets.begin(), buckets.end());
  for (const auto& [d, v] : items) {
    const auto k = std::lower_bound(bucket_list.begin(), bucket_list.end(), v) - bucket_list.begin();
    ++exact[d][static_cast<std::size_t>(k)];
  }
  std::vector<std::vector<std::uint64_t>> upto = exact; // programs with delta* <= d
  for (std::size_t d = 1; d <= max_d; ++d) {
    for (std::size_t k = 0; k < bucket_list.size(); ++k) upto[d][k] += upto[d - 1][k];
  }
  auto total = [&](std::size_t d) {
    std::uint64_t t = 0;
    for (auto c : upto[d]) t += c;
    return t;
  };

  for (std::size_t d = 1; d < max_d; ++d) {
    const std::uint64_t pd = total(d);
    const std::uint64_t pd1 = total(d + 1);
    if (pd1 == pd || pd == 0) continue;
    for (std::size_t k = 0; k < bucket_list.size(); ++k) {
      if (upto[d][k] == 0) continue;
      FitnessBucketRow row;
      row.d = d;
      row.bucket = bucket_list[k];
      row.with_v = upto[d][k];
      row.total = pd;
      row.with_v_next = upto[d + 1][k];
      row.total_next = pd1;
      row.new_with_v = row.with_v_next - row.with_v;
      row.new_total = pd1 - pd;
      const Rational lhs(BigInt(row.new_with_v), BigInt(row.new_total));
      const Rational rhs = Rational(BigInt(row.with_v), BigInt(row.total)) +
                           Rational(BigInt(row.with_v), BigInt(row.new_total));
      row.hypothesis = lhs <= rhs;
      const Rational p_d(BigInt(row.with_v), BigInt(row.total));
      const Rational p_d1(BigInt(row.with_v_next), BigInt(row.total_next));
      row.conclusion = abs(p_d1 - p_d) < p_d;
      if (row.hypothesis) {
        ++rep.hypothesis_held;
        if (!row.conclusion) ++rep.implication_failures;
      }
      rep.rows.push_back(row);
    }
  }
  return rep;
}

FitnessGapReport verify_fitness_gap(const TinySpace& space, const DeltaStarTable& table,
                                    std::size_t max_len, double f_psi_scale) {
  if (max_len > table.m_max) throw InputError("padded length exceeds the enumerated sizes");
  const auto setup = probe_setup(space);
  const std::size_t out_reg = space.config.output_registers.front();
  const std::size_t gout = space.config.gamma_out();
  std::vector<double> targets;
  for (std::size_t c = 0; c < setup.input.num_cases(); ++c) targets.push_back(setup.reference[c * gout]);
  const SemanticFitness fitness = [&](const Semantics& s) {
    std::vector<double> pred(targets.size());
    for (std::size_t c = 0; c < pred.size(); ++c) pred[c] = s.reg(c, out_reg);
    return rse(pred, targets);
  };

  const Instruction pad{static_cast<std::uint16_t>(out_reg), Func::Nop,
                        Operand::reg(static_cast<std::uint16_t>(out_reg)),
                        Operand::reg(static_cast<std::uint16_t>(out_reg)), {}};
  const ProgramCodec codec(space.n(), max_len);

  struct Padded {
    std::vector<Instruction> code;
    std::vector<Semantics> trace;
    double fitness = 0.0;
  };
  std::vector<Padded> programs;
  std::vector<Padded> optimal;
  for (std::size_t m = 0; m <= max_len; ++m) {
    for (std::uint64_t i = 0; i < codec.layer_size(m); ++i) {
      Padded p;
      for (auto d : codec.decode(m, i)) p.code.push_back(space.instructions[d]);
      p.code.resize(max_len, pad);
      p.trace = execute_trace(p.code, setup.input, space.config);
      p.fitness = fitness(p.trace.back());
      if (table.optimal[m][i]) optimal.push_back(p);
      programs.push_back(std::move(p));
    }
  }
  if (optimal.empty()) throw InputError("no optimal program fits the padded length");

  DeltaInputs in;
  std::set<Instruction> star;
  for (const auto& p : programs) in.psi.insert(in.psi.end(), p.trace.begin(), p.trace.end());
  for (const auto& p : optimal) {
    in.psi_star.insert(in.psi_star.end(), p.trace.begin(), p.trace.end());
    in.targets.push_back(p.trace.back());
    star.insert(p.code.begin(), p.code.end());
  }
  in.instructions = space.instructions;
  in.instructions.push_back(pad);
  in.optimal_instructions.assign(star.begin(), star.end());
  in.psi = unique_semantics(std::move(in.psi));
  in.psi_star = unique_semantics(std::move(in.psi_star));
  in.targets = unique_semantics(std::move(in.targets));

  FitnessGapReport rep;
  rep.max_len = max_len;
  rep.constants = compute_delta_constants(in, fitness);
  DeltaConstants c = rep.constants;
  c.f_psi *= f_psi_scale;
  const double L = static_cast<double>(max_len);
  for (const auto& p : programs) {
    for (const auto& o : optimal) {
      std::size_t delta = 0;
      for (std::size_t k = 0; k < max_len; ++k) delta += p.code[k] == o.code[k] ? 0 : 1;
      const double gap = std::fabs(p.fitness - o.fitness);
      const double slack = 1e-9 * std::max(1.0, gap);
      ++rep.pairs;
      if (gap > fitness_gap_bound_linear(static_cast<double>(delta), L, c) + slack) {
        ++rep.linear_violations;
      }
      if (gap > c.f_psi * c.psi + slack) ++rep.saturated_violations;
    }
  }
  return rep;
}

BloatingFactors exact_bloating_factors(const RegisterConfig& config,
                                       const std::vector<Instruction>& instructions,
                                       std::size_t m1, std::size_t m2) {
  config.validate();
  if (m2 < m1) throw InputError("bloating factor needs m2 >= m1");
  const std::size_t n = instructions.size();
  const std::size_t delta = m2 - m1;
  const double work = std::pow(static_cast<double>(n), static_cast<double>(m1 + delta)) *
                      std::pow(2.0, static_cast<double>(m2));
  if (work > 1e9) throw GuardViolation("bloating-factor enumeration too large", work);

  const ProgramCodec codec(n, m2);
  BigInt omega_total = 0;
  BigInt lambda_total = 0;
  std::vector<Instruction> child(m2);
  for (std::uint64_t p = 0; p < codec.layer_size(m1); ++p) {
    const auto parent = codec.decode(m1, p);
    std::set<std::uint64_t> omega_set;
    std::set<std::uint64_t> lambda_set;
    for (std::uint32_t mask = 0; mask < (1u << m2); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != delta) continue;
      for (std::uint64_t a = 0; a < codec.layer_size(delta); ++a) {
        const auto added = codec.decode(delta, a);
        std::vector<std::size_t> digits(m2);
        for (std::size_t k = 0, pi = 0, ai = 0; k < m2; ++k) {
          digits[k] = (mask & (1u << k)) ? added[ai++] : parent[pi++];
          child[k] = instructions[digits[k]];
        }
        const auto introns = detect_introns(child, config);
        bool all_introns = true;
        bool all_exons = true;
        for (std::size_t k = 0; k < m2; ++k) {
          if (!(mask & (1u << k))) continue;
          all_introns = all_introns && introns[k];
          all_exons = all_exons && !introns[k];
        }
        const auto code = codec.encode(digits);
        if (all_introns) omega_set.insert(code);
        if (all_exons) lambda_set.insert(code);
      }
    }
    omega_total += omega_set.size();
    lambda_total += lambda_set.size();
  }
  const BigInt layer(codec.layer_size(m1));
  return {Rational(omega_total, layer), Rational(lambda_total, layer)};
}

} // namespace lgpkit
