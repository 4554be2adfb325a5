#include "lgpkit_cli/experiments.hpp"

#include <algorithm>
#include <iterator>
#include <random>
#include <sstream>

#include "lgpkit/errors.hpp"
#include "lgpkit/introns.hpp"
#include "lgpkit/parallel.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit::cli {

using detail::format_double;

namespace {

std::vector<std::uint64_t> sorted_seeds(const ExperimentConfig& cfg) {
  auto seeds = cfg.seeds;
  std::sort(seeds.begin(), seeds.end());
  return seeds;
}

struct RunSetup {
  Problem problem;
  RegisterConfig config;
};

RunSetup setup(const std::string& problem, std::uint64_t seed, std::size_t gamma) {
  RunSetup s{make_problem(problem, seed), {}};
  s.config = register_config_for(s.problem.train, gamma);
  return s;
}

SeedRun evolve_one(const ExperimentConfig& cfg, const std::string& problem,
                   const std::string& variant, std::size_t u, std::uint64_t seed) {
  auto s = setup(problem, seed, cfg.gamma);
  const auto iset = build_variant(variant, build_default(s.config));
  auto ecfg = cfg.evolution;
  ecfg.step_size = u;
  ecfg.rng_seed = seed;
  const Fitness train(s.problem.train, s.config);
  const Fitness test(s.problem.test, s.config);
  SeedRun run;
  run.u = u;
  run.seed = seed;
  run.result = evolve(ecfg, iset, train);
  run.test_rse = test.rse(run.result.best);
  return run;
}

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

} // namespace

RegisterConfig register_config_for(const Dataset& data, std::size_t gamma) {
  auto c = RegisterConfig::with_defaults(data.num_features);
  c.gamma = gamma;
  c.validate();
  return c;
}

std::vector<SeedRun> run_evolve(const ExperimentConfig& cfg) {
  cfg.evolution.validate();
  const auto seeds = sorted_seeds(cfg);
  std::vector<SeedRun> runs(cfg.u_values.size() * seeds.size());
  parallel_for(
      runs.size(),
      [&](std::size_t i) {
        runs[i] = evolve_one(cfg, cfg.problem, cfg.variant, cfg.u_values[i / seeds.size()],
                             seeds[i % seeds.size()]);
      },
      cfg.threads);
  return runs;
}

std::vector<AggregateRow> aggregate_traces(const std::vector<const RunTrace*>& traces) {
  if (traces.empty()) return {};
  const std::size_t len = traces.front()->size();
  for (const auto* t : traces) {
    if (t->size() != len) throw InputError("traces differ in length");
  }
  std::vector<AggregateRow> rows(len);
  std::vector<double> best(traces.size()), fit(traces.size()), size(traces.size()),
      exons(traces.size());
  for (std::size_t g = 0; g < len; ++g) {
    for (std::size_t r = 0; r < traces.size(); ++r) {
      const auto& rec = (*traces[r])[g];
      best[r] = rec.best_fitness;
      fit[r] = rec.mean_fitness;
      size[r] = rec.mean_size;
      exons[r] = rec.mean_exons;
    }
    auto& row = rows[g];
    row.generation = (*traces.front())[g].generation;
    row.mean_best = mean(best);
    row.std_best = stddev(best);
    row.mean_fitness = mean(fit);
    row.std_fitness = stddev(fit);
    row.mean_size = mean(size);
    row.std_size = stddev(size);
    row.mean_exons = mean(exons);
    row.std_exons = stddev(exons);
  }
  return rows;
}

std::string aggregate_to_csv(const std::vector<AggregateRow>& rows) {
  std::ostringstream out;
  out << "generation,mean_best_fitness,std_best_fitness,mean_fitness,std_fitness,"
         "mean_size,std_size,mean_exons,std_exons\n";
  for (const auto& r : rows) {
    out << r.generation << ',' << format_double(r.mean_best) << ',' << format_double(r.std_best)
        << ',' << format_double(r.mean_fitness) << ',' << format_double(r.std_fitness) << ','
        << format_double(r.mean_size) << ',' << format_double(r.std_size) << ','
        << format_double(r.mean_exons) << ',' << format_double(r.std_exons) << '\n';
  }
  return out.str();
}

std::string evolve_summary_csv(const std::vector<SeedRun>& runs, const RegisterConfig& config) {
  std::ostringstream out;
  out << "u,seed,best_train_rse,test_rse,best_size,best_exons\n";
  for (const auto& r : runs) {
    out << r.u << ',' << r.seed << ',' << format_double(r.result.best_fitness) << ','
        << format_double(r.test_rse) << ',' << r.result.best.size() << ','
        << count_exons(r.result.best.instructions(), config) << '\n';
  }
  return out.str();
}

double sample_mean_rse(const std::string& problem, std::uint64_t seed, std::size_t m,
                       std::size_t count, std::size_t gamma) {
  if (count == 0) throw InputError("samples_per_size must be positive");
  auto s = setup(problem, seed, gamma);
  const auto iset = build_default(s.config);
  const Fitness fitness(s.problem.train, s.config);
  std::seed_seq seq{seed, static_cast<std::uint64_t>(m)};
  std::mt19937_64 rng(seq);
  const std::size_t cap = std::max(m, kDefaultMaxLength);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) total += fitness.rse(random_program(m, iset, rng, cap));
  return total / static_cast<double>(count);
}

std::vector<SampleRow> run_sample(const ExperimentConfig& cfg) {
  const auto seeds = sorted_seeds(cfg);
  const auto& sizes = cfg.sample_sizes;
  std::vector<double> means(sizes.size() * seeds.size());
  parallel_for(
      means.size(),
      [&](std::size_t i) {
        means[i] = sample_mean_rse(cfg.problem, seeds[i % seeds.size()], sizes[i / seeds.size()],
                                   cfg.samples_per_size, cfg.gamma);
      },
      cfg.threads);
  std::vector<SampleRow> rows;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::span<const double> per_seed(means.data() + k * seeds.size(), seeds.size());
    rows.push_back({sizes[k], mean(per_seed), stddev(per_seed)});
  }
  return rows;
}

std::string sample_to_csv(const std::vector<SampleRow>& rows) {
  std::ostringstream out;
  out << "m,mean_rse,std_rse\n";
  for (const auto& r : rows) {
    out << r.m << ',' << format_double(r.mean_rse) << ',' << format_double(r.std_rse) << '\n';
  }
  return out.str();
}

StudyResult run_study(const ExperimentConfig& cfg) {
  cfg.evolution.validate();
  for (const auto& v : cfg.variants) {
    const auto& names = variant_names();
    if (std::find(names.begin(), names.end(), v) == names.end()) {
      throw InputError("unknown instruction-set variant '" + v + "'");
    }
  }
  const auto seeds = sorted_seeds(cfg);
  StudyResult r;
  r.problems = cfg.problems;
  r.variants = cfg.variants;
  const std::size_t nv = r.variants.size();
  const std::size_t ns = seeds.size();
  std::vector<double> rse(r.problems.size() * nv * ns);
  parallel_for(
      rse.size(),
      [&](std::size_t i) {
        const std::size_t p = i / (nv * ns);
        const std::size_t v = (i / ns) % nv;
        const auto run = evolve_one(cfg, r.problems[p], r.variants[v],
                                    cfg.evolution.step_size, seeds[i % ns]);
        rse[i] = run.test_rse;
      },
      cfg.threads);

  const auto def = std::find(r.variants.begin(), r.variants.end(), "default");
  std::vector<std::vector<double>> blocks;
  for (std::size_t p = 0; p < r.problems.size(); ++p) {
    auto& row = r.cells.emplace_back(nv);
    std::vector<double> block;
    for (std::size_t v = 0; v < nv; ++v) {
      auto& cell = row[v];
      const auto first = rse.begin() + static_cast<std::ptrdiff_t>((p * nv + v) * ns);
      cell.test_rse.assign(first, first + static_cast<std::ptrdiff_t>(ns));
      cell.mean = mean(cell.test_rse);
      cell.std = stddev(cell.test_rse);
      block.push_back(cell.mean);
    }
    if (def != r.variants.end() && ns >= 2) {
      const auto& base = row[static_cast<std::size_t>(def - r.variants.begin())].test_rse;
      for (std::size_t v = 0; v < nv; ++v) {
        if (r.variants[v] != "default") row[v].p_vs_default = rank_sum_test(row[v].test_rse, base).p_value;
      }
    }
    blocks.push_back(std::move(block));
  }
  r.ranks = friedman(blocks);
  return r;
}

std::string study_table_csv(const StudyResult& r) {
  std::ostringstream out;
  out << "problem,variant,runs,mean_test_rse,std_test_rse,p_vs_default,significant\n";
  for (std::size_t p = 0; p < r.problems.size(); ++p) {
    for (std::size_t v = 0; v < r.variants.size(); ++v) {
      const auto& c = r.cells[p][v];
      out << r.problems[p] << ',' << r.variants[v] << ',' << c.test_rse.size() << ','
          << format_double(c.mean) << ',' << format_double(c.std) << ',' << opt(c.p_vs_default)
          << ',';
      if (c.p_vs_default) out << (*c.p_vs_default < 0.05 ? "yes" : "no");
      out << '\n';
    }
  }
  return out.str();
}

std::string study_ranks_csv(const StudyResult& r) {
  std::ostringstream out;
  out << "variant,mean_rank,friedman_statistic,friedman_p\n";
  for (std::size_t v = 0; v < r.variants.size(); ++v) {
    out << r.variants[v] << ',' << format_double(r.ranks.mean_ranks[v]) << ','
        << format_double(r.ranks.statistic) << ',' << format_double(r.ranks.p_value) << '\n';
  }
  return out.str();
}

bool OracleResult::passed() const {
  for (const auto& c : checks) {
    if (c.gated && c.violations > 0) return false;
  }
  for (const auto& b : bloat) {
    if (!b.omega_inside || !b.lambda_inside) return false;
  }
  return true;
}

std::vector<OracleCheck> verify_tiny_space(const TinySpace& space, bool negative_control) {
  const auto table = enumerate_delta_star(space);
  std::vector<OracleCheck> out;
  auto add = [&](std::string check, std::uint64_t checked, std::uint64_t violations,
                 bool gated = true) {
    out.push_back({space.name, std::move(check), checked, violations, gated});
  };

  const auto recount = recount_delta_star(table);
  std::uint64_t compared = 0, mismatched = 0;
  for (std::size_t m = 0; m <= table.m_max; ++m) {
    for (std::size_t i = 0; i < recount[m].size(); ++i) {
      ++compared;
      if (recount[m][i] != table.dist[m][i]) ++mismatched;
    }
  }
  add("dual_oracle_agreement", compared, mismatched);

  const auto bounds = verify_delta_star_bounds(table);
  add("delta_star_bounds", bounds.checked, bounds.violations);

  const auto stats = layer_stats(table);
  const auto growth = verify_expectation_growth(stats);
  add("expectation_growth", growth.margins.size(), growth.violations);

  const auto sweep = sweep_bloat_expectation(stats);
  std::uint64_t below_keep = 0, below_remove = 0;
  for (const auto& c : sweep) {
    below_keep += c.corollary_holds ? 0 : 1;
    below_remove += c.remark_holds ? 0 : 1;
  }
  add("bloat_expectation", sweep.size(), below_keep);
  add("bloat_expectation_vs_remove", sweep.size(), below_remove, false);

  const auto fitness = program_fitness(space);
  const auto prob = verify_fitness_probability_condition(table, fitness);
  add("fitness_probability", prob.hypothesis_held, prob.implication_failures, false);

  const auto gap = verify_fitness_gap(space, table, table.m_max, negative_control ? 0.5 : 1.0);
  add(negative_control ? "fitness_gap_halved" : "fitness_gap", gap.pairs,
      gap.linear_violations + gap.saturated_violations);
  return out;
}

std::vector<BloatRow> verify_bloat_cases() {
  const auto cases = bloat_cases();
  std::vector<BloatRow> rows(cases.size());
  parallel_for(cases.size(), [&](std::size_t i) {
    const auto& c = cases[i];
    SpaceParams p;
    p.gamma = c.config.gamma;
    p.gamma_out = c.config.gamma_out();
    p.n = c.instructions.size();
    const auto f = exact_bloating_factors(c.config, c.instructions, c.m1, c.m2);
    const auto ob = omega_bounds_exact(c.m1, c.m2, p);
    const auto lb = lambda_bounds_exact(c.m1, c.m2, p);
    auto& r = rows[i];
    r.name = c.name;
    r.m1 = c.m1;
    r.m2 = c.m2;
    r.omega = f.omega.convert_to<double>();
    r.omega_lower = ob.lower.convert_to<double>();
    r.omega_upper = ob.upper.convert_to<double>();
    r.lambda = f.lambda.convert_to<double>();
    r.lambda_lower = lb.lower.convert_to<double>();
    r.lambda_upper = lb.upper.convert_to<double>();
    r.omega_inside = ob.lower < f.omega && f.omega < ob.upper;
    r.lambda_inside = lb.lower < f.lambda && f.lambda < lb.upper;
  });
  return rows;
}

OracleResult run_oracle(const ExperimentConfig& cfg) {
  std::vector<TinySpace> spaces;
  for (const auto& name : cfg.tiny_spaces) {
    auto s = bundled_tiny_space(name);
    if (cfg.tiny_m_max > 0) s.m_max = cfg.tiny_m_max;
    s.validate();
    spaces.push_back(std::move(s));
  }
  OracleResult r;
  std::vector<std::vector<OracleCheck>> per_space(spaces.size());
  parallel_for(
      spaces.size(),
      [&](std::size_t i) { per_space[i] = verify_tiny_space(spaces[i], cfg.negative_control); },
      cfg.threads);
  const auto selected = [&](const OracleCheck& c) {
    return std::any_of(cfg.oracle_checks.begin(), cfg.oracle_checks.end(),
                       [&](const std::string& p) { return p == "all" || c.check.rfind(p, 0) == 0; });
  };
  for (auto& v : per_space) std::copy_if(v.begin(), v.end(), std::back_inserter(r.checks), selected);
  if (cfg.bloat_cases) r.bloat = verify_bloat_cases();
  return r;
}

std::string oracle_checks_csv(const OracleResult& r) {
  std::ostringstream out;
  out << "space,check,checked,violations,gated,status\n";
  for (const auto& c : r.checks) {
    const char* status = c.violations == 0 ? "pass" : (c.gated ? "fail" : "note");
    out << c.target << ',' << c.check << ',' << c.checked << ',' << c.violations << ','
        << (c.gated ? "yes" : "no") << ',' << status << '\n';
  }
  return out.str();
}

std::string bloat_csv(const std::vector<BloatRow>& rows) {
  std::ostringstream out;
  out << "case,m1,m2,omega,omega_lower,omega_upper,omega_inside,lambda,lambda_lower,"
         "lambda_upper,lambda_inside\n";
  for (const auto& b : rows) {
    out << b.name << ',' << b.m1 << ',' << b.m2 << ',' << format_double(b.omega) << ','
        << format_double(b.omega_lower) << ',' << format_double(b.omega_upper) << ','
        << (b.omega_inside ? "yes" : "no") << ',' << format_double(b.lambda) << ','
        << format_double(b.lambda_lower) << ',' << format_double(b.lambda_upper) << ','
        << (b.lambda_inside ? "yes" : "no") << '\n';
  }
  return out.str();
}

std::string bounds_query_csv(const ExperimentConfig& cfg) {
  const auto& p = cfg.grid.params;
  p.validate();
  const std::size_t m = cfg.query_m, m2 = cfg.query_m2, d = cfg.query_d, u = cfg.query_u;
  std::ostringstream out;
  out << "quantity,lower,upper,note\n";
  const auto [lo, hi] = delta_star_bounds(m, p);
  out << "delta_star," << lo << ',' << hi << ",\n";
  const auto phi = phi_bounds(m, d, p);
  out << "phi," << format_double(phi.inf) << ',' << format_double(phi.sup) << ','
      << (phi.feasible ? "" : "infeasible") << '\n';
  if (m2 >= m) {
    const auto om = omega_bounds(m, m2, p);
    const auto la = lambda_bounds(m, m2, p);
    out << "omega," << format_double(om.lower()) << ',' << format_double(om.upper()) << ",\n";
    out << "lambda," << format_double(la.lower()) << ',' << format_double(la.upper()) << ",\n";
  }
  const auto rate = constructive_rate_ub(d, m, u, p, cfg.grid.truncated);
  out << "rate_ub,," << format_double(rate.rate) << ','
      << (rate.truncation_active ? "truncated" : "") << '\n';
  const auto q = min_hitting_time(static_cast<double>(d), m, u, p, cfg.grid.epsilon,
                                  cfg.grid.truncated);
  if (q) {
    out << "hitting_time," << *q << ',' << *q << ",\n";
  } else {
    out << "hitting_time,,,unreached\n";
  }
  return out.str();
}

} // namespace lgpkit::cli
