#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgpkit/errors.hpp"
#include "lgpkit/grid.hpp"
#include "lgpkit_cli/config.hpp"
#include "lgpkit_cli/experiments.hpp"

namespace fs = std::filesystem;
using namespace lgpkit;
using namespace lgpkit::cli;

namespace {

enum Exit { kOk = 0, kInputError = 1, kVerificationFailure = 2 };

struct Options {
  std::string config_path;
  std::string seeds;
  std::string out;
  std::string problem;
  std::string u;
  std::string variant;
  std::vector<std::string> sets;
  std::size_t threads = 0;
  bool negative_control = false;
};

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) apply_settings(cfg, read_key_values(o.config_path));
  KeyValues kv;
  for (const auto& s : o.sets) {
    const auto parsed = parse_key_values(s);
    if (parsed.empty()) throw InputError("--set expects key=value, got '" + s + "'");
    kv.insert(parsed.begin(), parsed.end());
  }
  if (!o.seeds.empty()) kv["seeds"] = o.seeds;
  if (!o.out.empty()) kv["out"] = o.out;
  if (!o.u.empty()) kv["u"] = o.u;
  if (!o.variant.empty()) kv["variant"] = o.variant;
  if (!o.problem.empty()) {
    kv["problem"] = o.problem;
    kv["problems"] = o.problem;
  }
  if (o.threads > 0) kv["threads"] = std::to_string(o.threads);
  if (o.negative_control) kv["negative_control"] = "true";
  apply_settings(cfg, kv);
  return cfg;
}

fs::path prepare_out(const ExperimentConfig& cfg) {
  const fs::path dir = cfg.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto probe = dir / ".lgpkit-write-test";
  {
    std::ofstream f(probe);
    if (!f) throw InputError("output directory '" + dir.string() + "' is not writable");
  }
  fs::remove(probe, ec);
  return dir;
}

void write(const fs::path& path, const std::string& provenance, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write '" + path.string() + "'");
  f << provenance << body;
  std::cout << "wrote " << path.string() << '\n';
}

int cmd_evolve(const ExperimentConfig& cfg) {
  const auto dir = prepare_out(cfg);
  const auto prov = provenance_line("evolve", cfg);
  const auto runs = run_evolve(cfg);
  const auto seeds_per_u = cfg.seeds.size();
  for (std::size_t k = 0; k < cfg.u_values.size(); ++k) {
    const auto u = cfg.u_values[k];
    std::vector<const RunTrace*> traces;
    for (std::size_t s = 0; s < seeds_per_u; ++s) {
      const auto& run = runs[k * seeds_per_u + s];
      traces.push_back(&run.result.trace);
      write(dir / ("trace_u" + std::to_string(u) + "_seed" + std::to_string(run.seed) + ".csv"),
            prov, trace_to_csv(run.result.trace));
    }
    write(dir / ("aggregate_u" + std::to_string(u) + ".csv"), prov,
          aggregate_to_csv(aggregate_traces(traces)));
  }
  const auto problem = make_problem(cfg.problem, cfg.seeds.front());
  write(dir / "summary.csv", prov,
        evolve_summary_csv(runs, register_config_for(problem.train, cfg.gamma)));
  return kOk;
}

int cmd_sample(const ExperimentConfig& cfg) {
  const auto dir = prepare_out(cfg);
  write(dir / "sample.csv", provenance_line("sample", cfg), sample_to_csv(run_sample(cfg)));
  return kOk;
}

int cmd_grid(const ExperimentConfig& cfg) {
  const auto dir = prepare_out(cfg);
  write(dir / "grid.csv", provenance_line("grid", cfg),
        grid_to_csv(run_grid(cfg.grid, cfg.threads)));
  return kOk;
}

int cmd_study(const ExperimentConfig& cfg) {
  const auto dir = prepare_out(cfg);
  const auto prov = provenance_line("study", cfg);
  const auto r = run_study(cfg);
  write(dir / "study_table.csv", prov, study_table_csv(r));
  write(dir / "study_ranks.csv", prov, study_ranks_csv(r));
  return kOk;
}

int cmd_oracle(const ExperimentConfig& cfg) {
  const auto dir = prepare_out(cfg);
  const auto prov = provenance_line("oracle", cfg);
  const auto r = run_oracle(cfg);
  write(dir / "oracle_checks.csv", prov, oracle_checks_csv(r));
  if (cfg.bloat_cases) write(dir / "bloating_factors.csv", prov, bloat_csv(r.bloat));
  for (const auto& c : r.checks) {
    if (c.gated && c.violations > 0) {
      std::cerr << "violation: " << c.target << ' ' << c.check << ": " << c.violations << " of "
                << c.checked << '\n';
    }
  }
  for (const auto& b : r.bloat) {
    if (!b.omega_inside) std::cerr << "violation: " << b.name << " omega outside its bounds\n";
    if (!b.lambda_inside) std::cerr << "violation: " << b.name << " lambda outside its bounds\n";
  }
  return r.passed() ? kOk : kVerificationFailure;
}

int cmd_bounds(const ExperimentConfig& cfg) {
  std::cout << bounds_query_csv(cfg);
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear genetic programming experiments and exact verifications"};
  app.require_subcommand(1);
  Options o;
  int (*command)(const ExperimentConfig&) = nullptr;

  auto add = [&](const char* name, const char* help, int (*fn)(const ExperimentConfig&)) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("-c,--config", o.config_path, "key = value experiment file");
    sub->add_option("--seed", o.seeds, "seed list, e.g. 1-50 or 3,7");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--problem", o.problem, "benchmark name or CSV path");
    sub->add_option("--u", o.u, "step size list, e.g. 1,3,5 or 1:15:2");
    sub->add_option("--variant", o.variant, "instruction-set variant");
    sub->add_option("--set", o.sets, "extra key=value overrides")->take_all();
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->callback([&command, fn] { command = fn; });
    return sub;
  };
  add("evolve", "run evolution per seed and step size", cmd_evolve);
  add("sample", "mean RSE of random programs by size", cmd_sample);
  add("grid", "constructive rate and hitting time over (u, d, m)", cmd_grid);
  add("study", "compare instruction-set variants", cmd_study);
  add("oracle", "exhaustive checks on tiny spaces", cmd_oracle)
      ->add_flag("--negative-control", o.negative_control, "halve the fitness constant");
  add("bounds", "print the bounds for one query", cmd_bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    return command(load(o));
  } catch (const GuardViolation& e) {
    std::cerr << "refused: " << e.what() << " (estimated " << e.estimate() << " programs)\n";
    return kInputError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
}
