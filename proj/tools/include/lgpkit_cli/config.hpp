#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lgpkit/evolution.hpp"
#include "lgpkit/grid.hpp"

namespace lgpkit::cli {

/// Flat key = value settings, one per line; '#' starts a comment.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::string_view text);
KeyValues read_key_values(const std::string& path);

/// "1-50", "3,7,9" or a mix such as "1-3,10".
std::vector<std::uint64_t> parse_seed_list(std::string_view text);
/// "5:50:5" (first:last:step), "7" or "1,3,5".
std::vector<std::size_t> parse_size_list(std::string_view text);
std::vector<std::string> parse_name_list(std::string_view text);

struct ExperimentConfig {
  std::string experiment = "default";
  std::string problem = "Nguyen4";
  std::vector<std::string> problems = {"Nguyen4", "Nguyen5", "Nguyen7", "Keijzer11", "R1"};
  std::vector<std::string> variants = {"default", "fx1.1", "fx2", "fx4",
                                       "exp",     "add+100", "add+1000"};
  std::string variant = "default";
  EvolutionConfig evolution;
  std::vector<std::size_t> u_values = {1};
  std::vector<std::uint64_t> seeds;
  std::string out_dir = ".";
  std::size_t gamma = 8;
  std::size_t threads = 0;

  // sample
  std::vector<std::size_t> sample_sizes = {5, 10, 15, 20, 25, 30, 35, 40, 45, 50};
  std::size_t samples_per_size = 1000;

  // grid
  GridSpec grid;

  // oracle
  std::vector<std::string> tiny_spaces;
  std::size_t tiny_m_max = 0; // 0 keeps each space's own m_max
  bool bloat_cases = true;
  std::vector<std::string> oracle_checks = {"all"}; // check-name prefixes
  bool negative_control = false;
  double bucket_width = 0.05;
  double similar_eps = 0.5;

  // bounds
  std::size_t query_m = 5;
  std::size_t query_m2 = 6;
  std::size_t query_d = 3;
  std::size_t query_u = 1;

  ExperimentConfig();

  /// Every recognised key, sorted, in key = value form.
  std::string canonical() const;
};

/// Applies recognised keys; throws InputError on unknown keys or bad values.
void apply_settings(ExperimentConfig& cfg, const KeyValues& kv);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes) noexcept;

/// "# lgpkit <command> config_hash=<hex> seeds=<list>".
std::string provenance_line(std::string_view command, const ExperimentConfig& cfg);

std::string format_seed_list(const std::vector<std::uint64_t>& seeds);

} // namespace lgpkit::cli
