#include "lgpkit_cli/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lgpkit/errors.hpp"
#include "lgpkit/text.hpp"
#include "lgpkit/tiny_spaces.hpp"

namespace lgpkit::cli {

using detail::format_double;
using detail::parse_double;
using detail::parse_uint;
using detail::trim;

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto p = text.find(sep, start);
    out.push_back(trim(text.substr(start, p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InputError("bad boolean '" + std::string(s) + "'");
}

IntRange parse_range(std::string_view s, const char* what) {
  const auto parts = split(s, ':');
  if (parts.size() == 1) {
    const auto v = parse_uint(parts[0], what);
    return {v, v};
  }
  if (parts.size() != 2) throw InputError(std::string("bad ") + what + " range '" + std::string(s) + "'");
  return {parse_uint(parts[0], what), parse_uint(parts[1], what)};
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (const auto& x : xs) out += (out.empty() ? "" : ",") + x;
  return out;
}

std::string join_sizes(const std::vector<std::size_t>& xs) {
  std::string out;
  for (auto x : xs) out += (out.empty() ? "" : ",") + std::to_string(x);
  return out;
}

std::string range_text(const IntRange& r) {
  return std::to_string(r.first) + ":" + std::to_string(r.last);
}

} // namespace

KeyValues parse_key_values(std::string_view text) {
  KeyValues kv;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("config line " + std::to_string(line_no) + " has no '='");
    }
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError("config line " + std::to_string(line_no) + " has no key");
    kv[std::string(key)] = std::string(trim(line.substr(eq + 1)));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str());
}

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  for (auto part : split(text, ',')) {
    if (part.empty()) continue;
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_uint(part, "seed"));
      continue;
    }
    const auto lo = parse_uint(trim(part.substr(0, dash)), "seed");
    const auto hi = parse_uint(trim(part.substr(dash + 1)), "seed");
    if (lo > hi) throw InputError("empty seed range '" + std::string(part) + "'");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  std::set<std::uint64_t> unique(out.begin(), out.end());
  if (unique.size() != out.size()) throw InputError("seeds must be distinct");
  if (out.empty()) throw InputError("seed list is empty");
  return out;
}

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw InputError("size list must be first:last:step");
    const auto first = parse_uint(parts[0], "size");
    const auto last = parse_uint(parts[1], "size");
    const auto step = parse_uint(parts[2], "step");
    if (step == 0 || first > last) throw InputError("empty size list");
    for (auto m = first; m <= last; m += step) out.push_back(m);
    return out;
  }
  for (auto part : split(text, ',')) {
    if (!part.empty()) out.push_back(parse_uint(part, "size"));
  }
  if (out.empty()) throw InputError("size list is empty");
  return out;
}

std::vector<std::string> parse_name_list(std::string_view text) {
  std::vector<std::string> out;
  for (auto part : split(text, ',')) {
    if (!part.empty()) out.emplace_back(part);
  }
  if (out.empty()) throw InputError("name list is empty");
  return out;
}

ExperimentConfig::ExperimentConfig() {
  for (std::uint64_t s = 1; s <= 50; ++s) seeds.push_back(s);
  for (const auto& s : bundled_tiny_spaces()) tiny_spaces.push_back(s.name);
}

std::string ExperimentConfig::canonical() const {
  const auto& e = evolution;
  const auto& p = grid.params;
  std::map<std::string, std::string> kv = {
      {"experiment", experiment},
      {"problem", problem},
      {"problems", join(problems)},
      {"variants", join(variants)},
      {"variant", variant},
      {"pop_size", std::to_string(e.pop_size)},
      {"generations", std::to_string(e.generations)},
      {"add_rate", format_double(e.add_rate)},
      {"remove_rate", format_double(e.remove_rate)},
      {"reproduction_rate", format_double(e.reproduction_rate)},
      {"tournament_size", std::to_string(e.tournament_size)},
      {"elitism", std::to_string(e.elitism)},
      {"init_len_min", std::to_string(e.init_len_min)},
      {"init_len_max", std::to_string(e.init_len_max)},
      {"max_len", std::to_string(e.max_len)},
      {"u", join_sizes(u_values)},
      {"seeds", format_seed_list(seeds)},
      {"gamma", std::to_string(gamma)},
      {"sample_sizes", join_sizes(sample_sizes)},
      {"samples_per_size", std::to_string(samples_per_size)},
      {"grid_gamma", std::to_string(p.gamma)},
      {"grid_gamma_out", std::to_string(p.gamma_out)},
      {"grid_n", std::to_string(p.n)},
      {"grid_m_star", std::to_string(p.m_star)},
      {"grid_u", range_text(grid.u)},
      {"grid_d", range_text(grid.d)},
      {"grid_m", range_text(grid.m)},
      {"epsilon", format_double(grid.epsilon)},
      {"truncated", grid.truncated ? "true" : "false"},
      {"tiny_spaces", join(tiny_spaces)},
      {"tiny_m_max", std::to_string(tiny_m_max)},
      {"oracle_checks", join(oracle_checks)},
      {"bloat_cases", bloat_cases ? "true" : "false"},
      {"negative_control", negative_control ? "true" : "false"},
      {"bucket_width", format_double(bucket_width)},
      {"similar_eps", format_double(similar_eps)},
      {"m", std::to_string(query_m)},
      {"m2", std::to_string(query_m2)},
      {"d", std::to_string(query_d)},
      {"query_u", std::to_string(query_u)},
  };
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

void apply_settings(ExperimentConfig& cfg, const KeyValues& kv) {
  auto& e = cfg.evolution;
  auto& p = cfg.grid.params;
  for (const auto& [key, raw] : kv) {
    const std::string_view v = raw;
    const char* k = key.c_str();
    if (key == "experiment") cfg.experiment = raw;
    else if (key == "problem") cfg.problem = raw;
    else if (key == "problems") cfg.problems = parse_name_list(v);
    else if (key == "variants") cfg.variants = parse_name_list(v);
    else if (key == "variant") cfg.variant = raw;
    else if (key == "pop_size") e.pop_size = parse_uint(v, k);
    else if (key == "generations") e.generations = parse_uint(v, k);
    else if (key == "add_rate") e.add_rate = parse_double(v, k);
    else if (key == "remove_rate") e.remove_rate = parse_double(v, k);
    else if (key == "reproduction_rate") e.reproduction_rate = parse_double(v, k);
    else if (key == "tournament_size") e.tournament_size = parse_uint(v, k);
    else if (key == "elitism") e.elitism = parse_uint(v, k);
    else if (key == "init_len_min") e.init_len_min = parse_uint(v, k);
    else if (key == "init_len_max") e.init_len_max = parse_uint(v, k);
    else if (key == "max_len") e.max_len = parse_uint(v, k);
    else if (key == "u") cfg.u_values = parse_size_list(v);
    else if (key == "seeds") cfg.seeds = parse_seed_list(v);
    else if (key == "out") cfg.out_dir = raw;
    else if (key == "gamma") cfg.gamma = parse_uint(v, k);
    else if (key == "threads") cfg.threads = parse_uint(v, k);
    else if (key == "sample_sizes") cfg.sample_sizes = parse_size_list(v);
    else if (key == "samples_per_size") cfg.samples_per_size = parse_uint(v, k);
    else if (key == "grid_gamma") p.gamma = parse_uint(v, k);
    else if (key == "grid_gamma_out") p.gamma_out = parse_uint(v, k);
    else if (key == "grid_n") p.n = parse_uint(v, k);
    else if (key == "grid_m_star") p.m_star = parse_uint(v, k);
    else if (key == "grid_u") cfg.grid.u = parse_range(v, k);
    else if (key == "grid_d") cfg.grid.d = parse_range(v, k);
    else if (key == "grid_m") cfg.grid.m = parse_range(v, k);
    else if (key == "epsilon") cfg.grid.epsilon = parse_double(v, k);
    else if (key == "truncated") cfg.grid.truncated = parse_bool(v);
    else if (key == "tiny_spaces") cfg.tiny_spaces = parse_name_list(v);
    else if (key == "tiny_m_max") cfg.tiny_m_max = parse_uint(v, k);
    else if (key == "oracle_checks") cfg.oracle_checks = parse_name_list(v);
    else if (key == "bloat_cases") cfg.bloat_cases = parse_bool(v);
    else if (key == "negative_control") cfg.negative_control = parse_bool(v);
    else if (key == "bucket_width") cfg.bucket_width = parse_double(v, k);
    else if (key == "similar_eps") cfg.similar_eps = parse_double(v, k);
    else if (key == "m") cfg.query_m = parse_uint(v, k);
    else if (key == "m2") cfg.query_m2 = parse_uint(v, k);
    else if (key == "d") cfg.query_d = parse_uint(v, k);
    else if (key == "query_u") cfg.query_u = parse_uint(v, k);
    else throw InputError("unknown config key '" + key + "'");
  }
  e.step_size = cfg.u_values.front();
}

std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_seed_list(const std::vector<std::uint64_t>& seeds) {
  std::vector<std::uint64_t> s = seeds;
  std::sort(s.begin(), s.end());
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[j] + 1) ++j;
    if (!out.empty()) out += ",";
    out += std::to_string(s[i]);
    if (j > i) out += "-" + std::to_string(s[j]);
    i = j + 1;
  }
  return out;
}

std::string provenance_line(std::string_view command, const ExperimentConfig& cfg) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a(cfg.canonical())));
  return "# lgpkit " + std::string(command) + " config_hash=" + hex +
         " seeds=" + format_seed_list(cfg.seeds) + "\n";
}

} // namespace lgpkit::cli
