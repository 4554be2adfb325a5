#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lgpkit/bounds.hpp"

namespace lgpkit {

struct IntRange {
  std::size_t first = 1;
  std::size_t last = 1;
};

struct GridSpec {
  SpaceParams params = SpaceParams::nguyen4();
  IntRange u{1, 35};
  IntRange d{1, 10};
  IntRange m{1, 100};
  double epsilon = kDefaultEpsilon;
  bool truncated = true;
};

struct GridPoint {
  std::size_t u = 0;
  std::size_t d = 0;
  std::size_t m = 0;
  double rate_ub = 0.0;
  std::optional<std::uint64_t> hitting_time;
  bool truncated = false; // truncation was active for this cell
};

/// One point per (u, d, m) cell, sorted lexicographically.
std::vector<GridPoint> run_grid(const GridSpec& spec, std::size_t threads = 0);

/// Header u,d,m,rate_ub,hitting_time,truncated; unreached hitting times
/// print as "unreached".
std::string grid_to_csv(const std::vector<GridPoint>& points);

} // namespace lgpkit
