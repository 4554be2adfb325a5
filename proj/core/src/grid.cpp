#include "lgpkit/grid.hpp"

#include <cmath>

#include "lgpkit/errors.hpp"
#include "lgpkit/parallel.hpp"
#include "lgpkit/text.hpp"

namespace lgpkit {

std::vector<GridPoint> run_grid(const GridSpec& spec, std::size_t threads) {
  spec.params.validate();
  for (const auto* r : {&spec.u, &spec.d, &spec.m}) {
    if (r->first > r->last) throw InputError("grid range is empty");
  }
  if (spec.u.first < 1) throw InputError("step size u must be at least 1");

  const std::size_t nu = spec.u.last - spec.u.first + 1;
  const std::size_t nd = spec.d.last - spec.d.first + 1;
  const std::size_t nm = spec.m.last - spec.m.first + 1;
  std::vector<GridPoint> points(nu * nd * nm);

  // One task per (u, m): the hitting-time iteration only ever needs rates at
  // integer distances up to the largest d, so they are computed once.
  parallel_for(
      nu * nm,
      [&](std::size_t task) {
        const std::size_t u = spec.u.first + task / nm;
        const std::size_t m = spec.m.first + task % nm;
        std::vector<RateResult> rates(spec.d.last + 1);
        for (std::size_t d = 0; d <= spec.d.last; ++d) {
          rates[d] = constructive_rate_ub(d, m, u, spec.params, spec.truncated);
        }
        const auto rate_at = [&](std::size_t d) { return rates[d].rate; };
        for (std::size_t d = spec.d.first; d <= spec.d.last; ++d) {
          GridPoint& g = points[((u - spec.u.first) * nd + (d - spec.d.first)) * nm +
                                (m - spec.m.first)];
          g.u = u;
          g.d = d;
          g.m = m;
          g.rate_ub = rates[d].rate;
          g.truncated = rates[d].truncation_active;
          g.hitting_time = min_hitting_time(static_cast<double>(d), spec.epsilon, rate_at);
        }
      },
      threads);
  return points;
}

std::string grid_to_csv(const std::vector<GridPoint>& points) {
  std::string out = "u,d,m,rate_ub,hitting_time,truncated\n";
  for (const auto& g : points) {
    out += std::to_string(g.u) + "," + std::to_string(g.d) + "," + std::to_string(g.m) + "," +
           detail::format_double(g.rate_ub) + "," +
           (g.hitting_time ? std::to_string(*g.hitting_time) : std::string("unreached")) + "," +
           (g.truncated ? "true" : "false") + "\n";
  }
  return out;
}

} // namespace lgpkit
