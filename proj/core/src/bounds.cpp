#include "lgpkit/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgpkit/errors.hpp"

namespace lgpkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// exponent * log(base) with 0^0 = 1.
double log_power(double base, std::size_t exponent) {
  if (exponent == 0) return 0.0;
  if (base <= 0.0) return kNegInf;
  return static_cast<double>(exponent) * std::log(base);
}

Rational rational_power(const Rational& base, std::size_t exponent) {
  Rational r = 1;
  for (std::size_t k = 0; k < exponent; ++k) r *= base;
  return r;
}

BigInt big_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (std::uint64_t t = 1; t <= k; ++t) {
    r *= n - k + t;
    r /= t;
  }
  return r;
}

std::size_t omega_index(std::size_t m1, const SpaceParams& p, OmegaStart start) {
  const std::size_t free_regs = p.gamma - p.gamma_out;
  const std::size_t floor_value = start == OmegaStart::Zero ? 0 : 1;
  const std::size_t raw = free_regs > m1 ? free_regs - m1 : 0;
  return std::max(floor_value, raw);
}

std::size_t lambda_index(std::size_t m1, const SpaceParams& p) {
  return std::min(p.gamma, p.gamma_out + m1);
}

void check_sizes(std::size_t m1, std::size_t m2) {
  if (m2 < m1) throw InputError("bloating factor needs m2 >= m1");
}

// The three pieces shared by the log and exact routes.
struct OmegaShape {
  std::size_t lo;
  std::size_t hi;
  std::uint64_t upper_num; // upper base = m2 * upper_num * n / (2 gamma)
};

OmegaShape omega_shape(std::size_t m1, const SpaceParams& p, OmegaStart start) {
  const std::size_t w = omega_index(m1, p, start);
  const std::size_t free_regs = p.gamma - p.gamma_out;
  const std::uint64_t width = free_regs + 1 >= w ? free_regs + 1 - w : 0;
  return {w, free_regs, (free_regs + w) * width};
}

OmegaShape lambda_shape(std::size_t m1, const SpaceParams& p) {
  const std::size_t l = lambda_index(m1, p);
  return {p.gamma_out, l, (p.gamma_out + l) * (l - p.gamma_out + 1)};
}

BoundReport report_from(const OmegaShape& s, std::size_t m2, std::size_t delta,
                        const SpaceParams& p) {
  BoundReport r;
  if (delta == 0) {
    // Nothing is inserted: the only grown program is the program itself.
    r.kind = BoundReport::Kind::Exact;
    return r;
  }
  std::vector<double> terms;
  for (std::size_t i = s.lo; i <= s.hi; ++i) {
    terms.push_back(log_power(static_cast<double>(i) * static_cast<double>(p.n) /
                                  static_cast<double>(p.gamma),
                              delta));
  }
  r.log_lower = log_sum_exp(terms);
  r.log_upper = log_power(static_cast<double>(m2) * static_cast<double>(s.upper_num) *
                              static_cast<double>(p.n) / (2.0 * static_cast<double>(p.gamma)),
                          delta);
  if (r.log_lower == r.log_upper) r.kind = BoundReport::Kind::Exact;
  return r;
}

ExactBounds exact_from(const OmegaShape& s, std::size_t m2, std::size_t delta,
                       const SpaceParams& p) {
  ExactBounds b;
  if (delta == 0) {
    b.lower = 1;
    b.upper = 1;
    return b;
  }
  b.lower = 0;
  for (std::size_t i = s.lo; i <= s.hi; ++i) {
    b.lower += rational_power(Rational(BigInt(i) * p.n, BigInt(p.gamma)), delta);
  }
  b.upper = rational_power(Rational(BigInt(m2) * s.upper_num * p.n, BigInt(2 * p.gamma)), delta);
  return b;
}

double log_omega_upper(std::size_t m1, std::size_t m2, const SpaceParams& p, OmegaStart start) {
  const auto s = omega_shape(m1, p, start);
  return log_power(static_cast<double>(m2) * static_cast<double>(s.upper_num) *
                       static_cast<double>(p.n) / (2.0 * static_cast<double>(p.gamma)),
                   m2 - m1);
}

double log_lambda_upper(std::size_t m1, std::size_t m2, const SpaceParams& p) {
  const auto s = lambda_shape(m1, p);
  return log_power(static_cast<double>(m2) * static_cast<double>(s.upper_num) *
                       static_cast<double>(p.n) / (2.0 * static_cast<double>(p.gamma)),
                   m2 - m1);
}

std::size_t j_max(std::size_t delta, std::size_t i, std::size_t u) {
  return std::min((u - i) / 2, delta - i);
}

void check_i(std::size_t delta, std::size_t i, std::size_t u) {
  if (i < 1 || i > std::min(delta, u)) {
    throw InputError("reduction i must lie in [1, min(delta*, u)]");
  }
}

} // namespace

void SpaceParams::validate() const {
  if (gamma < 1) throw InputError("gamma must be at least 1");
  if (gamma_out < 1 || gamma_out > gamma) throw InputError("gamma_out must be in [1, gamma]");
  if (n < 1) throw InputError("instruction-set size n must be positive");
  if (m_star < 1) throw InputError("m* must be at least 1");
}

SpaceParams SpaceParams::nguyen4() { return SpaceParams{}; }

double BoundReport::lower() const { return std::exp(log_lower); }
double BoundReport::upper() const { return std::exp(log_upper); }

double log_binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return kNegInf;
  k = std::min(k, n - k);
  double r = 0.0;
  for (std::uint64_t t = 1; t <= k; ++t) {
    r += std::log(static_cast<double>(n - k + t)) - std::log(static_cast<double>(t));
  }
  return r;
}

double log_sum_exp(const std::vector<double>& xs) {
  double hi = kNegInf;
  for (double x : xs) hi = std::max(hi, x);
  if (hi == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

std::pair<std::size_t, std::size_t> delta_star_bounds(std::size_t m, const SpaceParams& p) {
  return {p.m_star > m ? p.m_star - m : 0, p.m_star + m};
}

PhiBounds phi_bounds(std::size_t m, std::size_t d, const SpaceParams& p) {
  const double md = static_cast<double>(m);
  const double dd = static_cast<double>(d);
  const double ms = static_cast<double>(p.m_star);
  PhiBounds b;
  b.inf = md + dd - 2.0 * std::min({(dd - ms + md) / 2.0, dd, md});
  b.sup = md + dd - 2.0 * std::max(0.0, dd - ms);
  b.feasible = b.sup >= b.inf;
  return b;
}

BoundReport omega_bounds(std::size_t m1, std::size_t m2, const SpaceParams& p, OmegaStart start) {
  p.validate();
  check_sizes(m1, m2);
  return report_from(omega_shape(m1, p, start), m2, m2 - m1, p);
}

ExactBounds omega_bounds_exact(std::size_t m1, std::size_t m2, const SpaceParams& p,
                               OmegaStart start) {
  p.validate();
  check_sizes(m1, m2);
  return exact_from(omega_shape(m1, p, start), m2, m2 - m1, p);
}

BoundReport lambda_bounds(std::size_t m1, std::size_t m2, const SpaceParams& p) {
  p.validate();
  check_sizes(m1, m2);
  return report_from(lambda_shape(m1, p), m2, m2 - m1, p);
}

ExactBounds lambda_bounds_exact(std::size_t m1, std::size_t m2, const SpaceParams& p) {
  p.validate();
  check_sizes(m1, m2);
  return exact_from(lambda_shape(m1, p), m2, m2 - m1, p);
}

BoundReport eta_bounds(EtaKind kind, std::size_t m, std::size_t r_or_a, std::uint64_t big_n,
                       const SpaceParams& p) {
  p.validate();
  BoundReport r;
  r.log_lower = 0.0;
  if (kind == EtaKind::Remove) {
    if (r_or_a > m) throw InputError("cannot remove more instructions than the program holds");
    const double per = static_cast<double>(p.gamma - p.gamma_out) * static_cast<double>(p.n) /
                       static_cast<double>(p.gamma);
    r.log_upper = log_binomial(m, r_or_a) + log_power(per, r_or_a);
  } else {
    if (big_n < 1) throw InputError("N must be positive");
    r.log_upper = std::log(static_cast<double>(big_n)) + log_binomial(m + r_or_a, r_or_a);
  }
  if (r.log_lower == r.log_upper) r.kind = BoundReport::Kind::Exact;
  return r;
}

double ub_offspring_add(std::size_t delta, std::size_t m, std::size_t i, std::size_t u,
                        const SpaceParams& p, OmegaStart start) {
  check_i(delta, i, u);
  const std::size_t jm = j_max(delta, i, u);
  std::vector<double> terms;
  terms.reserve(jm + 1);
  for (std::size_t j = 0; j <= jm; ++j) {
    terms.push_back(log_binomial(delta, i + j) + log_lambda_upper(m + i + j, m + i + 2 * j, p) +
                    log_omega_upper(m + i + 2 * j, m + u, p, start));
  }
  return log_sum_exp(terms) - std::log(static_cast<double>(jm + 1));
}

Rational ub_offspring_add_exact(std::size_t delta, std::size_t m, std::size_t i, std::size_t u,
                                const SpaceParams& p, OmegaStart start) {
  check_i(delta, i, u);
  const std::size_t jm = j_max(delta, i, u);
  Rational sum = 0;
  for (std::size_t j = 0; j <= jm; ++j) {
    const auto lam = lambda_bounds_exact(m + i + j, m + i + 2 * j, p).upper;
    const auto om = omega_bounds_exact(m + i + 2 * j, m + u, p, start).upper;
    sum += Rational(big_binomial(delta, i + j)) * lam * om;
  }
  return sum / Rational(jm + 1);
}

BigInt ub_offspring_remove(std::size_t rho_len, std::size_t u) {
  if (u > rho_len) throw InputError("cannot remove more instructions than the program holds");
  return big_binomial(rho_len, u);
}

std::size_t rate_i1(std::size_t delta, std::size_t u) noexcept { return std::min(delta, u); }

std::size_t rate_i2(std::size_t delta, std::size_t m, std::size_t u) noexcept {
  if (delta + m == 0) return 0;
  return std::min({delta, m, (delta + m - 1) / 2, u});
}

RateResult constructive_rate_ub(std::size_t delta, std::size_t m, std::size_t u,
                                const SpaceParams& p, bool truncated, OmegaStart start) {
  p.validate();
  if (u < 1) throw InputError("step size u must be at least 1");
  RateResult out;
  if (delta == 0) return out;

  const std::size_t i1 = rate_i1(delta, u);
  const std::size_t i2 = rate_i2(delta, m, u);
  const double log_total = log_binomial(m + u, u) + static_cast<double>(u) *
                                                        std::log(static_cast<double>(p.n));
  const double d_i2 = static_cast<double>(i2);

  if (!truncated) {
    std::vector<double> terms;
    for (std::size_t i = 1; i <= i1; ++i) {
      terms.push_back(std::log(static_cast<double>(i)) + ub_offspring_add(delta, m, i, u, p, start));
    }
    out.rate = 0.5 * (std::exp(log_sum_exp(terms) - log_total) + d_i2 * (1.0 + d_i2) / 2.0);
    return out;
  }

  double add = 0.0;
  for (std::size_t i = 1; i <= i1; ++i) {
    const double lub = ub_offspring_add(delta, m, i, u, p, start);
    if (lub > log_total) out.truncation_active = true;
    add += static_cast<double>(i) * std::exp(lub - std::max(lub, log_total));
  }
  add /= static_cast<double>(i1);
  const double remove = i2 == 0 ? 0.0 : (1.0 + d_i2) / 2.0;
  out.rate = 0.5 * (add + remove);
  return out;
}

std::optional<std::uint64_t> min_hitting_time(
    double delta0, double epsilon, const std::function<double(std::size_t)>& rate_at) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  double delta = delta0;
  std::uint64_t steps = 0;
  while (delta > epsilon) {
    if (steps >= kMaxHittingIterations) return std::nullopt;
    const double r = rate_at(static_cast<std::size_t>(std::ceil(delta)));
    if (!(r > 0.0)) return std::nullopt;
    delta -= r;
    ++steps;
  }
  return steps;
}

std::optional<std::uint64_t> min_hitting_time(double delta0, std::size_t m, std::size_t u,
                                              const SpaceParams& p, double epsilon,
                                              bool truncated) {
  std::vector<std::optional<double>> cache(static_cast<std::size_t>(std::ceil(std::max(0.0, delta0))) + 1);
  return min_hitting_time(delta0, epsilon, [&](std::size_t d) {
    if (d >= cache.size()) cache.resize(d + 1);
    if (!cache[d]) cache[d] = constructive_rate_ub(d, m, u, p, truncated).rate;
    return *cache[d];
  });
}

double fitness_gap_bound_linear(double delta, double max_len, const DeltaConstants& c) {
  return c.f_psi * (c.i_sq * delta + c.i_star * (max_len - delta));
}

double fitness_gap_bound(double delta, double max_len, const DeltaConstants& c) {
  if (c.f_psi < 0 || c.psi < 0 || c.i_star < 0 || c.i_sq < 0) {
    throw InputError("distance constants must be non-negative");
  }
  if (c.i_sq < c.i_star) throw InputError("Delta_I2 must not be smaller than Delta_I*");
  return c.f_psi * std::min((c.i_sq - c.i_star) * delta + c.i_star * max_len, c.psi);
}

} // namespace lgpkit
