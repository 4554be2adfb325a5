#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace lgpkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct SpaceParams {
  std::size_t gamma = 8;
  std::size_t gamma_out = 1;
  std::uint64_t n = 5184;
  std::size_t m_star = 11;
  std::size_t max_len = 100;

  void validate() const;

  /// gamma = 8, gamma_out = 1, default functions over one feature, m* = 11, L = 100.
  static SpaceParams nguyen4();
};

/// Lower index of the Omega sum: max{0, gamma - gamma_out - m1} or
/// max{1, gamma - gamma_out - m1}.
enum class OmegaStart { Zero, One };

/// Natural logarithms of a lower and an upper bound. -inf encodes zero.
struct BoundReport {
  enum class Kind { Bound, Exact };

  double log_lower = 0.0;
  double log_upper = 0.0;
  Kind kind = Kind::Bound;

  double lower() const;
  double upper() const;
};

struct ExactBounds {
  Rational lower;
  Rational upper;
};

double log_binomial(std::uint64_t n, std::uint64_t k);
/// log(sum exp(x_i)); -inf for an empty or all -inf input.
double log_sum_exp(const std::vector<double>& xs);

/// [max{0, m* - m}, m* + m].
std::pair<std::size_t, std::size_t> delta_star_bounds(std::size_t m, const SpaceParams& p);

struct PhiBounds {
  double inf = 0.0;
  double sup = 0.0;
  bool feasible = true; // false when sup < inf
};
PhiBounds phi_bounds(std::size_t m, std::size_t d, const SpaceParams& p);

/// Neutral bloating factor bounds for growing a size-m1 program to m2 by introns.
BoundReport omega_bounds(std::size_t m1, std::size_t m2, const SpaceParams& p,
                         OmegaStart start = OmegaStart::Zero);
ExactBounds omega_bounds_exact(std::size_t m1, std::size_t m2, const SpaceParams& p,
                               OmegaStart start = OmegaStart::Zero);

/// Non-neutral bloating factor bounds for growing m1 to m2 by exons.
BoundReport lambda_bounds(std::size_t m1, std::size_t m2, const SpaceParams& p);
ExactBounds lambda_bounds_exact(std::size_t m1, std::size_t m2, const SpaceParams& p);

enum class EtaKind { Remove, Add };
/// Open bounds 1 < eta_r < C(m,r)((gamma-gamma_out)n/gamma)^r and
/// 1 < eta_a < N C(m+a,a).
BoundReport eta_bounds(EtaKind kind, std::size_t m, std::size_t r_or_a, std::uint64_t big_n,
                       const SpaceParams& p);

/// Upper bound on offspring that reduce delta* by i when adding u
/// instructions, averaged uniformly over the admissible unnecessary count j.
/// Returns the natural log. Throws InputError unless 1 <= i <= min(delta, u).
double ub_offspring_add(std::size_t delta, std::size_t m, std::size_t i, std::size_t u,
                        const SpaceParams& p, OmegaStart start = OmegaStart::Zero);
Rational ub_offspring_add_exact(std::size_t delta, std::size_t m, std::size_t i, std::size_t u,
                                const SpaceParams& p, OmegaStart start = OmegaStart::Zero);

/// C(|rho|, u). Throws InputError when u > |rho|.
BigInt ub_offspring_remove(std::size_t rho_len, std::size_t u);

struct RateResult {
  double rate = 0.0;
  /// True when at least one add-side probability exceeded 1 and was capped.
  bool truncation_active = false;
};

/// Upper bound on the constructive moving rate of delta*. The untruncated
/// form can exceed one probability unit per term; the truncated form caps
/// each add-side probability at 1 and rescales both terms by 1/I1, 1/I2.
RateResult constructive_rate_ub(std::size_t delta, std::size_t m, std::size_t u,
                                const SpaceParams& p, bool truncated = true,
                                OmegaStart start = OmegaStart::Zero);

/// I1 = min{delta, u}; I2 = floor(min{delta, m, (delta+m-1)/2, u}).
std::size_t rate_i1(std::size_t delta, std::size_t u) noexcept;
std::size_t rate_i2(std::size_t delta, std::size_t m, std::size_t u) noexcept;

inline constexpr double kDefaultEpsilon = 1e-4;
inline constexpr std::uint64_t kMaxHittingIterations = 1'000'000;

/// Iterates delta <- delta - rate(ceil(delta)) until delta <= epsilon.
/// nullopt when the rate is zero first or the iteration cap is hit.
std::optional<std::uint64_t> min_hitting_time(
    double delta0, double epsilon, const std::function<double(std::size_t)>& rate_at);
std::optional<std::uint64_t> min_hitting_time(double delta0, std::size_t m, std::size_t u,
                                              const SpaceParams& p,
                                              double epsilon = kDefaultEpsilon,
                                              bool truncated = true);

/// Distance constants of the fitness-gap bounds.
struct DeltaConstants {
  double f_psi = 0.0;  // Lipschitz-like ratio of fitness gap to semantic distance
  double psi = 0.0;    // largest distance between a semantics and an optimal one
  double i_star = 0.0; // largest distance change under optimal-program instructions
  double i_sq = 0.0;   // same, one instruction from I and one from I*
};

/// Delta_fPsi (Delta_I2 delta + Delta_I* (L - delta)).
double fitness_gap_bound_linear(double delta, double max_len, const DeltaConstants& c);
/// Delta_fPsi min{(Delta_I2 - Delta_I*) delta + Delta_I* L, Delta_Psi}.
/// Throws InputError for negative constants or Delta_I2 < Delta_I*.
double fitness_gap_bound(double delta, double max_len, const DeltaConstants& c);

} // namespace lgpkit
