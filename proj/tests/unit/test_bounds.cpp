#include <cmath>
#include <random>

#include "doctest.h"
#include "lgpkit/bounds.hpp"
#include "lgpkit/errors.hpp"

using namespace lgpkit;

namespace {

SpaceParams params(std::size_t gamma, std::size_t gamma_out, std::uint64_t n, std::size_t m_star = 4) {
  SpaceParams p;
  p.gamma = gamma;
  p.gamma_out = gamma_out;
  p.n = n;
  p.m_star = m_star;
  return p;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

// Log of an exact value, allowing zero on both sides.
bool same_log(double lg, const Rational& exact) {
  if (exact == 0) return std::isinf(lg) && lg < 0;
  return lg == doctest::Approx(std::log(to_double(exact))).epsilon(1e-10);
}

// Direct double evaluation of the bound formulas, used as a test-side oracle.
double binom(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  double r = 1;
  for (std::size_t t = 1; t <= k; ++t) r = r * static_cast<double>(n - k + t) / static_cast<double>(t);
  return r;
}

double omega_upper_ref(std::size_t m1, std::size_t m2, const SpaceParams& p) {
  const double free_regs = static_cast<double>(p.gamma - p.gamma_out);
  const double w = std::max(0.0, free_regs - static_cast<double>(m1));
  return std::pow(static_cast<double>(m2) * (free_regs + w) * (free_regs - w + 1) *
                      static_cast<double>(p.n) / (2.0 * static_cast<double>(p.gamma)),
                  static_cast<double>(m2 - m1));
}

double lambda_upper_ref(std::size_t m1, std::size_t m2, const SpaceParams& p) {
  const double go = static_cast<double>(p.gamma_out);
  const double l = std::min(static_cast<double>(p.gamma), go + static_cast<double>(m1));
  return std::pow(static_cast<double>(m2) * (go + l) * (l - go + 1) * static_cast<double>(p.n) /
                      (2.0 * static_cast<double>(p.gamma)),
                  static_cast<double>(m2 - m1));
}

double ub_add_ref(std::size_t delta, std::size_t m, std::size_t i, std::size_t u,
                  const SpaceParams& p) {
  const std::size_t jm = std::min((u - i) / 2, delta - i);
  double s = 0;
  for (std::size_t j = 0; j <= jm; ++j) {
    s += binom(delta, i + j) * lambda_upper_ref(m + i + j, m + i + 2 * j, p) *
         omega_upper_ref(m + i + 2 * j, m + u, p);
  }
  return s / static_cast<double>(jm + 1);
}

} // namespace

TEST_CASE("delta* bounds") {
  auto p = params(8, 1, 5184, 5);
  CHECK(delta_star_bounds(5, p) == std::pair<std::size_t, std::size_t>{0, 10});
  p.m_star = 11;
  CHECK(delta_star_bounds(0, p) == std::pair<std::size_t, std::size_t>{11, 11});
  CHECK(delta_star_bounds(100, p) == std::pair<std::size_t, std::size_t>{0, 111});
}

TEST_CASE("phi bounds") {
  const auto p = params(4, 1, 8, 4);
  auto b = phi_bounds(5, 3, p);
  CHECK(b.inf == 4.0);
  CHECK(b.sup == 8.0);
  CHECK(b.feasible);
  b = phi_bounds(6, 0, p);
  CHECK(b.inf == 6.0);
  CHECK(b.sup == 6.0);
  b = phi_bounds(2, 10, p);
  CHECK(b.inf == 8.0);
  CHECK(b.sup == 0.0);
  CHECK_FALSE(b.feasible);
}

TEST_CASE("omega bounds examples") {
  const auto p = params(4, 1, 8);
  auto r = omega_bounds(3, 4, p);
  CHECK(r.lower() == doctest::Approx(12.0));
  CHECK(r.upper() == doctest::Approx(48.0));
  auto e = omega_bounds_exact(3, 4, p);
  CHECK(e.lower == 12);
  CHECK(e.upper == 48);

  r = omega_bounds(2, 2, p);
  CHECK(r.upper() == 1.0);
  CHECK(omega_bounds_exact(2, 2, p).upper == 1);

  r = omega_bounds(0, 1, p);
  CHECK(r.lower() == doctest::Approx(6.0));
  CHECK(r.upper() == doctest::Approx(6.0));
  CHECK(r.kind == BoundReport::Kind::Exact);

  CHECK_THROWS_AS(omega_bounds(3, 2, p), InputError);
}

TEST_CASE("omega start switch only drops the zero term") {
  const auto p = params(4, 1, 8);
  for (std::size_t m1 = 0; m1 <= 5; ++m1) {
    for (std::size_t m2 = m1 + 1; m2 <= m1 + 3; ++m2) {
      const auto a = omega_bounds_exact(m1, m2, p, OmegaStart::Zero);
      const auto b = omega_bounds_exact(m1, m2, p, OmegaStart::One);
      CHECK(a.lower == b.lower);
    }
  }
}

TEST_CASE("lambda bounds examples") {
  auto p = params(4, 1, 8);
  auto e = lambda_bounds_exact(3, 4, p);
  CHECK(e.lower == 20);
  CHECK(e.upper == 80);
  CHECK(lambda_bounds(3, 4, p).upper() == doctest::Approx(80.0));
  CHECK(lambda_bounds(2, 2, p).upper() == 1.0);

  p = params(2, 2, 4);
  e = lambda_bounds_exact(1, 2, p);
  CHECK(e.lower == 4);
}

TEST_CASE("eta bounds examples") {
  const auto p = params(4, 1, 8);
  auto r = eta_bounds(EtaKind::Remove, 4, 1, 1, p);
  CHECK(r.upper() == doctest::Approx(24.0));
  r = eta_bounds(EtaKind::Remove, 4, 0, 1, p);
  CHECK(r.upper() == 1.0);
  CHECK(r.kind == BoundReport::Kind::Exact);
  r = eta_bounds(EtaKind::Add, 3, 1, 2, p);
  CHECK(r.upper() == doctest::Approx(8.0));
  CHECK_THROWS_AS(eta_bounds(EtaKind::Remove, 2, 3, 1, p), InputError);
}

TEST_CASE("offspring count examples") {
  const auto p = params(4, 1, 8);
  CHECK(std::exp(ub_offspring_add(2, 3, 1, 2, p)) == doctest::Approx(120.0));
  CHECK(ub_offspring_add_exact(2, 3, 1, 2, p) == 120);
  // i = u collapses to C(delta*, u).
  CHECK(ub_offspring_add_exact(5, 7, 3, 3, p) == 10);
  CHECK(std::exp(ub_offspring_add(5, 7, 3, 3, p)) == doctest::Approx(10.0));
  CHECK_THROWS_AS(ub_offspring_add(0, 3, 1, 2, p), InputError);
  CHECK_THROWS_AS(ub_offspring_add(2, 3, 3, 3, p), InputError);

  CHECK(ub_offspring_remove(10, 2) == 45);
  CHECK(ub_offspring_remove(10, 0) == 1);
  CHECK(ub_offspring_remove(5, 5) == 1);
  CHECK_THROWS_AS(ub_offspring_remove(3, 4), InputError);
}

TEST_CASE("log-space and exact routes agree") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t gamma = 1 + rng() % 8;
    const std::size_t gamma_out = 1 + rng() % gamma;
    const auto p = params(gamma, gamma_out, 1 + rng() % 500);
    const std::size_t m1 = rng() % 12;
    const std::size_t m2 = m1 + rng() % 6;
    const auto lo = omega_bounds(m1, m2, p);
    const auto ex = omega_bounds_exact(m1, m2, p);
    CHECK(same_log(lo.log_lower, ex.lower));
    CHECK(same_log(lo.log_upper, ex.upper));
    const auto ll = lambda_bounds(m1, m2, p);
    const auto le = lambda_bounds_exact(m1, m2, p);
    CHECK(same_log(ll.log_lower, le.lower));
    CHECK(same_log(ll.log_upper, le.upper));

    const std::size_t delta = 1 + rng() % 6;
    const std::size_t u = 1 + rng() % 6;
    const std::size_t i = 1 + rng() % std::min(delta, u);
    const std::size_t m = rng() % 10;
    const double lg = ub_offspring_add(delta, m, i, u, p);
    const auto exact = ub_offspring_add_exact(delta, m, i, u, p);
    CHECK(same_log(lg, exact));
    CHECK(std::exp(lg) == doctest::Approx(ub_add_ref(delta, m, i, u, p)).epsilon(1e-9));
  }
}

TEST_CASE("bound ordering and n scaling properties") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 300; ++t) {
    const std::size_t gamma = 1 + rng() % 8;
    const std::size_t gamma_out = 1 + rng() % gamma;
    const auto p = params(gamma, gamma_out, 1 + rng() % 300);
    auto p2 = p;
    p2.n = 2 * p.n;
    const std::size_t m1 = rng() % 10;
    const std::size_t m2 = m1 + rng() % 5;
    Rational factor = 1;
    for (std::size_t k = m1; k < m2; ++k) factor *= 2;
    for (bool omega : {true, false}) {
      const auto a = omega ? omega_bounds_exact(m1, m2, p) : lambda_bounds_exact(m1, m2, p);
      const auto b = omega ? omega_bounds_exact(m1, m2, p2) : lambda_bounds_exact(m1, m2, p2);
      CHECK(a.lower <= a.upper);
      CHECK(b.lower == a.lower * factor);
      CHECK(b.upper == a.upper * factor);
    }
    // The open interval is empty when fewer than one intron choice exists per slot.
    const bool choices = (p.gamma - p.gamma_out) * p.n >= p.gamma;
    const std::size_t r = choices ? rng() % (m2 + 1) : 0;
    const auto e = eta_bounds(EtaKind::Remove, m2, r, 1, p);
    CHECK(e.log_lower <= e.log_upper);
  }
}

TEST_CASE("rate index helpers") {
  CHECK(rate_i1(3, 5) == 3);
  CHECK(rate_i1(7, 2) == 2);
  CHECK(rate_i2(1, 100, 1) == 1);
  CHECK(rate_i2(4, 1, 9) == 1);
  // (delta + m - 1) / 2 floors: delta = 4, m = 4 gives 3.
  CHECK(rate_i2(4, 4, 9) == 3);
  CHECK(rate_i2(1, 0, 1) == 0);
  CHECK(rate_i2(0, 0, 1) == 0);
}

TEST_CASE("constructive rate examples") {
  const auto p = SpaceParams::nguyen4();
  CHECK(constructive_rate_ub(0, 20, 3, p).rate == 0.0);
  CHECK(constructive_rate_ub(0, 20, 3, p, false).rate == 0.0);

  // delta = 1, u = 1: add term is 1 * ub / C(m+1,1) n with ub = C(1,1) = 1.
  const std::size_t m = 80;
  const double add = 1.0 / (static_cast<double>(m + 1) * static_cast<double>(p.n));
  const auto r = constructive_rate_ub(1, m, 1, p);
  CHECK(r.rate == doctest::Approx(0.5 * (add + 1.0)).epsilon(1e-12));
  CHECK_FALSE(r.truncation_active);
  CHECK(constructive_rate_ub(1, m, 1, p, false).rate ==
        doctest::Approx(0.5 * (add + 1.0)).epsilon(1e-12));

  // No removal term without instructions to remove.
  const auto empty = constructive_rate_ub(1, 0, 1, p);
  CHECK(empty.rate == doctest::Approx(0.5 / static_cast<double>(p.n)).epsilon(1e-12));
  CHECK_THROWS_AS(constructive_rate_ub(1, 1, 0, p), InputError);
}

TEST_CASE("constructive rate against a direct evaluation") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto p = params(1 + rng() % 4, 1, 2 + rng() % 20, 3);
    auto q = p;
    q.gamma_out = 1 + rng() % q.gamma;
    const std::size_t delta = 1 + rng() % 6;
    const std::size_t m = rng() % 8;
    const std::size_t u = 1 + rng() % 5;
    const std::size_t i1 = std::min(delta, u);
    const std::size_t i2 = rate_i2(delta, m, u);
    const double total = binom(m + u, u) * std::pow(static_cast<double>(q.n), static_cast<double>(u));
    double un = 0, tr = 0;
    bool capped = false;
    for (std::size_t i = 1; i <= i1; ++i) {
      const double ub = ub_add_ref(delta, m, i, u, q);
      un += static_cast<double>(i) * ub;
      tr += static_cast<double>(i) * ub / (static_cast<double>(i1) * std::max(ub, total));
      capped = capped || ub > total * (1 + 1e-12);
    }
    const double d2 = static_cast<double>(i2);
    const double expect_un = 0.5 * (un / total + d2 * (d2 + 1) / 2);
    const double expect_tr = 0.5 * (tr + (i2 == 0 ? 0.0 : (1 + d2) / 2));
    CHECK(constructive_rate_ub(delta, m, u, q, false).rate == doctest::Approx(expect_un).epsilon(1e-9));
    const auto got = constructive_rate_ub(delta, m, u, q, true);
    CHECK(got.rate == doctest::Approx(expect_tr).epsilon(1e-9));
    if (capped) CHECK(got.truncation_active);
    CHECK(got.rate >= 0.0);
    CHECK(got.rate <= 0.5 * (static_cast<double>(i1) + (1 + d2) / 2) + 1e-12);
  }
}

TEST_CASE("hitting time examples") {
  CHECK(min_hitting_time(0.0, kDefaultEpsilon, [](std::size_t) { return 1.0; }) == 0u);
  CHECK(min_hitting_time(5.0, kDefaultEpsilon, [](std::size_t) { return 1.0; }) == 5u);
  CHECK(min_hitting_time(3.0, kDefaultEpsilon, [](std::size_t) { return 0.0; }) == std::nullopt);
  // Very slow constant rate exhausts the iteration cap.
  CHECK(min_hitting_time(1.0, kDefaultEpsilon, [](std::size_t) { return 1e-7; }) == std::nullopt);
  CHECK_THROWS_AS(min_hitting_time(1.0, 0.0, [](std::size_t) { return 1.0; }), InputError);

  // The rate is looked up at the ceiling of the running delta.
  std::vector<std::size_t> seen;
  const auto q = min_hitting_time(2.0, 1e-4, [&](std::size_t d) {
    seen.push_back(d);
    return 0.75;
  });
  CHECK(q == 3u);
  CHECK(seen == std::vector<std::size_t>{2, 2, 1});

  const auto p = SpaceParams::nguyen4();
  CHECK(min_hitting_time(0.0, 10, 1, p) == 0u);
  CHECK(min_hitting_time(3.0, 10, 1, p).has_value());
}

TEST_CASE("hitting time is non-increasing in the rate") {
  // Holds when the slower rate is non-increasing in delta, which keeps the
  // step map monotone.
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> rates(12);
    for (auto& r : rates) r = 0.05 + std::uniform_real_distribution<double>(0, 1)(rng);
    std::sort(rates.rbegin(), rates.rend());
    std::vector<double> faster = rates;
    for (auto& r : faster) r += std::uniform_real_distribution<double>(0, 0.5)(rng);
    const double d0 = 1 + static_cast<double>(rng() % 10);
    const auto a = min_hitting_time(d0, 1e-4, [&](std::size_t d) { return rates[d]; });
    const auto b = min_hitting_time(d0, 1e-4, [&](std::size_t d) { return faster[d]; });
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(*b <= *a);
  }
}

TEST_CASE("a pointwise faster rate can take longer") {
  // Ceiling lookup makes the step map jump at integers, so pointwise
  // dominance alone does not order hitting times.
  const std::vector<double> slow = {0.0, 0.25, 0.25, 0.75};
  const std::vector<double> fast = {0.0, 0.25, 0.25, 1.0};
  const auto a = min_hitting_time(3.0, 1e-4, [&](std::size_t d) { return slow[d]; });
  const auto b = min_hitting_time(3.0, 1e-4, [&](std::size_t d) { return fast[d]; });
  CHECK(a == 8u);
  CHECK(b == 9u);
}

TEST_CASE("fitness gap bound") {
  DeltaConstants c;
  CHECK(fitness_gap_bound(0.0, 10, c) == 0.0);
  c = {1.0, 100.0, 0.0, 2.0};
  CHECK(fitness_gap_bound(3.0, 10, c) == doctest::Approx(6.0));
  c = {2.0, 0.5, 1.0, 3.0};
  CHECK(fitness_gap_bound(10.0, 10, c) == doctest::Approx(1.0));
  CHECK(fitness_gap_bound_linear(3.0, 10, {1.0, 0.0, 1.0, 2.0}) == doctest::Approx(6.0 + 7.0));
  CHECK_THROWS_AS(fitness_gap_bound(1.0, 10, {1.0, 1.0, 2.0, 1.0}), InputError);
  CHECK_THROWS_AS(fitness_gap_bound(1.0, 10, {-1.0, 1.0, 0.0, 1.0}), InputError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 5);
  for (int t = 0; t < 200; ++t) {
    const double a = u(rng), b = u(rng);
    const DeltaConstants k{u(rng), u(rng) * 20, std::min(a, b), std::max(a, b)};
    double prev = -1;
    for (int d = 0; d <= 20; ++d) {
      const double v = fitness_gap_bound(d, 20, k);
      CHECK(v >= prev);
      CHECK(v <= k.f_psi * k.psi + 1e-12);
      CHECK(v <= fitness_gap_bound_linear(d, 20, k) + 1e-9);
      prev = v;
    }
  }
}

TEST_CASE("log helpers") {
  CHECK(log_binomial(10, 2) == doctest::Approx(std::log(45.0)));
  CHECK(std::isinf(log_binomial(2, 3)));
  CHECK(log_sum_exp({std::log(2.0), std::log(3.0)}) == doctest::Approx(std::log(5.0)));
  CHECK(std::isinf(log_sum_exp({})));
}
