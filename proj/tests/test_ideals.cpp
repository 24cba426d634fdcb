#include <doctest.h>

#include "singtrace/error.hpp"
#include "singtrace/ideals.hpp"
#include "singtrace/majorization.hpp"
#include "support.hpp"

using namespace singtrace;
namespace ts = testing_support;

namespace {

std::vector<PsiFunction> named_psis() {
  return {psi_log(), psi_power(0.5), psi_power(0.9), psi_linear(), psi_dpss()};
}

// Integer-valued nonincreasing vector (exact in double).
std::vector<double> random_integer_decreasing(std::mt19937_64& g, std::size_t n, int top) {
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(ts::pick(g, 0, top));
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Sweep oracle for the Marcinkiewicz norm.
double norm_oracle(const std::vector<double>& a, const PsiFunction& psi) {
  long double s = 0.0L;
  double best = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    s += a[n];
    best = std::max(best, static_cast<double>(s / psi(n + 1)));
  }
  return best;
}

}  // namespace

TEST_SUITE("ideals") {

TEST_CASE("named psi values") {
  CHECK(psi_log()(0) == 0.0);
  CHECK(psi_log()(1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(psi_log()(1'000'000) == doctest::Approx(std::log1p(1e6)).epsilon(1e-15));
  CHECK(psi_linear()(12345) == 12345.0);
  CHECK(psi_power(0.5)(16) == 4.0);
  for (Index n : {1u, 10u, 1000u}) {
    const double r = psi_linear()(2 * n + 1) / psi_linear()(n + 1);
    CHECK(r == doctest::Approx(static_cast<double>(2 * n + 1) / static_cast<double>(n + 1)));
  }
  CHECK(std::abs(psi_power(0.5).ratio(1'000'000) - std::sqrt(2.0)) < 1e-3);
  CHECK(psi_log().name() == "log");
}

TEST_CASE("psi parameters are validated") {
  CHECK_THROWS_AS(psi_power(0.0), ArgumentError);
  CHECK_THROWS_AS(psi_power(1.0), ArgumentError);
  CHECK_THROWS_AS(psi_power(-0.5), ArgumentError);
  CHECK_THROWS_AS(psi_power(std::nan("")), ArgumentError);
  CHECK_THROWS_AS(psi_log().ratio(0), ArgumentError);
  const auto f = PsiFunction::from_increments(Sequence::from_values({1, 1}));
  CHECK_THROWS_AS(f(3), HorizonError);
}

TEST_CASE("increments and values agree") {
  for (const auto& psi : named_psis()) {
    CAPTURE(psi.name());
    for (Index n : {0u, 1u, 2u, 3u, 7u, 100u, 4096u, 100000u}) {
      const double inc = psi(n + 1) - psi(n);
      CHECK(psi.increment(n) > 0.0);
      CHECK(std::abs(inc - psi.increment(n)) <= 1e-13 * psi(n + 1));
    }
  }
}

TEST_CASE("psi from increments") {
  const auto ones = PsiFunction::from_increments(Sequence::from_values(std::vector<double>(50, 1.0)));
  for (Index n = 0; n <= 50; ++n) CHECK(ones(n) == static_cast<double>(n));

  const auto h = PsiFunction::from_increments(harmonic(2000));
  for (Index n : {1u, 2u, 10u, 2000u})
    CHECK(h(n) == doctest::Approx(static_cast<double>(ts::harmonic_direct(n))).epsilon(1e-15));

  CHECK_THROWS_AS(PsiFunction::from_increments(Sequence::from_values({1, 0})), ArgumentError);
  CHECK_THROWS_AS(PsiFunction::from_increments(Sequence::from_values({1, 2})), ArgumentError);
  CHECK_THROWS_AS(PsiFunction::from_increments(Sequence::from_values({})), ArgumentError);
}

TEST_CASE("increments of a named psi round-trip") {
  for (const auto& psi : named_psis()) {
    CAPTURE(psi.name());
    const Index n = 200'000;
    const auto back = PsiFunction::from_increments(psi.increments(n));
    for (Index m : {1u, 2u, 5u, 1000u, 65536u, 65537u, 199'999u, 200'000u})
      CHECK(std::abs(back(m) - psi(m)) <= 1e-14 * psi(m));
  }
  // dyadic increments sum exactly
  const auto lin = PsiFunction::from_increments(psi_linear().increments(1000));
  for (Index m = 0; m <= 1000; ++m) CHECK(lin(m) == psi_linear()(m));
}

TEST_CASE("doubling ratio stays in [1, 2]") {
  for (const auto& psi : named_psis()) {
    CAPTURE(psi.name());
    for (Index t = 1; t <= 70'000; ++t) {
      const double r = psi.ratio(t);
      CHECK(r >= 1.0);
      CHECK(r <= 2.0 + 1e-15);
    }
  }
}

TEST_CASE("diagnostics of linear and log") {
  const auto lin = psi_diagnostics(psi_linear(), 1 << 20);
  for (double r : lin.ratio) CHECK(r == 2.0);
  CHECK(lin.ratio_bounds_hold);
  CHECK(lin.t.front() == 1);
  CHECK(2 * lin.t.back() <= (1 << 20));

  const double expected = std::log1p(2e6) / std::log1p(1e6);
  CHECK(psi_log().ratio(1'000'000) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(expected == doctest::Approx(1.0502).epsilon(1e-4));
  const auto log = psi_diagnostics(psi_log(), 10'000'000, 1.5);
  CHECK(log.ratio_bounds_hold);
  CHECK(log.sampled_min < 1.05);
  CHECK(log.liminf_estimate <= log.limsup_estimate);
  CHECK(log.limsup_estimate < 1.15);

  CHECK_THROWS_AS(psi_diagnostics(psi_log(), 3), ArgumentError);
  CHECK_THROWS_AS(psi_diagnostics(psi_log(), 100, 1.0), ArgumentError);
}

TEST_CASE("dpss keeps the ratio oscillating") {
  const auto d = psi_diagnostics(psi_dpss(), 10'000'000);
  CHECK(d.ratio_bounds_hold);
  CHECK(d.sampled_min <= 1.05);
  CHECK(d.sampled_max >= 1.5);
  CHECK(d.liminf_estimate <= 1.05);
  CHECK(d.limsup_estimate >= 1.5);
  // near-1 samples recur in the tail; the next high block lies past 10^7
  int low = 0, high = 0;
  for (std::size_t i = 0; i < d.t.size(); ++i) {
    if (d.t[i] < d.tail_start) continue;
    low += d.ratio[i] <= 1.05;
    high += d.ratio[i] >= 1.5;
  }
  CHECK(low >= 2);
  CHECK(high >= 1);
}

TEST_CASE("marcinkiewicz norm examples") {
  const auto psi = psi_log();
  const auto w = psi.increments(1'000'000);
  const auto r = marcinkiewicz_norm(w, psi, 1'000'000);
  CHECK(std::abs(r.value - 1.0) <= 1e-14);

  const auto delta = explicit_sequence({1, 0, 0, 0, 0, 0});
  const auto d = marcinkiewicz_norm(delta, psi, 6);
  CHECK(d.value == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(d.argmax == 0);
  CHECK(d.value == doctest::Approx(1.4427).epsilon(1e-4));

  const auto h = marcinkiewicz_norm(harmonic(), psi, 100'000);
  CHECK(h.value == doctest::Approx(1.0 / std::log(2.0)).epsilon(1e-15));
  CHECK(h.argmax == 0);
  CHECK(h.attained_within_horizon);

  // constant 1 keeps growing
  const auto c = marcinkiewicz_norm(geometric(1.0), psi, 100'000);
  CHECK(c.argmax == 99'999);
  CHECK_FALSE(c.attained_within_horizon);
}

TEST_CASE("marcinkiewicz norm matches the sweep oracle") {
  auto g = ts::rng(41);
  for (const auto& psi : named_psis()) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = ts::random_decreasing(g, ts::pick(g, 1, 3000), 3.0);
      const auto r = marcinkiewicz_norm(explicit_sequence(a), psi, a.size());
      CHECK(r.value == doctest::Approx(norm_oracle(a, psi)).epsilon(1e-14));
    }
  }
}

TEST_CASE("marcinkiewicz norm is monotone under submajorization") {
  auto g = ts::rng(42);
  int pairs = 0;
  for (int trial = 0; trial < 2000 && pairs < 200; ++trial) {
    const std::size_t n = ts::pick(g, 1, 40);
    const auto a = random_integer_decreasing(g, n, 30);
    const auto b = random_integer_decreasing(g, n, 30);
    if (!ts::submajorized(b, a)) continue;
    ++pairs;
    for (const auto& psi : {psi_log(), psi_power(0.5)})
      CHECK(marcinkiewicz_norm(explicit_sequence(b), psi, n).value <=
            marcinkiewicz_norm(explicit_sequence(a), psi, n).value);
  }
  CHECK(pairs >= 50);
}

TEST_CASE("dilation bound for the norm") {
  auto g = ts::rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t len = ts::pick(g, 1, 500);
    const Index n = ts::pick(g, 1, 9);
    const auto a = explicit_sequence(ts::random_decreasing(g, len, 2.0));
    const auto psi = trial % 2 ? psi_log() : psi_power(0.3);
    const double up = marcinkiewicz_norm(dilate_up(a, n), psi, n * len).value;
    const double base = marcinkiewicz_norm(a, psi, len).value;
    CHECK(up <= static_cast<double>(n) * base * (1 + 1e-14));
  }
}

TEST_CASE("direct sum rate agrees with the dilated norm") {
  auto g = ts::rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t len = ts::pick(g, 1, 300);
    const Index n = ts::pick(g, 1, 16);
    const Index horizon = ts::pick(g, 1, n * len);
    const auto a = explicit_sequence(ts::random_decreasing(g, len, 2.0));
    const auto psi = trial % 2 ? psi_log() : psi_dpss();
    const double brute =
        marcinkiewicz_norm(dilate_up(a, n), psi, horizon).value / static_cast<double>(n);
    CHECK(direct_sum_norm_rate(a, psi, n, horizon) == doctest::Approx(brute).epsilon(1e-13));
  }
  const auto h = harmonic();
  CHECK(direct_sum_norm_rate(h, psi_log(), 1, 5000) == marcinkiewicz_norm(h, psi_log(), 5000).value);
  CHECK_THROWS_AS(direct_sum_norm_rate(h, psi_log(), 0, 10), ArgumentError);
}

TEST_CASE("direct sum rate separates geometric from harmonic") {
  const auto psi = psi_log();
  const Index blocks = 1 << 20;
  auto rate = [&](const DecreasingSequence& a, Index n) {
    return direct_sum_norm_rate(a, psi, n, n * blocks);
  };
  CHECK(rate(geometric(0.5), 1 << 12) < rate(geometric(0.5), 32));
  CHECK(rate(harmonic(), 32) >= 0.5);
  CHECK(rate(harmonic(), 1 << 12) >= 0.5);
}

TEST_CASE("model sequences") {
  const auto h = harmonic(3);
  CHECK(h.sequence().materialize(3) == std::vector<double>{1.0, 0.5, 1.0 / 3.0});
  CHECK(power_decay(0.5)(3) == 0.5);
  CHECK(geometric(0.5)(10) == std::ldexp(1.0, -10));
  CHECK(geometric(1.0)(12345) == 1.0);
  CHECK_THROWS_AS(power_decay(0.0), ConstructionError);
  CHECK_THROWS_AS(power_decay(-1.0), ConstructionError);
  CHECK_THROWS_AS(geometric(1.5), ConstructionError);
  CHECK_THROWS_AS(geometric(0.0), ArgumentError);
  CHECK_THROWS_AS(explicit_sequence({1, 2}), ConstructionError);
  CHECK(power_decay(0.7).label() == "power:0.7");

  const auto inc = psi_increments(psi_log(), 100'000);
  const auto p = prefix_sums(inc, 100'000);
  for (Index n : {1u, 10u, 99'999u, 100'000u})
    CHECK(std::abs(p(n - 1) - psi_log()(n)) <= 1e-14 * psi_log()(n));
}

TEST_CASE("oscillating model is nonincreasing and positive") {
  const auto o = oscillating_model();
  double prev = o(0);
  for (Index k = 1; k < 200'000; ++k) {
    const double v = o(k);
    CHECK(v <= prev);
    prev = v;
  }
  CHECK(o(99'999'999) > 0.0);
  for (Index k = 1'000'000; k < 100'000'000; k = k * 3 / 2) CHECK(o(k) <= o(k - 1));
}

}  // TEST_SUITE
