#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "risrelay/discrete_phases.hpp"

using namespace risrelay;

namespace {

constexpr double kPi = std::numbers::pi;

ChannelSet scenario(std::uint64_t seed, int L) {
  return generate_scenario(SystemGeometry::make(5, 5, 4, L), FadingParams{}, seed);
}

double circular_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

}  // namespace

TEST_CASE("quantisation") {
  const double d2 = kPi / 2;
  CHECK(quantize_phases(std::vector{0.9 * d2}, 2)[0] == doctest::Approx(d2));
  CHECK(quantize_phases(std::vector{2.0 * kPi - 0.1}, 1)[0] == 0.0);
  // Exact midpoint between levels 0 and 1 goes to the lower one.
  CHECK(quantize_levels(std::vector{0.5 * d2}, 2)[0] == 0);
  CHECK(quantize_levels(std::vector{-0.1}, 2)[0] == 0);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int bits = 1; bits <= 4; ++bits) {
    const DiscretePhaseConfig cfg{bits};
    for (int i = 0; i < 1000; ++i) {
      const double t = u(rng);
      const double q = quantize_phases(std::vector{t}, bits)[0];
      CHECK(circular_distance(t, q) <= cfg.spacing() / 2 + 1e-12);
      CHECK(quantize_phases(std::vector{q}, bits)[0] == q);
    }
    for (int k = 0; k < cfg.levels(); ++k) {
      CHECK(quantize_levels(std::vector{cfg.level(k)}, bits)[0] == k);
    }
  }
  CHECK_THROWS_AS(quantize_levels(std::vector{0.0}, 0), DomainError);
}

TEST_CASE("successive refinement") {
  SUBCASE("single element, one bit: best of both levels") {
    const ChannelSet ch = scenario(2, 1);
    const DiscreteSolution s =
        successive_refinement(ch, Scheme::FullDuplex, 2.0, 1, {0}, {});
    const double p0 = evaluate_discrete(ch, Scheme::FullDuplex, 1, {0}, {}, 2.0).total_power;
    const double p1 = evaluate_discrete(ch, Scheme::FullDuplex, 1, {1}, {}, 2.0).total_power;
    CHECK(s.total_power == std::min(p0, p1));
    const DiscreteSolution o = brute_force_oracle(ch, Scheme::FullDuplex, 2.0, 1);
    CHECK(o.total_power == s.total_power);
  }
  SUBCASE("never worse than its start and monotone") {
    for (Scheme scheme : {Scheme::FullDuplex, Scheme::HalfDuplex, Scheme::RisOnly}) {
      const ChannelSet ch = scenario(3, 6);
      const std::vector<int> init(6, 1);
      const std::vector<int> init2 = scheme == Scheme::HalfDuplex ? init : std::vector<int>{};
      const double start = evaluate_discrete(ch, scheme, 2, init, init2, 2.0).total_power;
      const DiscreteSolution s = successive_refinement(ch, scheme, 2.0, 2, init, init2);
      CHECK(s.total_power <= start);
      CHECK(s.power_history.front() == start);
      for (std::size_t i = 1; i < s.power_history.size(); ++i) {
        CHECK(s.power_history[i] <= s.power_history[i - 1]);
      }
      CHECK(s.sweeps <= 3);
      const CMatrix U = scheme == Scheme::RisOnly ? CMatrix::Zero(5, 4) : s.U;
      CHECK(validate_scheme(ch, scheme, s.theta1, s.theta2, s.W, U, 2.0).ok());
    }
  }
  SUBCASE("close to the exhaustive optimum, never below it") {
    int close = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const ChannelSet ch = scenario(seed, 4);
      const DiscreteSolution o = brute_force_oracle(ch, Scheme::FullDuplex, 2.0, 1);
      const DiscreteSolution s =
          successive_refinement(ch, Scheme::FullDuplex, 2.0, 1, std::vector<int>(4, 0), {});
      CHECK(o.total_power <= s.total_power);
      if (s.total_power <= 1.05 * o.total_power) ++close;
    }
    CHECK(close >= 16);
  }
}

TEST_CASE("exhaustive oracle") {
  const ChannelSet ch = scenario(4, 2);
  const DiscreteSolution o = brute_force_oracle(ch, Scheme::FullDuplex, 1.0, 1);
  CHECK(o.evaluations == 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      CHECK(o.total_power <=
            evaluate_discrete(ch, Scheme::FullDuplex, 1, {a, b}, {}, 1.0).total_power);
    }
  const DiscreteSolution h = brute_force_oracle(ch, Scheme::HalfDuplex, 1.0, 1);
  CHECK(h.evaluations == 16);
  CHECK(h.levels2.size() == 2);

  CHECK_THROWS_AS(brute_force_oracle(scenario(4, 17), Scheme::FullDuplex, 1.0, 1),
                  SearchSpaceError);
  CHECK_THROWS_AS(brute_force_oracle(scenario(4, 9), Scheme::HalfDuplex, 1.0, 1),
                  SearchSpaceError);
  CHECK_THROWS_AS(evaluate_discrete(ch, Scheme::FullDuplex, 1, {0, 2}, {}, 1.0), DomainError);
}
