#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heatcount/errors.hpp"
#include "heatcount/transforms.hpp"
#include "oracles.hpp"

using namespace heatcount;

namespace {

const double kPi = std::numbers::pi;

std::vector<Spectrum> generator_family() {
  return {generate_interval(kPi, 300), generate_rectangle(kPi, kPi, 2000.0), generate_torus(2000.0),
          generate_constant_density(1.0, 2000), generate_interval(1.7, 200),
          generate_rectangle(1.0, 2.3, 3000.0)};
}

}  // namespace

TEST_CASE("counting") {
  const auto interval = generate_interval(kPi, 100);
  CHECK(counting(interval, 10.0) == 3);
  CHECK(counting(interval, 9.0, CountingMode::strict) == 2);
  CHECK(counting(interval, 9.0, CountingMode::inclusive) == 3);
  CHECK(counting(interval, 0.5) == 0);
  CHECK(counting(interval, 1e9) == 100);

  const auto torus = generate_torus(100.0);
  CHECK(counting(torus, 100.0) == oracle::torus_count(100.0, false));
  CHECK(counting(torus, 100.0, CountingMode::inclusive) == oracle::torus_count(100.0, true));
  for (double lambda : {0.0, 0.5, 1.0, 2.0, 37.5, 50.0, 99.9}) {
    CHECK(counting(torus, lambda) == oracle::torus_count(lambda, false));
  }
}

TEST_CASE("counting properties") {
  std::mt19937_64 rng(11);
  for (const auto& s : generator_family()) {
    std::uniform_real_distribution<double> dist(0.0, s.max_value() * 1.1);
    std::vector<double> probes;
    for (int i = 0; i < 200; ++i) probes.push_back(dist(rng));
    for (const auto& e : s.entries()) probes.push_back(e.value);
    std::sort(probes.begin(), probes.end());

    std::uint64_t previous = 0;
    for (double lambda : probes) {
      const auto strict = counting(s, lambda, CountingMode::strict);
      const auto inclusive = counting(s, lambda, CountingMode::inclusive);
      CHECK(strict >= previous);
      previous = strict;
      const auto index = s.find_exact(lambda);
      const std::uint64_t jump = index ? s.entries()[*index].multiplicity : 0;
      CHECK(inclusive - strict == jump);
    }
  }
}

TEST_CASE("heat trace values") {
  SUBCASE("geometric closed form") {
    const auto s = generate_constant_density(1.0, 10000);
    const auto k = heat_trace(s, 1.0);
    CHECK(k.value == doctest::Approx(0.581976706869326424).epsilon(1e-14));
    CHECK(k.tail.valid);
    CHECK(k.tail.bound_value < 1e-300);
  }
  SUBCASE("interval direct sum") {
    const auto s = generate_interval(kPi, 100);
    CHECK(heat_trace(s, 1.0).value == doctest::Approx(0.386318602413326077).epsilon(1e-14));
  }
  SUBCASE("dominant term at large t") {
    const auto interval = generate_interval(kPi, 50);
    const double t = 700.0 / interval.min_value();
    CHECK(heat_trace(interval, t).value == doctest::Approx(std::exp(-700.0)).epsilon(1e-12));
    const auto torus = generate_torus(100.0);
    CHECK(heat_trace(torus, 700.0).value == 1.0);
  }
  SUBCASE("agrees with an independent sum") {
    const auto torus = generate_torus(900.0);
    const auto square = generate_rectangle(kPi, kPi, 900.0);
    for (double t : {0.003, 0.05, 0.7}) {
      CHECK(heat_trace(torus, t).value ==
            doctest::Approx(oracle::direct_heat_trace(oracle::torus_values(900.0), t)).epsilon(1e-13));
      CHECK(heat_trace(square, t).value ==
            doctest::Approx(oracle::direct_heat_trace(oracle::square_values(900.0), t)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(heat_trace(generate_torus(4.0), 0.0), DomainError);
  CHECK_THROWS_AS(heat_trace(generate_torus(4.0), -1.0), DomainError);
}

TEST_CASE("heat trace tail bounds dominate the omitted eigenvalues") {
  // Generate a small spectrum and compare its tail bound against the terms a
  // much larger spectrum of the same family contains beyond the cutoff.
  struct Case {
    Spectrum small;
    Spectrum large;
  };
  const std::vector<Case> cases = {
      {generate_interval(kPi, 30), generate_interval(kPi, 3000)},
      {generate_constant_density(2.0, 100), generate_constant_density(2.0, 20000)},
      {generate_rectangle(kPi, kPi, 400.0), generate_rectangle(kPi, kPi, 40000.0)},
      {generate_rectangle(1.0, 2.5, 300.0), generate_rectangle(1.0, 2.5, 30000.0)},
      {generate_torus(400.0), generate_torus(40000.0)},
  };
  for (const auto& c : cases) {
    for (double t : {0.002, 0.01, 0.1, 1.0}) {
      const auto tail = heat_trace_tail(c.small, t);
      REQUIRE(tail.valid);
      const double omitted = heat_trace(c.large, t).value - heat_trace(c.small, t).value;
      CHECK(omitted <= tail.bound_value * (1 + 1e-12) + 1e-300);
    }
  }
  const auto constant = generate_constant_density(1.0, 100);
  const double exact_remainder = heat_trace(generate_constant_density(1.0, 100000), 0.05).value -
                                 heat_trace(constant, 0.05).value;
  CHECK(heat_trace_tail(constant, 0.05).bound_value == doctest::Approx(exact_remainder).epsilon(1e-10));

  Spectrum file({{1.0, 1}, {2.0, 1}}, "f", GeneratorKind::file, {}, 2.0);
  CHECK_FALSE(heat_trace_tail(file, 1.0).valid);
}

TEST_CASE("heat trace properties") {
  for (const auto& s : generator_family()) {
    double previous = std::numeric_limits<double>::infinity();
    for (double t : {1e-4, 1e-3, 0.01, 0.1, 1.0, 10.0}) {
      const double value = heat_trace(s, t).value;
      CHECK(value < previous);
      previous = value;
    }
  }
  const auto s = generate_constant_density(1.0, 500);
  const double tiny = 1e-9;
  CHECK(heat_trace(s, tiny).value == doctest::Approx(500.0).epsilon(1e-6));
}

TEST_CASE("partial exponential sum") {
  const auto s = generate_interval(kPi, 100);
  CHECK(partial_exponential_sum(s, 10.0, 0.0) == 3.0);
  CHECK(partial_exponential_sum(s, 10.0, 0.5) ==
        doctest::Approx(0.752974939487488422).epsilon(1e-15));
  CHECK(partial_exponential_sum(s, 0.0, 1.0) == 0.0);
  for (double t : {0.01, 0.1, 1.0}) {
    CHECK(partial_exponential_sum(s, s.max_value(), t) == heat_trace(s, t).value);
  }

  std::mt19937_64 rng(5);
  for (const auto& spectrum : generator_family()) {
    std::uniform_real_distribution<double> dist(0.0, spectrum.max_value());
    for (int i = 0; i < 100; ++i) {
      const double lambda = dist(rng);
      CHECK(partial_exponential_sum(spectrum, lambda, 0.0) ==
            static_cast<double>(counting(spectrum, lambda, CountingMode::inclusive)));
    }
  }
  CHECK_THROWS_AS(partial_exponential_sum(s, 1.0, -1.0), DomainError);
}

TEST_CASE("Laplace transform of the counting function") {
  SUBCASE("step-exact identity") {
    for (const auto& s : generator_family()) {
      for (double t : {0.01, 0.1, 1.0, 10.0}) {
        const double trace = heat_trace(s, t).value;
        const auto exact = laplace_of_counting(s, t, LaplaceMethod::step_exact);
        CHECK(exact.upper_limit == s.cutoff());
        CHECK(std::abs(exact.value + exact.truncation_term - trace) <= 1e-12 * trace);
      }
    }
  }
  SUBCASE("quadrature agrees with step-exact") {
    for (const auto& s : generator_family()) {
      for (double t : {0.01, 0.1, 1.0, 10.0}) {
        const auto exact = laplace_of_counting(s, t, LaplaceMethod::step_exact);
        const auto quad = laplace_of_counting(s, t, LaplaceMethod::quadrature);
        const double trace = heat_trace(s, t).value;
        CHECK(std::abs(quad.value + quad.truncation_term - trace) <= 1e-8 * trace);
        CHECK(std::abs(quad.value - exact.value) <= 1e-8 * exact.value);
      }
    }
  }
  SUBCASE("interval quadrature value") {
    const auto s = generate_interval(kPi, 100);
    const auto quad = laplace_of_counting(s, 1.0, LaplaceMethod::quadrature);
    CHECK(quad.value + quad.truncation_term ==
          doctest::Approx(0.386318602413326077).epsilon(1e-8));
  }
  SUBCASE("constant density step-exact value") {
    const auto s = generate_constant_density(1.0, 10000);
    const auto exact = laplace_of_counting(s, 1.0, LaplaceMethod::step_exact);
    CHECK(exact.value == doctest::Approx(0.581976706869326424).epsilon(1e-13));
  }
  CHECK_THROWS_AS(laplace_of_counting(generate_torus(9.0), 0.0, LaplaceMethod::step_exact),
                  DomainError);
}

TEST_CASE("density estimate") {
  SUBCASE("constant density is flat") {
    const auto s = generate_constant_density(2.0, 100);
    const auto est = density_estimate(s, 1.0, 0.0, 10.0);
    REQUIRE(est.bins.rows.size() == 10);
    for (const auto& row : est.bins.rows) CHECK(row.value == 2.0);
    CHECK(est.mean_density == 2.0);
    CHECK(est.constancy_deviation < 1e-12);
  }
  SUBCASE("interval bins follow the squares") {
    const auto s = generate_interval(kPi, 100);
    const auto est = density_estimate(s, 10.0, 0.0, 100.0);
    REQUIRE(est.bins.rows.size() == 10);
    const auto squares = oracle::interval_values(100);
    for (std::size_t i = 0; i < 10; ++i) {
      const double lo = 10.0 * i;
      const double hi = lo + 10.0;
      const auto in_bin = std::count_if(squares.begin(), squares.end(),
                                        [&](double v) { return v > lo && v <= hi; });
      CHECK(est.bins.rows[i].value == doctest::Approx(in_bin / 10.0));
    }
    CHECK(est.constancy_deviation > 0.5);
  }
  SUBCASE("torus bins match lattice counts") {
    const auto s = generate_torus(400.0);
    const auto est = density_estimate(s, 20.0, 0.0, 400.0);
    REQUIRE(est.bins.rows.size() == 20);
    for (std::size_t i = 0; i < 20; ++i) {
      const double lo = 20.0 * i;
      const auto expected = oracle::torus_count(lo + 20.0, true) - oracle::torus_count(lo, true);
      CHECK(est.bins.rows[i].value == doctest::Approx(expected / 20.0));
    }
    // Lattice points in a disk: N(lambda) ~ pi lambda.
    CHECK(est.mean_density == doctest::Approx(kPi).epsilon(0.05));
  }
  const auto s = generate_torus(100.0);
  CHECK_THROWS_AS(density_estimate(s, 1.0, 5.0, 5.0), DomainError);
  CHECK_THROWS_AS(density_estimate(s, 0.0, 0.0, 5.0), DomainError);
  CHECK_THROWS_AS(density_estimate(s, 1.0, 0.0, 200.0), DomainError);
}

TEST_CASE("eval table csv") {
  EvalTable table;
  table.rows.push_back({0.1, 1.0 / 3.0, 0.0});
  CHECK(table.to_csv() == "abscissa,value,error_estimate\n"
                          "0.10000000000000001,0.33333333333333331,0\n");
}
