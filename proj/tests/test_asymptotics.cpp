#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heatcount/asymptotics.hpp"
#include "heatcount/errors.hpp"
#include "heatcount/transforms.hpp"
#include "oracles.hpp"

using namespace heatcount;

namespace {

const double kPi = std::numbers::pi;

// sum_{n=1}^{count} e^{-n t}
double truncated_geometric(double t, double count) {
  return std::exp(-t) * -std::expm1(-count * t) / -std::expm1(-t);
}

}  // namespace

TEST_CASE("weyl check on a constant density spectrum") {
  const auto s = generate_constant_density(1.0, 10000);
  const auto report = weyl_check(s, {0.1, 0.001});
  REQUIRE(report.rows.size() == 2);
  CHECK(report.rows[0].t == 0.001);

  const auto& small = report.rows[0];
  CHECK(small.count_at_inverse == 999);
  CHECK(small.heat_trace == doctest::Approx(truncated_geometric(0.001, 10000)).epsilon(1e-13));
  CHECK(small.ratio == doctest::Approx(small.heat_trace / 999.0));
  CHECK(small.ratio == doctest::Approx(1.0005).epsilon(1e-4));
  CHECK(small.flag == "ok");

  const auto& large = report.rows[1];
  CHECK(large.count_at_inverse == 9);
  CHECK(large.heat_trace == doctest::Approx(9.50833194477504962).epsilon(1e-13));
  CHECK(large.ratio == doctest::Approx(1.0565).epsilon(1e-3));

  CHECK(report.density_constant == 1.0);
  CHECK(report.density_constancy_deviation < 1e-12);
}

TEST_CASE("weyl ratio envelope shrinks as t decreases") {
  const auto s = generate_constant_density(1.0, 10000);
  std::vector<double> ts;
  for (double t = 0.2; t > 1.1e-3; t /= 1.5) ts.push_back(t);
  const auto report = weyl_check(s, ts);
  for (const auto& row : report.rows) {
    REQUIRE(row.flag == "ok");
    CHECK(row.deviation <= report.density_constant * row.t + 1.0 / row.count_at_inverse);
  }
}

TEST_CASE("weyl check on the interval: density is not constant") {
  const auto s = generate_interval(kPi, 10000);
  const auto report = weyl_check(s, {1e-3, 1e-4});
  const double target = std::sqrt(kPi) / 2.0;
  CHECK(std::abs(report.rows[0].ratio / target - 1.0) < 0.02);  // t = 1e-4
  CHECK(std::abs(report.rows[0].ratio - 1.0) > 0.1);
  CHECK(std::abs(report.rows[1].ratio / target - 1.0) < 0.05);  // t = 1e-3
  CHECK(report.density_constancy_deviation > 0.5);
}

TEST_CASE("weyl check flags rows beyond coverage") {
  const auto s = generate_constant_density(1.0, 100);
  const auto report = weyl_check(s, {0.001, 0.1});
  CHECK(report.rows[0].flag == "coverage");
  CHECK(std::isnan(report.rows[0].ratio));
  CHECK(report.rows[1].flag == "ok");
  CHECK(report.to_csv().rfind("t,K,N_inv,ratio,flag\n", 0) == 0);

  CHECK_THROWS_AS(weyl_check(s, {}), DomainError);
  CHECK_THROWS_AS(weyl_check(s, {0.1, -0.1}), DomainError);
}

TEST_CASE("tauberian first term") {
  SUBCASE("constant density") {
    const auto s = generate_constant_density(1.0, 10000);
    const auto est = tauberian_first_term(s, 7e-4, 2e-3, 500.0);
    CHECK(std::abs(est.fit.exponent - 1.0) < 1e-3);
    CHECK(std::abs(est.fit.amplitude - 1.0) < 0.01);
    // The t/12 correction of 1/(e^t - 1) biases the intercept on a wider window.
    CHECK(tauberian_first_term(s, 1e-3, 1e-2, 500.0).fit.amplitude < 0.99);
    CHECK(est.actual == 499);
    CHECK(est.predicted == doctest::Approx(500.0).epsilon(0.01));
    CHECK(est.warnings.empty());
  }
  SUBCASE("square: first term only, perimeter correction shows in p") {
    const auto s = generate_rectangle(kPi, kPi, 1e4);
    const auto est = tauberian_first_term(s, 1e-3, 1e-2, 200.0);
    CHECK(est.actual == oracle::square_count(200.0, false));
    CHECK(est.fit.exponent == doctest::Approx(1.0).epsilon(0.05));
    CHECK(std::abs(est.relative_gap) < 0.05);
  }
  SUBCASE("interval") {
    const auto s = generate_interval(kPi, 10000);
    const auto est = tauberian_first_term(s, 1e-4, 1e-3, 1e4);
    CHECK(est.fit.exponent == doctest::Approx(0.5).epsilon(0.02));
    CHECK(est.actual == 99);
    CHECK(est.predicted == doctest::Approx(100.0).epsilon(0.05));
  }
  SUBCASE("poor fit warning") {
    // Two well separated clusters: K(t) is nowhere near a power law.
    Spectrum s({{1.0, 1}, {1000.0, 1000}}, "clusters", GeneratorKind::file, {}, 1000.0);
    const auto est = tauberian_first_term(s, 1e-3, 1.0, 500.0);
    CHECK(est.fit.fit_residual > 0.05);
    CHECK(est.warnings.size() == 2);  // no tail bound, poor fit
  }
  SUBCASE("csv") {
    const auto s = generate_constant_density(1.0, 10000);
    const auto csv = tauberian_first_term(s, 1e-3, 1e-2, 500.0).to_csv();
    CHECK(csv.rfind("A,p,residual,lambda_probe,predicted,actual,relative_gap\n", 0) == 0);
  }
  const auto s = generate_constant_density(1.0, 1000);
  CHECK_THROWS_AS(tauberian_first_term(s, 1e-2, 1e-3, 10.0), DomainError);
  CHECK_THROWS_AS(tauberian_first_term(s, 1e-3, 1e-2, 10.0, 4), InvalidParameter);
  CHECK_THROWS_AS(tauberian_first_term(s, 1e-3, 1e-2, 5000.0), DomainError);
  CHECK_THROWS_AS(tauberian_first_term(s, 1e-4, 1e-2, 10.0), DomainError);  // truncated K
}

TEST_CASE("gamma meets the first-term contract") {
  // Gamma(1/2) = sqrt(pi), Gamma(n) = (n-1)!, Gamma(x + 1) = x Gamma(x).
  CHECK(std::tgamma(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  CHECK(std::tgamma(5.0) == doctest::Approx(24.0).epsilon(1e-10));
  for (double x = 0.5; x < 4.0; x += 0.37) {
    CHECK(std::tgamma(x + 1.0) == doctest::Approx(x * std::tgamma(x)).epsilon(1e-10));
  }
}
