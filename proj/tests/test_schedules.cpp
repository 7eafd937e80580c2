#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kwopt/schedules.hpp"

using namespace kwopt;

TEST_CASE("decreasing gain at small indices") {
  DecreasingGain g{1.0, 1.0, 0.2, 0};
  CHECK(lambda_at(g, 1) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK(lambda_at(g, 2) == doctest::Approx(std::log(1.5)).epsilon(1e-15));
  g.lambda0 = 2.5;
  CHECK(lambda_at(g, 1) == doctest::Approx(2.5 * 0.6931471805599453).epsilon(1e-15));
  CHECK_THROWS_AS(lambda_at(g, 0), std::domain_error);
}

TEST_CASE("decreasing gain approaches lambda0/k for large k") {
  // Oracle: k * log((k+1)/k) -> 1, with deviation ~ 1/(2k).
  const DecreasingGain g{1.0, 1.0, 0.2, 0};
  const double k = 1e6;
  const double rel = std::abs(lambda_at(g, 1000000) * k - 1.0);
  CHECK(rel < 1e-6);
}

TEST_CASE("perturbation width schedule") {
  DecreasingGain g{1.0, 1.0, 0.2, 0};
  CHECK(c_at(g, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(c_at(g, 32) == doctest::Approx(0.5).epsilon(1e-12));  // 32^(-1/5)
  g.c0 = 0.25;
  CHECK(c_at(g, 32) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK_THROWS_AS(c_at(g, 0), std::domain_error);
}

TEST_CASE("decreasing gain parameter validation") {
  CHECK(validate(DecreasingGain{1.0, 1.0, 0.2, 0}).ok);
  CHECK(validate(DecreasingGain{1.0, 1.0, 0.3333, 0}).ok);

  auto r = validate(DecreasingGain{0.0, 1.0, 0.2, 0});
  CHECK_FALSE(r.ok);
  CHECK(r.violation.find("lambda0") != std::string::npos);

  r = validate(DecreasingGain{1.0, 0.0, 0.2, 0});
  CHECK_FALSE(r.ok);
  CHECK(r.violation.find("c0") != std::string::npos);

  r = validate(DecreasingGain{1.0, 1.5, 0.2, 0});
  CHECK_FALSE(r.ok);
  CHECK(r.violation.find("c0") != std::string::npos);

  // The gamma interval is open at both ends.
  CHECK_FALSE(validate(DecreasingGain{1.0, 1.0, 0.0, 0}).ok);
  CHECK_FALSE(validate(DecreasingGain{1.0, 1.0, 1.0 / 3.0, 0}).ok);
  r = validate(DecreasingGain{1.0, 1.0, 0.4, 0});
  CHECK_FALSE(r.ok);
  CHECK(r.violation.find("gamma") != std::string::npos);
}

TEST_CASE("fixed gain parameter validation") {
  CHECK(validate(FixedGain{0.01, 0.5}).ok);
  CHECK_FALSE(validate(FixedGain{0.0, 0.5}).ok);
  CHECK_FALSE(validate(FixedGain{0.01, 0.0}).ok);
  CHECK_FALSE(validate(FixedGain{0.01, 1.5}).ok);
}

TEST_CASE("coupled fixed gain uses c = a^(1/5)") {
  const FixedGain g = coupled_fixed_gain(1e-5);
  CHECK(g.a == doctest::Approx(1e-5).epsilon(1e-15));
  CHECK(g.c == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(coupled_fixed_gain(1.0).c == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(coupled_fixed_gain(0.01).c == doctest::Approx(0.3981071705534972).epsilon(1e-14));
  CHECK(validate(coupled_fixed_gain(0.37)).ok);
  CHECK_THROWS_AS(coupled_fixed_gain(0.0), std::domain_error);
  CHECK_THROWS_AS(coupled_fixed_gain(1.1), std::domain_error);
}

TEST_CASE("schedules are positive and strictly decreasing in k") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u01(0.05, 0.99);
  for (int trial = 0; trial < 50; ++trial) {
    DecreasingGain g;
    g.lambda0 = 0.1 + 3.0 * u01(rng);
    g.c0 = u01(rng);
    g.gamma = 0.333 * u01(rng);
    if (!validate(g).ok) continue;
    std::uint64_t k = 1 + (rng() % 10000);
    CHECK(lambda_at(g, k) > 0.0);
    CHECK(c_at(g, k) > 0.0);
    CHECK(lambda_at(g, k + 1) < lambda_at(g, k));
    CHECK(c_at(g, k + 1) < c_at(g, k));
  }
}

TEST_CASE("gain sums diverge while the damped series have small tails") {
  const DecreasingGain g{1.0, 1.0, 0.2, 0};
  const std::uint64_t n = 1000000;

  // The lambda partial sum telescopes to log(N + 1) exactly.
  double sum_lambda = 0.0;
  for (std::uint64_t k = 1; k <= n; ++k) sum_lambda += lambda_at(g, k);
  CHECK(sum_lambda == doctest::Approx(std::log(static_cast<double>(n + 1))).epsilon(1e-9));

  // Cauchy tails over [N, 2N] of the two summability series.
  double tail_bias = 0.0;   // sum lambda_k * c_k^2
  double tail_noise = 0.0;  // sum lambda_k^2 / c_k^2
  for (std::uint64_t k = n; k <= 2 * n; ++k) {
    const double l = lambda_at(g, k);
    const double c = c_at(g, k);
    tail_bias += l * c * c;
    tail_noise += l * l / (c * c);
  }
  CHECK(tail_bias < 0.01);
  CHECK(tail_noise < 1e-3);

  // And the tails shrink as the start index grows.
  double tail_bias2 = 0.0;
  for (std::uint64_t k = 2 * n; k <= 4 * n; ++k) {
    const double c = c_at(g, k);
    tail_bias2 += lambda_at(g, k) * c * c;
  }
  CHECK(tail_bias2 < tail_bias);
}

TEST_CASE("schedule evaluation is pure") {
  const DecreasingGain g{0.8, 0.6, 0.21, 5};
  CHECK(lambda_at(g, 12345) == lambda_at(g, 12345));
  CHECK(c_at(g, 12345) == c_at(g, 12345));
}
