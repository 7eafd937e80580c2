#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "kwopt/noise.hpp"

using namespace kwopt;

namespace {

// Reference SplitMix64, written out independently of the library.
std::uint64_t ref_splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

TEST_CASE("stationary moments") {
  Moments m = stationary_moments(NoiseModel::normal(0.3, 2.0));
  CHECK(m.mean == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(m.second_moment == doctest::Approx(4.09).epsilon(1e-15));

  m = stationary_moments(NoiseModel::uniform01());
  CHECK(m.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.second_moment == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  m = stationary_moments(NoiseModel::beta22());
  CHECK(m.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.second_moment == doctest::Approx(0.3).epsilon(1e-15));

  m = stationary_moments(NoiseModel::ar1_process(0.75, 1.0));
  CHECK(m.mean == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m.second_moment == doctest::Approx(2.2857142857142856).epsilon(1e-14));

  m = stationary_moments(NoiseModel::ar1_process(0.5, 2.0));
  CHECK(m.second_moment == doctest::Approx(4.0 / 0.75).epsilon(1e-14));
}

TEST_CASE("invalid model parameters are rejected") {
  CHECK_THROWS_AS(stationary_moments(NoiseModel::normal(0.0, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(stationary_moments(NoiseModel::ar1_process(1.0, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(NoiseStream(NoiseModel::ar1_process(-1.2, 1.0), 1),
                  std::invalid_argument);
}

TEST_CASE("path seeds follow the documented splitmix64 stream") {
  for (const std::uint64_t master : {0ULL, 1ULL, 0xDEADBEEFULL}) {
    std::uint64_t state = master;
    for (std::uint64_t p = 0; p < 5; ++p) {
      const std::uint64_t expected = ref_splitmix64(state);
      CHECK(derive_path_seed(master, p) == expected);
    }
  }
}

TEST_CASE("path seeds are distinct over a large index range") {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t p = 0; p < 20000; ++p) {
    seeds.push_back(derive_path_seed(12345, p));
  }
  std::sort(seeds.begin(), seeds.end());
  CHECK(std::adjacent_find(seeds.begin(), seeds.end()) == seeds.end());
}

TEST_CASE("streams replay bitwise for a fixed seed") {
  for (const auto& model :
       {NoiseModel::normal(), NoiseModel::uniform01(), NoiseModel::beta22(),
        NoiseModel::ar1_process(0.75, 1.0)}) {
    NoiseStream a(model, 99);
    NoiseStream b(model, 99);
    for (int i = 0; i < 200; ++i) {
      CHECK(a.next_value() == b.next_value());
    }
  }
}

TEST_CASE("identical pairing shares one draw bitwise") {
  for (const auto& model :
       {NoiseModel::normal(), NoiseModel::uniform01(), NoiseModel::beta22(),
        NoiseModel::ar1_process(0.75, 1.0)}) {
    NoiseStream s(model, 7);
    for (int i = 0; i < 500; ++i) {
      const NoisePair p = s.next_pair(PairingMode::identical);
      CHECK(p.x_plus == p.x_minus);
    }
  }
}

TEST_CASE("pair modes consume the underlying sequence as documented") {
  const NoiseModel model = NoiseModel::ar1_process(0.75, 1.0);

  // consecutive: pair k is (Y_{2k-1}, Y_{2k}).
  NoiseStream paired(model, 42);
  NoiseStream plain(model, 42);
  for (int k = 0; k < 100; ++k) {
    const NoisePair p = paired.next_pair(PairingMode::consecutive);
    CHECK(p.x_plus == plain.next_value());
    CHECK(p.x_minus == plain.next_value());
  }

  // identical: pair k is (Y_k, Y_k).
  NoiseStream crn(model, 43);
  NoiseStream plain2(model, 43);
  for (int k = 0; k < 100; ++k) {
    const NoisePair p = crn.next_pair(PairingMode::identical);
    const double y = plain2.next_value();
    CHECK(p.x_plus == y);
    CHECK(p.x_minus == y);
  }
}

TEST_CASE("independent pairing is rejected for ar1") {
  NoiseStream s(NoiseModel::ar1_process(0.75, 1.0), 1);
  CHECK_THROWS_AS(s.next_pair(PairingMode::independent), std::invalid_argument);
}

TEST_CASE("independent pairs are uncorrelated") {
  NoiseStream s(NoiseModel::normal(), 2024);
  const int n = 100000;
  double sp = 0.0, sm = 0.0, spp = 0.0, smm = 0.0, spm = 0.0;
  for (int i = 0; i < n; ++i) {
    const NoisePair p = s.next_pair(PairingMode::independent);
    sp += p.x_plus;
    sm += p.x_minus;
    spp += p.x_plus * p.x_plus;
    smm += p.x_minus * p.x_minus;
    spm += p.x_plus * p.x_minus;
  }
  const double mp = sp / n, mm = sm / n;
  const double corr = (spm / n - mp * mm) /
                      std::sqrt((spp / n - mp * mp) * (smm / n - mm * mm));
  CHECK(std::abs(corr) < 0.01);
}

TEST_CASE("sample moments match the stationary law") {
  // 4-standard-error bands around mean and variance over 1e6 draws.  The
  // standard errors are the asymptotic ones: for the variance of an i.i.d.
  // sample, sqrt((mu4 - var^2)/n); for the Gaussian AR(1), mean and variance
  // estimates inflate by (1+kappa)/(1-kappa) and (1+kappa^2)/(1-kappa^2).
  const std::uint64_t n = 1000000;
  const double nn = static_cast<double>(n);

  struct Case {
    NoiseModel model;
    double se_mean;
    double se_var;
  };
  const double k = 0.75, k2 = k * k;
  const double ar_var = 1.0 / (1.0 - k2);
  const Case cases[] = {
      // normal: mu4 - var^2 = 2 sd^4
      {NoiseModel::normal(), 1.0 / std::sqrt(nn), std::sqrt(2.0 / nn)},
      // uniform: var 1/12, mu4 1/80, mu4 - var^2 = 1/180
      {NoiseModel::uniform01(), std::sqrt(1.0 / 12.0 / nn), std::sqrt(1.0 / 180.0 / nn)},
      // beta(2,2): var 1/20, mu4 3/560, mu4 - var^2 = 1/350
      {NoiseModel::beta22(), std::sqrt(1.0 / 20.0 / nn), std::sqrt(1.0 / 350.0 / nn)},
      {NoiseModel::ar1_process(k, 1.0),
       std::sqrt(ar_var / nn) * std::sqrt((1.0 + k) / (1.0 - k)),
       ar_var * std::sqrt(2.0 / nn) * std::sqrt((1.0 + k2) / (1.0 - k2))},
  };

  int idx = 0;
  for (const auto& c : cases) {
    NoiseStream s(c.model, 5150 + idx);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = s.next_value();
      sum += x;
      sumsq += x * x;
    }
    const Moments m = stationary_moments(c.model);
    const double mean = sum / nn;
    const double var = sumsq / nn - mean * mean;
    const double target_var = m.second_moment - m.mean * m.mean;
    INFO("model index ", idx);
    CHECK(std::abs(mean - m.mean) < 4.0 * c.se_mean);
    CHECK(std::abs(var - target_var) < 4.0 * c.se_var);
    ++idx;
  }
}

TEST_CASE("ar1 lag-1 autocorrelation is kappa") {
  const double kappa = 0.75;
  NoiseStream s(NoiseModel::ar1_process(kappa, 1.0), 777);
  const std::uint64_t n = 1000000;
  double prev = s.next_value();
  double num = 0.0, den = 0.0, sum = prev, sumsq = prev * prev;
  for (std::uint64_t i = 1; i < n; ++i) {
    const double x = s.next_value();
    num += prev * x;
    sum += x;
    sumsq += x * x;
    prev = x;
  }
  const double mean = sum / static_cast<double>(n);
  den = sumsq / static_cast<double>(n) - mean * mean;
  const double rho = (num / static_cast<double>(n - 1) - mean * mean) / den;
  CHECK(std::abs(rho - kappa) < 0.01);
}

TEST_CASE("beta(2,2) draws follow the cubic cdf") {
  NoiseStream s(NoiseModel::beta22(), 31337);
  const std::uint64_t n = 1000000;
  std::uint64_t c25 = 0, c50 = 0, c75 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = s.next_value();
    c25 += x <= 0.25;
    c50 += x <= 0.50;
    c75 += x <= 0.75;
  }
  const double nn = static_cast<double>(n);
  CHECK(std::abs(c25 / nn - 0.15625) < 0.005);  // F(x) = 3x^2 - 2x^3
  CHECK(std::abs(c50 / nn - 0.5) < 0.005);
  CHECK(std::abs(c75 / nn - 0.84375) < 0.005);
}

TEST_CASE("uniform draws stay inside the unit interval") {
  NoiseStream s(NoiseModel::uniform01(), 11);
  for (int i = 0; i < 100000; ++i) {
    const double x = s.next_value();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("normal tail frequencies look gaussian") {
  NoiseStream s(NoiseModel::normal(), 6174);
  const std::uint64_t n = 1000000;
  std::uint64_t below1 = 0, below2 = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const double x = s.next_value();
    below1 += x <= 1.0;
    below2 += x <= 2.0;
  }
  const double nn = static_cast<double>(n);
  CHECK(std::abs(below1 / nn - 0.8413447460685429) < 0.004);
  CHECK(std::abs(below2 / nn - 0.9772498680518208) < 0.002);
}
