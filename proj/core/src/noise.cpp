#include "kwopt/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace kwopt {

namespace {

std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::uint64_t s = seed;
  const std::uint64_t a = splitmix64_next(s);
  const std::uint64_t b = splitmix64_next(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

void check_model(const NoiseModel& m) {
  switch (m.variant) {
    case NoiseVariant::iid_normal:
      if (!(m.sd > 0.0)) throw std::invalid_argument("NoiseModel: sd must be > 0");
      break;
    case NoiseVariant::ar1:
      if (!(std::abs(m.kappa) < 1.0))
        throw std::invalid_argument("NoiseModel: |kappa| must be < 1");
      if (!(m.innovation_sd > 0.0))
        throw std::invalid_argument("NoiseModel: innovation_sd must be > 0");
      break;
    default:
      break;
  }
}

}  // namespace

NoiseModel NoiseModel::normal(double mean, double sd) {
  NoiseModel m;
  m.variant = NoiseVariant::iid_normal;
  m.mean = mean;
  m.sd = sd;
  return m;
}

NoiseModel NoiseModel::uniform01() {
  NoiseModel m;
  m.variant = NoiseVariant::iid_uniform01;
  return m;
}

NoiseModel NoiseModel::beta22() {
  NoiseModel m;
  m.variant = NoiseVariant::iid_beta22;
  return m;
}

NoiseModel NoiseModel::ar1_process(double kappa, double innovation_sd) {
  NoiseModel m;
  m.variant = NoiseVariant::ar1;
  m.kappa = kappa;
  m.innovation_sd = innovation_sd;
  return m;
}

Moments stationary_moments(const NoiseModel& m) {
  check_model(m);
  switch (m.variant) {
    case NoiseVariant::iid_normal:
      return {m.mean, m.mean * m.mean + m.sd * m.sd};
    case NoiseVariant::iid_uniform01:
      return {0.5, 1.0 / 3.0};
    case NoiseVariant::iid_beta22:
      // Beta(2,2): mean 1/2, variance 1/20.
      return {0.5, 0.3};
    case NoiseVariant::ar1: {
      const double v = m.innovation_sd * m.innovation_sd / (1.0 - m.kappa * m.kappa);
      return {0.0, v};
    }
  }
  throw std::logic_error("stationary_moments: unreachable");
}

std::uint64_t derive_path_seed(std::uint64_t master_seed, std::uint64_t path_index) {
  // (path_index + 1)-th output of SplitMix64 seeded with master_seed.
  std::uint64_t state = master_seed + path_index * 0x9E3779B97F4A7C15ULL;
  return splitmix64_next(state);
}

NoiseStream::NoiseStream(const NoiseModel& model, std::uint64_t seed)
    : model_(model), engine_(make_engine(seed)) {
  check_model(model_);
  if (model_.variant == NoiseVariant::ar1) {
    const double stationary_sd =
        model_.innovation_sd / std::sqrt(1.0 - model_.kappa * model_.kappa);
    ar_state_ = stationary_sd * normal();
  }
}

double NoiseStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NoiseStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double mul = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * mul;
  has_spare_ = true;
  return u * mul;
}

double NoiseStream::next_value() {
  switch (model_.variant) {
    case NoiseVariant::iid_normal:
      return model_.mean + model_.sd * normal();
    case NoiseVariant::iid_uniform01:
      return uniform();
    case NoiseVariant::iid_beta22: {
      // Median of three uniforms has density 6x(1-x) on [0,1].
      const double a = uniform();
      const double b = uniform();
      const double c = uniform();
      const double lo = std::min(std::min(a, b), c);
      const double hi = std::max(std::max(a, b), c);
      return a + b + c - lo - hi;
    }
    case NoiseVariant::ar1:
      ar_state_ = model_.kappa * ar_state_ + model_.innovation_sd * normal();
      return ar_state_;
  }
  throw std::logic_error("NoiseStream::next_value: unreachable");
}

NoisePair NoiseStream::next_pair(PairingMode mode) {
  switch (mode) {
    case PairingMode::identical: {
      const double x = next_value();
      return {x, x};
    }
    case PairingMode::independent: {
      if (model_.variant == NoiseVariant::ar1) {
        throw std::invalid_argument(
            "NoiseStream::next_pair: independent pairing is undefined for ar1");
      }
      const double p = next_value();
      const double m = next_value();
      return {p, m};
    }
    case PairingMode::consecutive: {
      const double p = next_value();
      const double m = next_value();
      return {p, m};
    }
  }
  throw std::logic_error("NoiseStream::next_pair: unreachable");
}

}  // namespace kwopt
