#include "kwopt/schedules.hpp"

#include <cmath>
#include <stdexcept>

namespace kwopt {

double lambda_at(const DecreasingGain& g, std::uint64_t k) {
  if (k == 0) {
    throw std::domain_error("lambda_at: step index must be >= 1");
  }
  // log1p(1/k) == log((k+1)/k) without cancellation for large k.
  return g.lambda0 * std::log1p(1.0 / static_cast<double>(k));
}

double c_at(const DecreasingGain& g, std::uint64_t k) {
  if (k == 0) {
    throw std::domain_error("c_at: step index must be >= 1");
  }
  return g.c0 * std::pow(static_cast<double>(k), -g.gamma);
}

ScheduleReport validate(const DecreasingGain& g) {
  if (!(g.lambda0 > 0.0)) {
    return {false, "lambda0 must be > 0"};
  }
  if (!(g.c0 > 0.0 && g.c0 <= 1.0)) {
    return {false, "c0 must lie in (0, 1]"};
  }
  if (!(g.gamma > 0.0 && g.gamma < 1.0 / 3.0)) {
    return {false, "gamma must lie in the open interval (0, 1/3)"};
  }
  return {};
}

ScheduleReport validate(const FixedGain& g) {
  if (!(g.a > 0.0)) {
    return {false, "a must be > 0"};
  }
  if (!(g.c > 0.0 && g.c <= 1.0)) {
    return {false, "c must lie in (0, 1]"};
  }
  return {};
}

FixedGain coupled_fixed_gain(double a) {
  if (!(a > 0.0 && a <= 1.0)) {
    throw std::domain_error("coupled_fixed_gain: a must lie in (0, 1]");
  }
  return {a, std::pow(a, 0.2)};
}

}  // namespace kwopt
