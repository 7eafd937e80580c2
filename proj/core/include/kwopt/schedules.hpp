#pragma once

#include <cstdint>
#include <string>

namespace kwopt {

// Gain and perturbation-width schedules for the decreasing-gain recursion:
//
//   lambda_k = lambda0 * log((k+1) / k)   (the exact integral of lambda0/u
//                                          over [k, k+1], ~ lambda0/k)
//   c_k      = c0 * k^(-gamma)
//
// Valid parameter ranges: lambda0 > 0, c0 in (0, 1], gamma in the open
// interval (0, 1/3).  k0 is an index offset applied by the driver, not here;
// schedules are evaluated at k >= 1.
struct DecreasingGain {
  double lambda0 = 1.0;
  double c0 = 1.0;
  double gamma = 0.2;
  std::uint64_t k0 = 0;
};

// Constant step a and perturbation width c for the fixed-gain recursion.
struct FixedGain {
  double a = 0.0;
  double c = 0.0;
};

// Outcome of a parameter check.  `ok` is false iff some constraint fails, in
// which case `violation` names the offending condition.
struct ScheduleReport {
  bool ok = true;
  std::string violation;
};

// Evaluate the schedules at step index k >= 1; throws std::domain_error for
// k == 0 (the decreasing gain is undefined there).
double lambda_at(const DecreasingGain& g, std::uint64_t k);
double c_at(const DecreasingGain& g, std::uint64_t k);

ScheduleReport validate(const DecreasingGain& g);
ScheduleReport validate(const FixedGain& g);

// The width that balances bias and noise for a fixed step a: c = a^(1/5).
// Requires a in (0, 1].
FixedGain coupled_fixed_gain(double a);

}  // namespace kwopt
