#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kwopt/noise.hpp"
#include "kwopt/objective.hpp"
#include "kwopt/schedules.hpp"

namespace kwopt {

// Which divisor the central difference uses: the textbook 2c, or plain c
// (which folds a constant factor 2 into the effective step and leaves
// log-log error slopes unchanged).
enum class DivisorConvention { two_c, c };

// Iterate together with the 1-based index of the step about to be taken; a
// fresh run starts at k = 1.
struct IterState {
  std::vector<double> theta;
  std::uint64_t k = 1;
};

struct StepSpec {
  std::variant<DecreasingGain, FixedGain> gain = DecreasingGain{};
  DivisorConvention divisor = DivisorConvention::two_c;
  Direction direction = Direction::minimize;
};

// Raised when an objective evaluation produces a non-finite value; the
// message records theta, x and c at the point of failure.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Finite-difference estimate of the gradient of the mean objective:
//   H_i = (J(theta + c e_i, x_plus_i) - J(theta - c e_i, x_minus_i)) / divisor
// One NoisePair per coordinate.  Throws std::domain_error for c <= 0,
// std::invalid_argument on dimension mismatches, NumericError if J returns a
// non-finite value.
std::vector<double> h_estimate(const Objective& obj, std::span<const double> theta,
                               std::span<const NoisePair> pairs, double c,
                               DivisorConvention divisor);

// One update theta' = theta -/+ lambda * H (minus when minimising).  The
// decreasing-gain step evaluates the schedules at index state.k + k0; the
// fixed-gain step uses the constant (a, c).  The returned state has the
// counter advanced by one.
IterState step_decreasing(const IterState& state, const StepSpec& spec,
                          const Objective& obj, std::span<const NoisePair> pairs);
IterState step_fixed(const IterState& state, const StepSpec& spec,
                     const Objective& obj, std::span<const NoisePair> pairs);

// Precomputed gain and width sequences for steps 1..n of a decreasing-gain
// run, sharing one evaluation of the schedule functions across paths.  Entry
// j-1 holds lambda_at / c_at evaluated at j + g.k0, bit-identical to calling
// the schedule functions directly.
struct ScheduleTable {
  std::vector<double> lambda;
  std::vector<double> c;

  static ScheduleTable build(const DecreasingGain& g, std::uint64_t n_steps);
};

struct PathResult {
  std::vector<std::uint64_t> checkpoints;
  // theta after checkpoint[i] steps (checkpoint 0 records theta0); entries
  // past a divergence are NaN.
  std::vector<std::vector<double>> theta_at;
  bool diverged = false;
  std::uint64_t diverged_at = 0;
};

// Run n_steps updates from theta0, recording theta at the requested
// checkpoints (strictly increasing iteration counts <= n_steps; 0 records the
// start point).  A non-finite iterate or |theta| > 1e6 flags the path as
// diverged and stops it instead of throwing.  The same noise pair is shared
// by all coordinates of a step.
PathResult run(const Objective& obj, const StepSpec& spec, NoiseStream& noise,
               PairingMode mode, std::span<const double> theta0,
               std::uint64_t n_steps, std::span<const std::uint64_t> checkpoints,
               const ScheduleTable* table = nullptr);

// Same recursion with caller-supplied pairs, one call per step; use this to
// plug in noise processes the library does not ship (e.g. moving averages).
PathResult run(const Objective& obj, const StepSpec& spec,
               const std::function<NoisePair()>& next_pair,
               std::span<const double> theta0, std::uint64_t n_steps,
               std::span<const std::uint64_t> checkpoints,
               const ScheduleTable* table = nullptr);

}  // namespace kwopt
