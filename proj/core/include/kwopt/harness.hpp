#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "kwopt/kiefer_wolfowitz.hpp"
#include "kwopt/noise.hpp"
#include "kwopt/schedules.hpp"

namespace kwopt {

// Full description of one Monte Carlo experiment: which benchmark objective
// and noise model to run, how the central difference is coupled, the gain
// scheme, the start point, and the sampling plan.  `master_seed` must be set
// explicitly; validation rejects configs without one so that no experiment
// ever runs off an accidental default.
struct RunConfig {
  std::string objective = "benchmark";
  NoiseModel noise = NoiseModel::normal();
  PairingMode pairing = PairingMode::identical;
  std::variant<DecreasingGain, FixedGain> scheme = DecreasingGain{};
  DivisorConvention divisor = DivisorConvention::two_c;
  double theta0 = 0.0;
  std::uint64_t n_paths = 0;
  std::vector<std::uint64_t> checkpoints;  // strictly increasing iteration counts
  std::uint64_t fit_lo = 0;                // log-log fit window, inclusive
  std::uint64_t fit_hi = 0;
  std::optional<std::uint64_t> master_seed;
};

struct ConfigReport {
  bool ok = true;
  std::string violation;
};

ConfigReport validate(const RunConfig& cfg);

// Mean absolute error |theta_k - theta_star| across paths at each checkpoint,
// with its standard error (sample sd / sqrt(effective paths)).  Paths that
// diverged are excluded from the means entirely but counted in `diverged`.
struct ErrorCurve {
  std::vector<std::uint64_t> checkpoints;
  std::vector<double> mean_abs_error;
  std::vector<double> std_error;
  std::uint64_t n_paths = 0;  // as requested
  std::uint64_t diverged = 0;
  double theta_star = 0.0;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;  // in natural logs
  double r_squared = 0.0;
};

class ExperimentError : public std::runtime_error {
 public:
  explicit ExperimentError(const std::string& what) : std::runtime_error(what) {}
};

// Run cfg.n_paths independent paths (path p is seeded with
// derive_path_seed(master_seed, p)) and aggregate the error curve.  Workers
// only partition the path indices; results are reduced in path order, so the
// output is bit-identical for any worker count.  workers == 0 means "use the
// hardware concurrency".  Throws ExperimentError if every path diverged.
ErrorCurve run_experiment(const RunConfig& cfg, unsigned workers = 0);

// Ordinary least squares of log(mean_abs_error) on log(k) over checkpoints in
// [k_lo, k_hi].  Needs at least 3 usable points; throws std::domain_error if
// the window contains a zero or non-finite error value.
RegressionFit fit_loglog(const ErrorCurve& curve, std::uint64_t k_lo, std::uint64_t k_hi);

// Fixed-gain plateau study: for each step size a (coupled as c = a^(1/5)) run
// past the transient, i.e. n >= 20 / (a * alpha_hat) steps where alpha_hat is
// the contraction exponent of the mean-field flow probed via
// estimate_stability, then time-average |theta_k - theta_star| over the final
// quarter of the iterations and average that across paths.
struct PlateauPoint {
  double a = 0.0;
  double c = 0.0;
  std::uint64_t n_steps = 0;
  double plateau_error = 0.0;
  std::uint64_t diverged = 0;
};

std::vector<PlateauPoint> plateau_study(const RunConfig& base, std::span<const double> gains,
                                        unsigned workers = 0);

}  // namespace kwopt
