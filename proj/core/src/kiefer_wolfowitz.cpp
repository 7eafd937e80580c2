#include "kwopt/kiefer_wolfowitz.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace kwopt {

namespace {

constexpr double kDivergenceBound = 1e6;

[[noreturn]] void throw_numeric(double theta_i, double x, double c) {
  std::ostringstream os;
  os << "objective returned a non-finite value at theta=" << theta_i << " x=" << x
     << " c=" << c;
  throw NumericError(os.str());
}

double eval_or_throw(const Objective& obj, std::span<const double> theta, double x,
                     double c) {
  const double j = obj.eval(theta, x);
  if (!std::isfinite(j)) {
    throw_numeric(theta[0], x, c);
  }
  return j;
}

// Central-difference update of `theta` in place; `scratch` must alias
// `theta`'s contents on entry and is restored before returning.
void apply_step(const Objective& obj, std::vector<double>& theta,
                std::vector<double>& scratch, std::span<const NoisePair> pairs,
                double lambda, double c, DivisorConvention divisor,
                Direction direction) {
  const double div = divisor == DivisorConvention::two_c ? 2.0 * c : c;
  const double sign = direction == Direction::minimize ? -1.0 : 1.0;
  const std::size_t d = obj.dim;
  for (std::size_t i = 0; i < d; ++i) {
    const double base = scratch[i];
    scratch[i] = base + c;
    const double jp = eval_or_throw(obj, scratch, pairs[i].x_plus, c);
    scratch[i] = base - c;
    const double jm = eval_or_throw(obj, scratch, pairs[i].x_minus, c);
    scratch[i] = base;
    theta[i] += sign * lambda * (jp - jm) / div;
  }
  // The next step perturbs around the updated point.
  scratch = theta;
}

void check_step_args(const Objective& obj, std::span<const double> theta,
                     std::span<const NoisePair> pairs, double c) {
  if (!(c > 0.0)) {
    throw std::domain_error("h_estimate: perturbation width c must be > 0");
  }
  if (theta.size() != obj.dim || pairs.size() != obj.dim) {
    throw std::invalid_argument("h_estimate: theta/pairs size must equal objective dim");
  }
}

IterState step_common(const IterState& state, const StepSpec& spec, const Objective& obj,
                      std::span<const NoisePair> pairs, double lambda, double c) {
  check_step_args(obj, state.theta, pairs, c);
  IterState next;
  next.theta = state.theta;
  std::vector<double> scratch = state.theta;
  apply_step(obj, next.theta, scratch, pairs, lambda, c, spec.divisor, spec.direction);
  next.k = state.k + 1;
  return next;
}

}  // namespace

std::vector<double> h_estimate(const Objective& obj, std::span<const double> theta,
                               std::span<const NoisePair> pairs, double c,
                               DivisorConvention divisor) {
  check_step_args(obj, theta, pairs, c);
  const double div = divisor == DivisorConvention::two_c ? 2.0 * c : c;
  std::vector<double> scratch(theta.begin(), theta.end());
  std::vector<double> h(obj.dim, 0.0);
  for (std::size_t i = 0; i < obj.dim; ++i) {
    const double base = scratch[i];
    scratch[i] = base + c;
    const double jp = eval_or_throw(obj, scratch, pairs[i].x_plus, c);
    scratch[i] = base - c;
    const double jm = eval_or_throw(obj, scratch, pairs[i].x_minus, c);
    scratch[i] = base;
    h[i] = (jp - jm) / div;
  }
  return h;
}

IterState step_decreasing(const IterState& state, const StepSpec& spec,
                          const Objective& obj, std::span<const NoisePair> pairs) {
  const auto* g = std::get_if<DecreasingGain>(&spec.gain);
  if (g == nullptr) {
    throw std::invalid_argument("step_decreasing: spec does not hold a decreasing gain");
  }
  const std::uint64_t idx = state.k + g->k0;
  return step_common(state, spec, obj, pairs, lambda_at(*g, idx), c_at(*g, idx));
}

IterState step_fixed(const IterState& state, const StepSpec& spec, const Objective& obj,
                     std::span<const NoisePair> pairs) {
  const auto* g = std::get_if<FixedGain>(&spec.gain);
  if (g == nullptr) {
    throw std::invalid_argument("step_fixed: spec does not hold a fixed gain");
  }
  return step_common(state, spec, obj, pairs, g->a, g->c);
}

ScheduleTable ScheduleTable::build(const DecreasingGain& g, std::uint64_t n_steps) {
  ScheduleTable t;
  t.lambda.resize(n_steps);
  t.c.resize(n_steps);
  for (std::uint64_t j = 1; j <= n_steps; ++j) {
    t.lambda[j - 1] = lambda_at(g, j + g.k0);
    t.c[j - 1] = c_at(g, j + g.k0);
  }
  return t;
}

namespace {

template <typename PairFn>
PathResult run_impl(const Objective& obj, const StepSpec& spec, PairFn&& next_pair,
                    std::span<const double> theta0, std::uint64_t n_steps,
                    std::span<const std::uint64_t> checkpoints,
                    const ScheduleTable* table) {
  if (theta0.size() != obj.dim) {
    throw std::invalid_argument("run: theta0 size must equal objective dim");
  }
  for (std::size_t i = 0; i + 1 < checkpoints.size(); ++i) {
    if (checkpoints[i] >= checkpoints[i + 1]) {
      throw std::invalid_argument("run: checkpoints must be strictly increasing");
    }
  }
  if (!checkpoints.empty() && checkpoints.back() > n_steps) {
    throw std::invalid_argument("run: checkpoint beyond n_steps");
  }

  const auto* dec = std::get_if<DecreasingGain>(&spec.gain);
  const auto* fix = std::get_if<FixedGain>(&spec.gain);
  if (fix != nullptr && !(fix->c > 0.0)) {
    throw std::domain_error("run: fixed gain requires c > 0");
  }
  if (table != nullptr && dec != nullptr && table->lambda.size() < n_steps) {
    throw std::invalid_argument("run: schedule table shorter than n_steps");
  }

  PathResult res;
  res.checkpoints.assign(checkpoints.begin(), checkpoints.end());
  res.theta_at.resize(checkpoints.size());

  std::vector<double> theta(theta0.begin(), theta0.end());
  std::vector<double> scratch = theta;
  std::vector<NoisePair> pairs(obj.dim);

  std::size_t next_cp = 0;
  if (next_cp < checkpoints.size() && checkpoints[next_cp] == 0) {
    res.theta_at[next_cp++] = theta;
  }

  for (std::uint64_t j = 1; j <= n_steps; ++j) {
    // One pair per step, shared by every coordinate.
    const NoisePair pair = next_pair();
    for (auto& p : pairs) p = pair;

    double lambda, c;
    if (dec != nullptr) {
      if (table != nullptr) {
        lambda = table->lambda[j - 1];
        c = table->c[j - 1];
      } else {
        lambda = lambda_at(*dec, j + dec->k0);
        c = c_at(*dec, j + dec->k0);
      }
    } else {
      lambda = fix->a;
      c = fix->c;
    }
    if (!(c > 0.0)) {
      throw std::domain_error("run: schedule produced c <= 0");
    }

    bool bad = false;
    try {
      apply_step(obj, theta, scratch, pairs, lambda, c, spec.divisor, spec.direction);
    } catch (const NumericError&) {
      bad = true;
    }
    if (!bad) {
      double norm2 = 0.0;
      for (const double t : theta) norm2 += t * t;
      bad = !std::isfinite(norm2) || norm2 > kDivergenceBound * kDivergenceBound;
    }
    if (bad) {
      res.diverged = true;
      res.diverged_at = j;
      const std::vector<double> nan_theta(obj.dim,
                                          std::numeric_limits<double>::quiet_NaN());
      while (next_cp < checkpoints.size()) {
        res.theta_at[next_cp++] = nan_theta;
      }
      return res;
    }
    if (next_cp < checkpoints.size() && checkpoints[next_cp] == j) {
      res.theta_at[next_cp++] = theta;
    }
  }
  return res;
}

}  // namespace

PathResult run(const Objective& obj, const StepSpec& spec, NoiseStream& noise,
               PairingMode mode, std::span<const double> theta0, std::uint64_t n_steps,
               std::span<const std::uint64_t> checkpoints, const ScheduleTable* table) {
  return run_impl(
      obj, spec, [&noise, mode] { return noise.next_pair(mode); }, theta0, n_steps,
      checkpoints, table);
}

PathResult run(const Objective& obj, const StepSpec& spec,
               const std::function<NoisePair()>& next_pair, std::span<const double> theta0,
               std::uint64_t n_steps, std::span<const std::uint64_t> checkpoints,
               const ScheduleTable* table) {
  return run_impl(obj, spec, next_pair, theta0, n_steps, checkpoints, table);
}

}  // namespace kwopt
