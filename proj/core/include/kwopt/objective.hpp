#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "kwopt/noise.hpp"

namespace kwopt {

enum class Direction { minimize, maximize };

// A noisy objective J(theta, x): the optimizer only ever sees J evaluated at
// perturbed points with observation noise x plugged in.
struct Objective {
  std::size_t dim = 1;
  std::function<double(std::span<const double>, double)> eval;
  Direction direction = Direction::minimize;
};

// The discontinuous scalar benchmark observation:
//   J(theta, x) = (theta - x)^2 + 1  if x <= theta   (the tie sits on the
//   J(theta, x) = (theta - x)^2      otherwise        jump branch)
// Averaging over x gives U(theta) = E[X^2] - 2 theta E[X] + theta^2 +
// P(X <= theta), smooth in theta wherever X has a density.
double benchmark_j(double theta, double x);

Objective make_benchmark_objective();

// Mean objective U, its derivative g = U', and the minimiser theta_star for a
// benchmark noise model.  theta_star is computed at construction by
// solve_theta_star, then cross-checked: |g(theta_star)| < 1e-8 (skipped for
// uniform01, whose g jumps at the minimiser and is taken right-sided there)
// and U attains its minimum at theta_star on a grid scan of [-3, 3] at 1e-3
// resolution.
struct ClosedForm {
  std::function<double(double)> u;
  std::function<double(double)> g;
  double theta_star = 0.0;
};

// Supported models: iid_normal (any mean/sd), iid_uniform01, iid_beta22, and
// ar1 (any |kappa| < 1, innovation_sd).  Throws std::invalid_argument
// otherwise.
ClosedForm closed_form_for(const NoiseModel& model);

// Root of g on [lo, hi] by bisection refined with guarded Newton steps (the
// derivative is taken by central differences).  Requires a sign change over
// the bracket.  For continuous g the result satisfies |g(root)| < 1e-10.
double solve_theta_star(const std::function<double(double)>& g, double lo, double hi);

}  // namespace kwopt
