#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace kwopt {

// Mean-field limits of the two recursions:
//   decreasing:  y'(t) = (rate / t) * g(y),  started at some s > 0
//   fixed:       y'(t) = rate * g(y)
// (`rate` is lambda0 for the decreasing variant and the constant step for the
// fixed one).  Substituting t = s * exp(u) turns the first into the second,
// which is what makes the two stability laws below line up.
enum class OdeVariant { decreasing, fixed };

using OdeField = std::function<std::vector<double>(const std::vector<double>&)>;

struct OdeSolution {
  std::vector<double> grid;                 // accepted step times, s first
  std::vector<std::vector<double>> values;  // y at each grid time
  OdeVariant variant = OdeVariant::decreasing;
};

class OdeError : public std::runtime_error {
 public:
  explicit OdeError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive Dormand-Prince 5(4) integration from s to t_end with mixed
// absolute/relative local error tolerance `tol` per step.  Requires
// t_end > s, tol > 0, and s > 0 for the decreasing variant (its field is
// singular at t = 0).  Throws OdeError if step-size control underflows.
OdeSolution integrate(const OdeField& g, OdeVariant variant, double rate, double s,
                      double t_end, std::span<const double> xi, double tol);

// Sensitivity of the flow to its start point, measured by integrating the
// pair (y(xi), y(xi + d_xi e_0)) jointly and fitting the decay of
// r(t) = |y(t, xi + d_xi e_0) - y(t, xi)| / d_xi over the second half of the
// grid:
//   decreasing:  r ~ cstar * (s/t)^alpha      (log r vs log(s/t))
//   fixed:       r ~ cstar * exp(-alpha * rate * (t-s))
// If r underflows to zero inside the fit range, alpha_hat is +infinity and
// `underflow` is set.
struct StabilityEstimate {
  double alpha_hat = 0.0;
  double cstar_hat = 0.0;
  OdeVariant variant = OdeVariant::decreasing;
  bool underflow = false;
};

StabilityEstimate estimate_stability(const OdeField& g, OdeVariant variant, double rate,
                                     double s, double t_end, std::span<const double> xi,
                                     double d_xi = 1e-4, double tol = 1e-10);

// Scalar convenience wrappers (dim 1).
OdeSolution integrate(const std::function<double(double)>& g, OdeVariant variant,
                      double rate, double s, double t_end, double xi, double tol);
StabilityEstimate estimate_stability(const std::function<double(double)>& g,
                                     OdeVariant variant, double rate, double s,
                                     double t_end, double xi, double d_xi = 1e-4,
                                     double tol = 1e-10);

}  // namespace kwopt
