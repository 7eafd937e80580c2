#include "kwopt/objective.hpp"

#include <cmath>
#include <stdexcept>

#include "kwopt/special_functions.hpp"

namespace kwopt {

double benchmark_j(double theta, double x) {
  const double d = theta - x;
  return x <= theta ? d * d + 1.0 : d * d;
}

Objective make_benchmark_objective() {
  Objective obj;
  obj.dim = 1;
  obj.eval = [](std::span<const double> theta, double x) {
    return benchmark_j(theta[0], x);
  };
  obj.direction = Direction::minimize;
  return obj;
}

double solve_theta_star(const std::function<double(double)>& g, double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("solve_theta_star: empty bracket");
  }
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo < 0.0) == (ghi < 0.0)) {
    throw std::invalid_argument("solve_theta_star: no sign change over bracket");
  }
  double root = 0.5 * (lo + hi);
  for (int i = 0; i < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(lo)); ++i) {
    root = 0.5 * (lo + hi);
    const double gm = g(root);
    if (gm == 0.0) return root;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = root;
      glo = gm;
    } else {
      hi = root;
    }
  }
  // Newton polish with a central-difference derivative; keep a step only if
  // it stays inside the bracket and shrinks |g|.
  double best = root;
  double gbest = std::abs(g(best));
  for (int i = 0; i < 8 && gbest > 0.0; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(best));
    const double slope = (g(best + h) - g(best - h)) / (2.0 * h);
    if (slope == 0.0 || !std::isfinite(slope)) break;
    const double next = best - g(best) / slope;
    if (!(next > lo && next < hi)) break;
    const double gnext = std::abs(g(next));
    if (gnext >= gbest) break;
    best = next;
    gbest = gnext;
  }
  return best;
}

namespace {

ClosedForm gaussian_closed_form(double mean, double sd) {
  // U(theta) = E[X^2] - 2 theta E[X] + theta^2 + Phi((theta - mean) / sd)
  const double m2 = mean * mean + sd * sd;
  ClosedForm cf;
  cf.u = [mean, sd, m2](double t) {
    return m2 - 2.0 * t * mean + t * t + normal_cdf((t - mean) / sd);
  };
  cf.g = [mean, sd](double t) {
    return 2.0 * (t - mean) + normal_pdf((t - mean) / sd) / sd;
  };
  return cf;
}

void verify_closed_form(const ClosedForm& cf, bool check_stationarity) {
  if (check_stationarity && !(std::abs(cf.g(cf.theta_star)) < 1e-8)) {
    throw std::logic_error("closed_form_for: derivative not ~0 at theta_star");
  }
  const double u_star = cf.u(cf.theta_star);
  for (int i = -3000; i <= 3000; ++i) {
    const double t = static_cast<double>(i) * 1e-3;
    if (cf.u(t) < u_star - 1e-9) {
      throw std::logic_error("closed_form_for: grid point below value at theta_star");
    }
  }
}

}  // namespace

ClosedForm closed_form_for(const NoiseModel& model) {
  ClosedForm cf;
  bool check_stationarity = true;
  switch (model.variant) {
    case NoiseVariant::iid_normal: {
      if (!(model.sd > 0.0)) {
        throw std::invalid_argument("closed_form_for: sd must be > 0");
      }
      cf = gaussian_closed_form(model.mean, model.sd);
      const double width = std::max(1.0, model.sd);
      cf.theta_star = solve_theta_star(cf.g, model.mean - width, model.mean);
      break;
    }
    case NoiseVariant::iid_uniform01: {
      // F(theta) = clamp(theta, 0, 1); the density is taken right-sided at
      // the edges, f(theta) = 1 on [0, 1), so g(0) = 0 at the minimiser.
      cf.u = [](double t) {
        const double f = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        return 1.0 / 3.0 - t + t * t + f;
      };
      cf.g = [](double t) {
        const double dens = (t >= 0.0 && t < 1.0) ? 1.0 : 0.0;
        return -1.0 + 2.0 * t + dens;
      };
      cf.theta_star = solve_theta_star(cf.g, -0.5, 0.5);
      check_stationarity = false;
      break;
    }
    case NoiseVariant::iid_beta22: {
      cf.u = [](double t) {
        const double x = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
        const double cdf = x * x * (3.0 - 2.0 * x);
        return 0.3 - t + t * t + cdf;
      };
      cf.g = [](double t) {
        const double dens = (t >= 0.0 && t <= 1.0) ? 6.0 * t * (1.0 - t) : 0.0;
        return -1.0 + 2.0 * t + dens;
      };
      cf.theta_star = solve_theta_star(cf.g, 0.0, 0.5);
      break;
    }
    case NoiseVariant::ar1: {
      if (!(std::abs(model.kappa) < 1.0) || !(model.innovation_sd > 0.0)) {
        throw std::invalid_argument("closed_form_for: invalid ar1 parameters");
      }
      const double stationary_sd =
          model.innovation_sd / std::sqrt(1.0 - model.kappa * model.kappa);
      cf = gaussian_closed_form(0.0, stationary_sd);
      const double width = std::max(1.0, stationary_sd);
      cf.theta_star = solve_theta_star(cf.g, -width, 0.0);
      break;
    }
    default:
      throw std::invalid_argument("closed_form_for: unsupported noise model");
  }
  verify_closed_form(cf, check_stationarity);
  return cf;
}

}  // namespace kwopt
