#include "kwopt/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kwopt {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Difference between the 5th- and 4th-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

using Vec = std::vector<double>;

struct Rhs {
  const OdeField& g;
  OdeVariant variant;
  double rate;

  Vec operator()(double t, const Vec& y) const {
    Vec v = g(y);
    const double f = variant == OdeVariant::decreasing ? rate / t : rate;
    for (double& x : v) x *= f;
    return v;
  }
};

void axpy(Vec& out, const Vec& base, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  out = base;
  for (const auto& [w, k] : terms) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += h * w * (*k)[i];
  }
}

}  // namespace

OdeSolution integrate(const OdeField& g, OdeVariant variant, double rate, double s,
                      double t_end, std::span<const double> xi, double tol) {
  if (!(t_end > s)) {
    throw std::invalid_argument("integrate: t_end must exceed s");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("integrate: tol must be > 0");
  }
  if (variant == OdeVariant::decreasing && !(s > 0.0)) {
    throw std::invalid_argument("integrate: decreasing variant needs s > 0");
  }

  const Rhs rhs{g, variant, rate};
  const double h_min = 1e-14 * std::max(1.0, std::abs(t_end));

  OdeSolution sol;
  sol.variant = variant;
  Vec y(xi.begin(), xi.end());
  double t = s;
  sol.grid.push_back(t);
  sol.values.push_back(y);

  double h = (t_end - s) / 100.0;
  Vec stage, y5, err;
  for (long iter = 0; t < t_end; ++iter) {
    if (iter > 10'000'000) {
      throw OdeError("integrate: step limit exceeded");
    }
    if (h < h_min) {
      throw OdeError("integrate: step size underflow");
    }
    h = std::min(h, t_end - t);

    const Vec k1 = rhs(t, y);
    axpy(stage, y, h, {{a21, &k1}});
    const Vec k2 = rhs(t + h / 5, stage);
    axpy(stage, y, h, {{a31, &k1}, {a32, &k2}});
    const Vec k3 = rhs(t + 3 * h / 10, stage);
    axpy(stage, y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
    const Vec k4 = rhs(t + 4 * h / 5, stage);
    axpy(stage, y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
    const Vec k5 = rhs(t + 8 * h / 9, stage);
    axpy(stage, y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
    const Vec k6 = rhs(t + h, stage);
    axpy(y5, y, h, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const Vec k7 = rhs(t + h, y5);

    double err_norm = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                            e6 * k6[i] + e7 * k7[i]);
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      err_norm += (e / sc) * (e / sc);
    }
    err_norm = y.empty() ? 0.0 : std::sqrt(err_norm / static_cast<double>(y.size()));

    if (err_norm <= 1.0) {
      t += h;
      y = y5;
      sol.grid.push_back(t);
      sol.values.push_back(y);
    }
    const double factor =
        err_norm == 0.0 ? 5.0
                        : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return sol;
}

StabilityEstimate estimate_stability(const OdeField& g, OdeVariant variant, double rate,
                                     double s, double t_end, std::span<const double> xi,
                                     double d_xi, double tol) {
  if (!(d_xi > 0.0)) {
    throw std::invalid_argument("estimate_stability: d_xi must be > 0");
  }
  const std::size_t d = xi.size();
  // Integrate the two starts jointly so they share one adaptive grid.
  OdeField joint = [&g, d](const Vec& yz) {
    Vec y(yz.begin(), yz.begin() + d);
    Vec z(yz.begin() + d, yz.end());
    Vec fy = g(y);
    Vec fz = g(z);
    Vec out(2 * d);
    std::copy(fy.begin(), fy.end(), out.begin());
    std::copy(fz.begin(), fz.end(), out.begin() + d);
    return out;
  };
  Vec start(2 * d);
  std::copy(xi.begin(), xi.end(), start.begin());
  std::copy(xi.begin(), xi.end(), start.begin() + d);
  start[d] += d_xi;  // perturb the first coordinate of the second copy

  const OdeSolution sol = integrate(joint, variant, rate, s, t_end, start, tol);

  StabilityEstimate est;
  est.variant = variant;
  const std::size_t n = sol.grid.size();
  std::vector<double> xs, ys;
  for (std::size_t i = n / 2; i < n; ++i) {
    const double t = sol.grid[i];
    if (t <= s) continue;
    double r2 = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = sol.values[i][d + j] - sol.values[i][j];
      r2 += diff * diff;
    }
    const double r = std::sqrt(r2) / d_xi;
    if (r == 0.0) {
      est.underflow = true;
      est.alpha_hat = std::numeric_limits<double>::infinity();
      est.cstar_hat = 0.0;
      return est;
    }
    xs.push_back(variant == OdeVariant::decreasing ? std::log(s / t) : rate * (t - s));
    ys.push_back(std::log(r));
  }
  if (xs.size() < 3) {
    throw OdeError("estimate_stability: too few grid points for the fit");
  }

  const double nn = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= nn;
  my /= nn;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  est.alpha_hat = variant == OdeVariant::decreasing ? slope : -slope;
  est.cstar_hat = std::exp(intercept);
  return est;
}

OdeSolution integrate(const std::function<double(double)>& g, OdeVariant variant,
                      double rate, double s, double t_end, double xi, double tol) {
  OdeField field = [&g](const Vec& y) { return Vec{g(y[0])}; };
  const double start[] = {xi};
  return integrate(field, variant, rate, s, t_end, start, tol);
}

StabilityEstimate estimate_stability(const std::function<double(double)>& g,
                                     OdeVariant variant, double rate, double s,
                                     double t_end, double xi, double d_xi, double tol) {
  OdeField field = [&g](const Vec& y) { return Vec{g(y[0])}; };
  const double start[] = {xi};
  return estimate_stability(field, variant, rate, s, t_end, start, d_xi, tol);
}

}  // namespace kwopt
