#include "kwopt/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace kwopt {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1 / sqrt(2*pi)
constexpr double kInvSqrt2 = 0.7071067811865475244;    // 1 / sqrt(2)
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double lambert_w0(double z) {
  if (!(z >= 0.0)) {
    throw std::domain_error("lambert_w0: argument must be >= 0");
  }
  if (z == 0.0) {
    return 0.0;
  }
  double w = std::log1p(z);  // good starting point on [0, inf)
  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    if (std::abs(f) <= 1e-15 * std::max(z, 1.0)) {
      break;
    }
    w -= f / (ew * (1.0 + w));
  }
  return w;
}

}  // namespace kwopt
