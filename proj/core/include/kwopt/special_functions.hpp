#pragma once

namespace kwopt {

// Density and CDF of the standard normal distribution.  The CDF is computed
// as erfc(-x / sqrt(2)) / 2, which keeps the absolute error below 1e-12 over
// the whole real line.
double normal_pdf(double x);
double normal_cdf(double x);

// Principal branch of the Lambert W function, i.e. the w >= 0 solving
// w * exp(w) = z for z >= 0.  Newton iteration started at log1p(z).
// Throws std::domain_error for z < 0.
double lambert_w0(double z);

}  // namespace kwopt
