#include "scatspec/green.hpp"

#include <cmath>

namespace scatspec {

double sinc(double u) {
  if (std::abs(u) < 1e-4) return 1.0 - u * u / 6.0;
  return std::sin(u) / u;
}

double cos_minus_sinc_over_u(double u) {
  if (std::abs(u) < 0.1) {
    const double u2 = u * u;
    return u * (-1.0 / 3.0 + u2 * (1.0 / 30.0 - u2 / 840.0));
  }
  return (std::cos(u) - std::sin(u) / u) / u;
}

cplx GreenFactor::value(double x, double k) {
  const double u = k * x;
  return std::polar(1.0, u) * (x * sinc(u));
}

cplx GreenFactor::dk(double x, double k) {
  const double u = k * x;
  return std::polar(1.0, u) * (x * x) * cplx(cos_minus_sinc_over_u(u), sinc(u));
}

} // namespace scatspec
