#include "scatspec/grid.hpp"

#include "scatspec/error.hpp"

#include <cmath>

namespace scatspec {

UniformGrid UniformGrid::from_range(double x_min, double x_max, double step) {
  if (!(step > 0.0) || !std::isfinite(x_min) || !std::isfinite(x_max) || x_max < x_min)
    fail(ErrorCode::invalid_argument, "grid: need finite x_min <= x_max and step > 0");
  const double n = (x_max - x_min) / step;
  const double nr = std::round(n);
  if (std::abs(n - nr) > 1e-9 * std::max(1.0, n))
    fail(ErrorCode::invalid_argument, "grid: span is not a whole number of steps");
  return UniformGrid{x_min, step, static_cast<std::size_t>(nr) + 1};
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = x(i);
  return out;
}

std::vector<double> trapezoid_weights(std::size_t count, double step) {
  std::vector<double> w(count, step);
  if (count == 1) {
    w[0] = 0.0;
  } else if (count > 1) {
    w.front() = 0.5 * step;
    w.back() = 0.5 * step;
  }
  return w;
}

std::vector<double> linspace_step(double lo, double hi, double step) {
  std::vector<double> out;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  out.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (x.size() < 2 || den == 0.0) fail(ErrorCode::invalid_argument, "fit_line: degenerate abscissae");
  const double slope = (n * sxy - sx * sy) / den;
  return {slope, (sy - slope * sx) / n};
}

} // namespace scatspec

#include "scatspec/parallel.hpp"

namespace scatspec {
namespace {
unsigned g_default_jobs = 0;
}

unsigned default_jobs() {
  if (g_default_jobs != 0) return g_default_jobs;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

void set_default_jobs(unsigned jobs) { g_default_jobs = jobs; }

} // namespace scatspec
