#include "scatspec/verify/maximal.hpp"

#include "scatspec/error.hpp"

#include <algorithm>
#include <cmath>

namespace scatspec {

std::vector<double> hl_maximal(const std::vector<double>& f) {
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    // windows grow by one cell on each side; the running sum keeps k = 0 exact
    double sum = std::abs(f[i]);
    double best = sum;
    for (std::size_t k = 1; i >= k || i + k < n; ++k) {
      if (i >= k) sum += std::abs(f[i - k]);
      if (i + k < n) sum += std::abs(f[i + k]);
      best = std::max(best, sum / static_cast<double>(2 * k + 1));
    }
    out[i] = best;
  }
  return out;
}

double indicator_maximal(double a, double b, double x) {
  if (!(b > a)) fail(ErrorCode::invalid_argument, "indicator_maximal: need a < b");
  if (x > a && x < b) return 1.0;
  // outside: the average over [x-r, x+r] is increasing until the window covers [a, b]
  const double d_far = x <= a ? b - x : x - a;
  return (b - a) / (2.0 * d_far);
}

std::vector<double> gaussian_mollify(const std::vector<double>& f, double sigma) {
  if (!(sigma > 0.0)) fail(ErrorCode::invalid_argument, "gaussian_mollify: sigma must be positive");
  const long n = static_cast<long>(f.size());
  const long half = std::min(n, static_cast<long>(std::ceil(8.0 * sigma)));
  std::vector<double> w(static_cast<std::size_t>(2 * half + 1));
  double tot = 0.0;
  for (long m = -half; m <= half; ++m) {
    const double v = std::exp(-0.5 * static_cast<double>(m * m) / (sigma * sigma));
    w[static_cast<std::size_t>(m + half)] = v;
    tot += v;
  }
  for (double& v : w) v /= tot;
  std::vector<double> out(f.size(), 0.0);
  for (long i = 0; i < n; ++i) {
    double acc = 0.0;
    for (long m = -half; m <= half; ++m) {
      const long k = i - m;
      if (k >= 0 && k < n) acc += w[static_cast<std::size_t>(m + half)] * std::abs(f[static_cast<std::size_t>(k)]);
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

} // namespace scatspec
