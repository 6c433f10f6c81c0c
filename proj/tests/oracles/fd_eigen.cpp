#include "oracles/fd_eigen.hpp"

#include <cmath>
#include <vector>

namespace oracle {

double fd_ground_state(const scatspec::AnalyticForm& form, double L, double h) {
  const auto n = static_cast<std::size_t>(std::llround(2 * L / h)) - 1;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 / (h * h) + form.evaluate(-L + (i + 1) * h);
  const double off2 = 1.0 / (h * h * h * h);
  auto below = [&](double lam) {
    int c = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      q = diag[i] - lam - (i ? off2 / q : 0.0);
      if (q == 0.0) q = 1e-300;
      if (q < 0) ++c;
    }
    return c;
  };
  double lo = -100.0, hi = 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) >= 1 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double fd_ground_state_richardson(const scatspec::AnalyticForm& form, double L, double h) {
  return (4.0 * fd_ground_state(form, L, h / 2) - fd_ground_state(form, L, h)) / 3.0;
}

} // namespace oracle
