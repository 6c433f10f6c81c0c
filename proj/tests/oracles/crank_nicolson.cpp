#include "oracles/crank_nicolson.hpp"

#include <stdexcept>

namespace oracle {

std::vector<cplx> heat_evolve(const std::function<double(double)>& v, const std::vector<double>& x,
                              const std::vector<cplx>& f, double t, int steps) {
  const std::size_t n = x.size();
  if (n < 3 || f.size() != n || steps < 1) throw std::invalid_argument("heat_evolve: bad input");
  const double h = x[1] - x[0];
  const double dt = t / steps;
  const double a = dt / (2.0 * h * h);
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 * a + 0.5 * dt * v(x[i]);

  // (I + dt/2 H) u_{n+1} = (I - dt/2 H) u_n on the interior, Thomas elimination
  std::vector<double> cp(n);
  std::vector<cplx> u = f, rhs(n), dp(n);
  u.front() = u.back() = 0.0;
  for (int s = 0; s < steps; ++s) {
    for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = (1.0 - diag[i]) * u[i] + a * (u[i - 1] + u[i + 1]);
    double b = 1.0 + diag[1];
    cp[1] = -a / b;
    dp[1] = rhs[1] / b;
    for (std::size_t i = 2; i + 1 < n; ++i) {
      const double m = 1.0 + diag[i] + a * cp[i - 1];
      cp[i] = -a / m;
      dp[i] = (rhs[i] + a * dp[i - 1]) / m;
    }
    u[n - 2] = dp[n - 2];
    for (std::size_t i = n - 2; i-- > 1;) u[i] = dp[i] - cp[i] * u[i + 1];
  }
  return u;
}

} // namespace oracle
