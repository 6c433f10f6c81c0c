#include "scatspec/dyadic.hpp"

#include "scatspec/error.hpp"

#include <cmath>

namespace scatspec {

std::string profile_name(BumpProfile p) { return p == BumpProfile::exponential ? "exponential" : "smoothstep7"; }

BumpProfile parse_profile(const std::string& name) {
  if (name == "exponential") return BumpProfile::exponential;
  if (name == "smoothstep7") return BumpProfile::smoothstep7;
  fail(ErrorCode::invalid_argument, "unknown bump profile '" + name + "'");
}

double smooth_step(double u, BumpProfile p) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  if (p == BumpProfile::exponential) {
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
  }
  // S_7(u) = u^8 Σ_{n=0}^{7} C(7+n, n) C(15, 7-n) (-u)^n
  static const double c[8] = {6435, -40040, 108108, -163800, 150150, -83160, 25740, -3432};
  double acc = 0.0;
  for (int n = 7; n >= 0; --n) acc = acc * u + c[n];
  const double u2 = u * u, u4 = u2 * u2;
  return u4 * u4 * acc;
}

DyadicSystem::DyadicSystem(int j_lo, int j_hi, BumpProfile profile) : j_lo_(j_lo), j_hi_(j_hi), profile_(profile) {
  if (!(j_lo < j_hi)) fail(ErrorCode::invalid_argument, "make_dyadic: need j_lo < j_hi");
}

double DyadicSystem::Phi(double x) const {
  const double a = std::abs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return smooth_step(2.0 - 2.0 * a, profile_);
}

double DyadicSystem::Phi_j(int j, double x) const { return Phi(std::ldexp(x, -j)); }
double DyadicSystem::phi_j(int j, double x) const { return phi(std::ldexp(x, -j)); }

double DyadicSystem::partition_sum(double x) const { return Phi_j(j_hi_, x) - Phi_j(j_lo_ - 1, x); }

double DyadicSystem::chi(double xi) const { return xi > 0.0 ? Phi(xi / 4.0) - Phi(2.0 * xi) : 0.0; }

double DyadicSystem::lambda(int j) { return std::pow(2.0, -0.5 * j); }
double DyadicSystem::k_lo(int j) { return std::pow(2.0, 0.5 * j - 1.0); }
double DyadicSystem::k_hi(int j) { return std::pow(2.0, 0.5 * j); }

} // namespace scatspec
