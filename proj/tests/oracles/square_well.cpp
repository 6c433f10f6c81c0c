#include "oracles/square_well.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace oracle {

namespace {
using cplx = std::complex<double>;
const cplx I{0, 1};

// f+ at x given f+ = e^{ikx} to the right of the well.
void f_plus(double depth, double width, double center, double k, double x, cplx& f, cplx& fp) {
  const double a = center - width / 2, b = center + width / 2;
  if (x >= b) {
    f = std::exp(I * k * x);
    fp = I * k * f;
    return;
  }
  const cplx q = std::sqrt(cplx(k * k - depth, 0.0));
  const cplx fb = std::exp(I * k * b), fpb = I * k * fb;
  auto inside = [&](double y, cplx& g, cplx& gp) {
    const double d = y - b;
    if (std::abs(q) == 0.0) {
      g = fb + fpb * d;
      gp = fpb;
    } else {
      g = fb * std::cos(q * d) + fpb * std::sin(q * d) / q;
      gp = -fb * q * std::sin(q * d) + fpb * std::cos(q * d);
    }
  };
  if (x >= a) {
    inside(x, f, fp);
    return;
  }
  cplx fa, fpa;
  inside(a, fa, fpa);
  const cplx A = (fpa + I * k * fa) / (2.0 * I * k) * std::exp(-I * k * a);
  const cplx B = (I * k * fa - fpa) / (2.0 * I * k) * std::exp(I * k * a);
  f = A * std::exp(I * k * x) + B * std::exp(-I * k * x);
  fp = I * k * (A * std::exp(I * k * x) - B * std::exp(-I * k * x));
}
} // namespace

std::complex<double> WellScattering::m_plus_at(double x) const {
  cplx f, fp;
  f_plus(depth, width, center, k, x, f, fp);
  return std::exp(-I * k * x) * f;
}

WellScattering square_well_scattering(double depth, double width, double center, double k) {
  WellScattering s{};
  s.depth = depth;
  s.width = width;
  s.center = center;
  s.k = k;
  const double a = center - width / 2;
  cplx f, fp;
  f_plus(depth, width, center, k, a, f, fp);
  const cplx A = (fp + I * k * f) / (2.0 * I * k) * std::exp(-I * k * a);
  const cplx B = (I * k * f - fp) / (2.0 * I * k) * std::exp(I * k * a);
  s.t = 1.0 / A;
  s.r_minus = B / A;
  // Mirror: r+ of V(x) is r- of V(-x).
  f_plus(depth, width, -center, k, -center - width / 2, f, fp);
  const double a2 = -center - width / 2;
  const cplx A2 = (fp + I * k * f) / (2.0 * I * k) * std::exp(-I * k * a2);
  const cplx B2 = (I * k * f - fp) / (2.0 * I * k) * std::exp(I * k * a2);
  s.r_plus = B2 / A2;
  return s;
}

std::vector<double> square_well_bound_states(double depth, double width) {
  std::vector<double> out;
  const double v0 = -depth, a = width / 2;
  if (!(v0 > 0)) return out;
  const double qmax = std::sqrt(v0);
  // Even: q tan(qa) = κ ; odd: -q cot(qa) = κ.
  auto even = [&](double q) { return q * std::sin(q * a) - std::sqrt(v0 - q * q) * std::cos(q * a); };
  auto odd = [&](double q) { return -q * std::cos(q * a) - std::sqrt(v0 - q * q) * std::sin(q * a); };
  const int n = 200000;
  for (const std::function<double(double)>& g : {std::function<double(double)>(even), std::function<double(double)>(odd)}) {
    // q = 0 is a trivial root of the odd condition, so the scan starts one cell in
    double prev = g(qmax / n);
    for (int i = 2; i <= n; ++i) {
      const double q = qmax * i / n;
      const double cur = g(q);
      if ((prev < 0) != (cur < 0) && cur != 0.0) {
        double lo = qmax * (i - 1) / n, hi = q;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          ((g(mid) < 0) == (g(lo) < 0) ? lo : hi) = mid;
        }
        const double qq = 0.5 * (lo + hi);
        if (qq < qmax * (1 - 1e-12)) out.push_back(qq * qq - v0);
      }
      prev = cur;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace oracle
