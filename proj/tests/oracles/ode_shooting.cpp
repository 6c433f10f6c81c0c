#include "oracles/ode_shooting.hpp"

#include <algorithm>
#include <cmath>

namespace oracle {

namespace {

struct State {
  cplx f, fp;
};

std::vector<double> breakpoints(const scatspec::AnalyticForm& form) {
  std::vector<double> b;
  const double r = form.truncation_radius;
  if (std::isfinite(r) && r > 0) {
    b.push_back(-r);
    b.push_back(r);
  }
  if (form.tag == scatspec::PotentialTag::square_well) {
    const double c = form.params.at("center"), w = form.params.at("width");
    b.push_back(c - w / 2);
    b.push_back(c + w / 2);
  }
  return b;
}

State integrate(const scatspec::AnalyticForm& form, State s, double from, double to, double k) {
  auto bps = breakpoints(form);
  std::vector<double> stops{from};
  for (double p : bps)
    if ((p - from) * (p - to) < 0) stops.push_back(p);
  stops.push_back(to);
  if (to < from)
    std::sort(stops.begin(), stops.end(), std::greater<>());
  else
    std::sort(stops.begin(), stops.end());
  const double k2 = k * k;
  for (std::size_t seg = 0; seg + 1 < stops.size(); ++seg) {
    const double a = stops[seg], b = stops[seg + 1];
    const double len = std::abs(b - a);
    if (len == 0) continue;
    const double target = std::min(2e-3, 0.015 / std::max(1.0, std::abs(k)));
    const int n = std::max(1, static_cast<int>(std::ceil(len / target)));
    const double h = (b - a) / n;
    // Sample V strictly inside the segment so edge conventions do not matter.
    auto V = [&](double x) {
      const double lo = std::min(a, b), hi = std::max(a, b);
      const double eps = 1e-9 * std::max(1.0, std::abs(x));
      return form.evaluate(std::clamp(x, lo + eps, hi - eps));
    };
    double x = a;
    for (int i = 0; i < n; ++i) {
      auto rhs = [&](double xx, const State& y) { return State{y.fp, (V(xx) - k2) * y.f}; };
      const State k1 = rhs(x, s);
      const State k2s = rhs(x + h / 2, {s.f + h / 2 * k1.f, s.fp + h / 2 * k1.fp});
      const State k3 = rhs(x + h / 2, {s.f + h / 2 * k2s.f, s.fp + h / 2 * k2s.fp});
      const State k4 = rhs(x + h, {s.f + h * k3.f, s.fp + h * k3.fp});
      s.f += h / 6 * (k1.f + 2.0 * k2s.f + 2.0 * k3.f + k4.f);
      s.fp += h / 6 * (k1.fp + 2.0 * k2s.fp + 2.0 * k3.fp + k4.fp);
      x = a + (i + 1) * h;
    }
  }
  return s;
}

} // namespace

ShootingResult shoot(const scatspec::AnalyticForm& form, double reach, double x, double k) {
  const cplx I{0, 1};
  ShootingResult r;
  const double R = std::max(reach, std::abs(x) + 1.0);
  // f+ ~ e^{ikx} on the right.
  State sp{std::exp(I * k * R), I * k * std::exp(I * k * R)};
  const State at_x_p = integrate(form, sp, R, x, k);
  r.m_plus = std::exp(-I * k * x) * at_x_p.f;
  State sm{std::exp(I * k * R), -I * k * std::exp(I * k * R)};  // e^{-ik(-R)}
  const State at_x_m = integrate(form, sm, -R, x, k);
  r.m_minus = std::exp(I * k * x) * at_x_m.f;
  if (k != 0.0) {
    const State left = integrate(form, at_x_p, x, -R, k);
    const cplx A = (left.fp + I * k * left.f) / (2.0 * I * k) * std::exp(I * k * R);
    const cplx B = (I * k * left.f - left.fp) / (2.0 * I * k) * std::exp(-I * k * R);
    r.t = 1.0 / A;
    r.r_minus = B / A;
    const State right = integrate(form, at_x_m, x, R, k);
    const cplx A2 = (I * k * right.f - right.fp) / (2.0 * I * k) * std::exp(I * k * R);
    const cplx B2 = (right.fp + I * k * right.f) / (2.0 * I * k) * std::exp(-I * k * R);
    r.r_plus = B2 / A2;
  }
  return r;
}

} // namespace oracle
