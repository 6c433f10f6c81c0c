#include "scatspec/hoermander.hpp"

#include "scatspec/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

namespace scatspec {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

double sobolev_norm(const std::vector<cplx>& g, double dxi, double s) {
  const std::size_t n = g.size();
  if (n == 0) return 0.0;
  if (!(dxi > 0.0)) fail(ErrorCode::invalid_argument, "sobolev_norm: step must be positive");
  std::vector<cplx> in(g), out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  const double L = dxi * static_cast<double>(n);
  const double dw = 2.0 * std::numbers::pi / L;
  double acc = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double mm = m <= n / 2 ? static_cast<double>(m) : static_cast<double>(m) - static_cast<double>(n);
    const double w = mm * dw;
    acc += std::pow(1.0 + w * w, s) * std::norm(out[m] * dxi);
  }
  return std::sqrt(acc * dw / (2.0 * std::numbers::pi));
}

HoermanderResult hoermander_norm(const Multiplier& mu, const HoermanderOptions& opt) {
  if (!(opt.s > 0.5)) fail(ErrorCode::invalid_argument, "hoermander_norm: need s > 1/2");
  if (!(opt.period >= 8.0)) fail(ErrorCode::invalid_argument, "hoermander_norm: period must cover supp χ");
  const DyadicSystem d(0, 1, opt.profile);
  std::vector<double> ts = opt.t_grid;
  if (ts.empty())
    for (int m = -10; m <= 10; ++m) ts.push_back(std::ldexp(1.0, m));
  const double dxi = opt.period / static_cast<double>(opt.samples);
  std::vector<double> chi(opt.samples);
  std::vector<cplx> g(opt.samples);
  for (std::size_t i = 0; i < opt.samples; ++i) {
    chi[i] = d.chi(static_cast<double>(i) * dxi);
    g[i] = chi[i];
  }
  HoermanderResult r;
  r.chi_norm = sobolev_norm(g, dxi, opt.s);
  r.inf = INFINITY;
  for (double t : ts) {
    if (!(t > 0.0)) fail(ErrorCode::invalid_argument, "hoermander_norm: t must be positive");
    for (std::size_t i = 0; i < opt.samples; ++i) {
      g[i] = chi[i] != 0.0 ? mu(t * static_cast<double>(i) * dxi) * chi[i] : cplx{};
      r.sup_abs = std::max(r.sup_abs, std::abs(g[i]));
    }
    const double v = sobolev_norm(g, dxi, opt.s);
    r.t.push_back(t);
    r.values.push_back(v);
    r.norm = std::max(r.norm, v);
    r.inf = std::min(r.inf, v);
  }
  return r;
}

} // namespace scatspec
