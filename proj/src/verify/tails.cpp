#include "scatspec/verify/tails.hpp"

#include "scatspec/error.hpp"
#include "scatspec/hoermander.hpp"

#include <chrono>
#include <cmath>

namespace scatspec {

EstimateReport check_kernel_tail_L1(const Multiplier& mu, const Potential& v, double cube_center, int j_I, int j_lo,
                                    int j_hi, const KernelTailOptions& opt) {
  if (j_lo > j_hi) fail(ErrorCode::invalid_argument, "check_kernel_tail_L1: empty j range");
  if (opt.y_samples < 1) fail(ErrorCode::invalid_argument, "check_kernel_tail_L1: need y samples");
  const auto start = std::chrono::steady_clock::now();
  const double t = std::pow(2.0, -0.5 * j_I);
  const DyadicSystem d(std::min(j_lo, j_I) - 1, std::max(j_hi, j_I) + 1, opt.profile);
  std::vector<double> ys;
  for (int i = 0; i < opt.y_samples; ++i)
    ys.push_back(opt.y_samples == 1 ? cube_center
                                    : cube_center - 0.5 * t + t * i / static_cast<double>(opt.y_samples - 1));

  EstimateReport r;
  r.id = "tails_" + mu.describe();
  r.index_name = "log2_scaled_t";
  r.extra_names = {"j", "max_abs"};
  bool vanish = true;
  double total = 0.0;
  std::vector<double> fx, fy;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double scale = std::pow(2.0, -0.5 * j);
    const double dx = std::min(scale, t) / opt.cells_per_scale;
    const double outer = 2.0 * t + opt.reach * scale;
    const auto n = static_cast<long>(std::ceil(outer / dx));
    std::vector<double> xs;
    for (long i = -n; i <= n; ++i) xs.push_back(cube_center + static_cast<double>(i) * dx);
    const OperatorKernel K = assemble_kernel(v, mu, d, Block{BlockKind::phi_cut, j, j_I}, xs, ys, opt.kernel);
    double sup = 0.0, amax = 0.0;
    for (std::size_t c = 0; c < ys.size(); ++c) {
      double acc = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const double a = std::abs(K.values(i, c));
        amax = std::max(amax, a);
        if (std::abs(xs[i] - cube_center) < 2.0 * t) continue;
        const bool edge = i == 0 || i + 1 == xs.size();
        acc += (edge ? 0.5 : 1.0) * a;
      }
      sup = std::max(sup, acc * dx);
    }
    const double lx = 0.5 * j + std::log2(t);
    if (j <= j_I - 1) {
      vanish = vanish && amax == 0.0;
    } else {
      fx.push_back(lx);
      fy.push_back(std::log2(sup));
    }
    total += sup;
    r.add_row(lx, sup, NAN, {static_cast<double>(j), amax});
  }
  const double claimed = 0.5 - opt.s;
  if (fx.size() >= 2) {
    const auto [sl, ic] = fit_line(fx, fy);
    r.slope = sl;
    r.intercept = ic;
  }
  // ratio against the claimed power with the constant fixed at the first nonzero row
  double c0 = NAN;
  for (std::size_t i = 0; i < r.index.size(); ++i) {
    if (r.extra[0][i] <= j_I - 1) {
      r.ratio[i] = 0.0;
      continue;
    }
    const double model = std::pow(2.0, claimed * r.index[i]);
    if (std::isnan(c0)) c0 = r.value[i] / model;
    r.ratio[i] = r.value[i] / (c0 * model);
  }
  if (opt.assert_slope) {
    r.claimed_slope = claimed;
    r.slope_tol = opt.slope_tol;
    r.slope_is_upper_bound = true;
  }
  r.metrics["claimed_power"] = claimed;
  r.checks["vanishing_below_jI"] = vanish;
  const double hn = hoermander_norm(mu).norm;
  r.metrics["j_sum"] = total;
  r.metrics["hoermander_norm"] = hn;
  r.metrics["sum_constant"] = total / hn;
  r.metrics["t"] = t;
  r.finalize();
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace scatspec
