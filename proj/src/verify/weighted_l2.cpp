#include "scatspec/verify/weighted_l2.hpp"

#include "scatspec/error.hpp"
#include "scatspec/hoermander.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

namespace scatspec {

namespace {

std::string s_label(double s) {
  std::ostringstream o;
  o << s;
  return o.str();
}

}  // namespace

double phi_sobolev_norm(BumpProfile profile, double s) {
  const DyadicSystem d(0, 1, profile);
  const std::size_t n = 8192;
  const double L = 8.0, dx = L / static_cast<double>(n);
  std::vector<cplx> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = static_cast<double>(i) * dx;
    if (x >= L / 2) x -= L;
    g[i] = d.phi(x);
  }
  return sobolev_norm(g, dx, s);
}

std::vector<EstimateReport> check_weighted_L2(const Potential& v, const std::vector<double>& s_values, int j_lo,
                                              int j_hi, const WeightedL2Options& opt) {
  if (j_lo > j_hi) fail(ErrorCode::invalid_argument, "check_weighted_L2: empty j range");
  for (double s : s_values)
    if (!(s >= 0.0 && s <= 1.0)) fail(ErrorCode::invalid_argument, "check_weighted_L2: s must lie in [0, 1]");
  const auto start = std::chrono::steady_clock::now();
  const DyadicSystem d(j_lo, j_hi + 1, opt.profile);
  double ymax = 0.0;
  for (double y : opt.y_set) ymax = std::max(ymax, std::abs(y));
  std::vector<EstimateReport> reps(s_values.size());
  std::vector<double> phin(s_values.size());
  for (std::size_t si = 0; si < s_values.size(); ++si) {
    auto& r = reps[si];
    r.id = "wl2_s" + s_label(s_values[si]);
    r.extra_names = {"kappa_local"};
    phin[si] = phi_sobolev_norm(opt.profile, s_values[si]);
    r.metrics["s"] = s_values[si];
    r.metrics["phi_norm"] = phin[si];
  }
  for (int j = j_lo; j <= j_hi; ++j) {
    const double scale = std::pow(2.0, -0.5 * j);
    const double dx = opt.dx_fraction * scale;
    const double R = opt.radius_factor * scale;
    const auto nx = static_cast<long>(std::ceil((ymax + R) / dx));
    std::vector<double> x;
    for (long i = -nx; i <= nx; ++i) x.push_back(static_cast<double>(i) * dx);
    const OperatorKernel K =
        assemble_kernel(v, Multiplier::identity(), d, Block{BlockKind::phi, j, 0}, x, opt.y_set, opt.kernel);
    for (std::size_t si = 0; si < s_values.size(); ++si) {
      const double s = s_values[si];
      double sup = 0.0;
      for (std::size_t c = 0; c < opt.y_set.size(); ++c) {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          const double u = std::abs(x[i] - opt.y_set[c]);
          const double w = s == 0.0 ? 1.0 : std::pow(u, 2.0 * s);
          acc += ((i == 0 || i + 1 == x.size()) ? 0.5 : 1.0) * w * std::norm(K.values(i, c));
        }
        sup = std::max(sup, std::sqrt(acc * dx));
      }
      const double target = std::pow(DyadicSystem::lambda(j), s - 0.5) * phin[si];
      reps[si].add_row(j, sup, sup / target, {NAN});
    }
  }
  for (std::size_t si = 0; si < s_values.size(); ++si) {
    auto& r = reps[si];
    r.fit_log2_slope();
    r.slope = -r.slope;  // κ
    r.intercept = -r.intercept;
    for (std::size_t i = 0; i + 1 < r.index.size(); ++i)
      r.extra[0][i] = -std::log2(r.value[i + 1] / r.value[i]) / (r.index[i + 1] - r.index[i]);
    if (opt.assert_slope) {
      r.claimed_slope = (2.0 * s_values[si] - 1.0) / 4.0;
      r.slope_tol = opt.slope_tol;
    }
    r.metrics["kappa"] = r.slope;
    r.finalize();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& r : reps) r.runtime = secs;
  return reps;
}

EstimateReport interpolation_check(const EstimateReport& r0, const EstimateReport& r1, const EstimateReport& rs,
                                   double s0, double s1, double s) {
  if (!(s0 < s && s < s1)) fail(ErrorCode::invalid_argument, "interpolation_check: need s0 < s < s1");
  if (r0.index != rs.index || r1.index != rs.index)
    fail(ErrorCode::inconsistency, "interpolation_check: reports cover different j");
  const double th = (s - s0) / (s1 - s0);
  EstimateReport r;
  r.id = "wl2_interpolation_s" + s_label(s);
  r.extra_names = {"N_s0", "N_s1"};
  bool contained = true;
  for (std::size_t i = 0; i < rs.index.size(); ++i) {
    const double env = std::pow(r0.value[i], 1.0 - th) * std::pow(r1.value[i], th);
    const double q = rs.value[i] / env;
    r.add_row(rs.index[i], rs.value[i], q, {r0.value[i], r1.value[i]});
    contained = contained && q <= 1.0 + 1e-6;
  }
  const double klo = std::min(r0.slope, r1.slope), khi = std::max(r0.slope, r1.slope);
  r.checks["holder_envelope"] = contained;
  r.checks["kappa_between"] = rs.slope >= klo - 1e-9 && rs.slope <= khi + 1e-9;
  r.checks["finite_ratio"] = std::isfinite(rs.sup_ratio);
  r.metrics["kappa_s"] = rs.slope;
  r.metrics["kappa_s0"] = r0.slope;
  r.metrics["kappa_s1"] = r1.slope;
  r.slope = rs.slope;
  r.finalize();
  return r;
}

} // namespace scatspec
