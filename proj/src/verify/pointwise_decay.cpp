#include "scatspec/verify/pointwise_decay.hpp"

#include "scatspec/error.hpp"
#include "scatspec/marchenko.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <set>

namespace scatspec {
namespace {

double rho(double a, double eps, double u) { return a * std::pow(1.0 + a * std::abs(u), -1.0 - eps); }

std::vector<double> eval_grid(int j, double refine, bool fixed, const PointwiseDecayOptions& opt) {
  const double scale = std::pow(2.0, -0.5 * j);
  std::set<double> pts;
  const double du = opt.u_step / refine;
  const double df = std::min(opt.fixed_step, 2.0 * opt.u_step * scale) / refine;
  const long nu = std::lround(opt.u_max / du), nf = std::lround(opt.fixed_half / df);
  for (long i = -nu; i <= nu; ++i) pts.insert(static_cast<double>(i) * du * scale);
  if (fixed)
    for (long i = -nf; i <= nf; ++i) pts.insert(static_cast<double>(i) * df);
  return {pts.begin(), pts.end()};
}

Potential refined_potential(const Potential& v) {
  if (v.is_zero()) return v;
  if (!v.analytic()) fail(ErrorCode::precondition, "pointwise decay refinement needs a closed-form potential");
  const auto& g = v.grid();
  const UniformGrid fine{g.x_min, g.step / 2.0, 2 * g.count - 1};
  return reference_potential(v.analytic()->tag, v.analytic()->params, fine);
}

struct Sample {
  double k;
  double e1, e2;  // envelope bases: R-terms and (R ∗ tail)-terms
};

struct Level {
  std::map<int, std::vector<Sample>> samples;
  std::map<int, double> sup_abs;
};

class ConvCache {
public:
  explicit ConvCache(double eps) : eps_(eps) {}
  double operator()(double a, double u) {
    const auto key = std::make_pair(a, std::abs(u));
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    const double v = rho_tail_convolution(a, eps_, u);
    memo_.emplace(key, v);
    return v;
  }

private:
  double eps_;
  std::map<std::pair<double, double>, double> memo_;
};

Level compute_level(const Potential& v, int j_lo, int j_hi, int j0, double refine, const PointwiseDecayOptions& opt) {
  const bool free = v.is_zero();
  const DyadicSystem d(std::min(j_lo, j0) - 1, std::max(j_hi, j0) + 1, opt.profile);
  KernelOptions kopt = opt.kernel;
  kopt.part = KernelPart::ac;
  kopt.points_per_period *= refine;
  kopt.min_points = static_cast<std::size_t>(static_cast<double>(kopt.min_points) * refine);
  ConvCache conv(opt.epsilon);
  const double a0 = 1.0;
  Level out;
  for (int j = j_lo; j <= j_hi; ++j) {
    const auto pts = eval_grid(j, refine, !free, opt);
    const bool high = !free && j >= j0;
    const Block blk{BlockKind::Phi, j, 0};
    const OperatorKernel K = assemble_kernel(v, Multiplier::identity(), d, blk, pts, pts, kopt);
    const double a = std::pow(2.0, 0.5 * j);
    auto& rows = out.samples[j];
    double sup = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t c = 0; c < pts.size(); ++c) {
        const double kv = std::abs(K.values(i, c));
        sup = std::max(sup, kv);
        const double um = pts[i] - pts[c], up = pts[i] + pts[c];
        Sample s{kv, 0.0, 0.0};
        if (free) {
          s.e1 = a * std::pow(1.0 + a * std::abs(um), -static_cast<double>(opt.free_order));
        } else {
          s.e1 = rho(a, opt.epsilon, um) + rho(a, opt.epsilon, up);
          s.e2 = conv(a, um) + conv(a, up);
          if (high) {
            s.e1 += rho(a0, opt.epsilon, um) + rho(a0, opt.epsilon, up);
            s.e2 += conv(a0, um) + conv(a0, up);
          }
        }
        rows.push_back(s);
      }
    out.sup_abs[j] = sup;
  }
  return out;
}

//! Nonnegative relative least squares of k ≈ c1 e1 + c2 e2 over the significant samples,
//! then scaled so that the sup ratio is exactly 1.
DecayEnvelope fit_envelope(const std::vector<Sample>& rows, int ref_j) {
  double kmax = 0.0;
  for (const auto& s : rows) kmax = std::max(kmax, s.k);
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (const auto& s : rows) {
    if (s.k < 1e-3 * kmax) continue;
    const double p = s.e1 / s.k, q = s.e2 / s.k;
    a11 += p * p;
    a12 += p * q;
    a22 += q * q;
    b1 += p;
    b2 += q;
  }
  auto residual = [&](double c1, double c2) {
    return a11 * c1 * c1 + 2 * a12 * c1 * c2 + a22 * c2 * c2 - 2 * (b1 * c1 + b2 * c2);
  };
  DecayEnvelope best{0.0, 0.0, ref_j};
  double best_r = INFINITY;
  auto consider = [&](double c1, double c2) {
    if (c1 < 0 || c2 < 0 || !std::isfinite(c1) || !std::isfinite(c2) || c1 + c2 == 0) return;
    const double r = residual(c1, c2);
    if (r < best_r) {
      best_r = r;
      best = {c1, c2, ref_j};
    }
  };
  const double det = a11 * a22 - a12 * a12;
  if (det > 0) consider((b1 * a22 - b2 * a12) / det, (a11 * b2 - a12 * b1) / det);
  if (a11 > 0) consider(b1 / a11, 0.0);
  if (a22 > 0) consider(0.0, b2 / a22);
  if (!std::isfinite(best_r)) best = {1.0, 0.0, ref_j};
  double sup = 0.0;
  for (const auto& s : rows) sup = std::max(sup, s.k / (best.c_delta * s.e1 + best.c_tail * s.e2));
  if (sup > 0 && std::isfinite(sup)) {
    best.c_delta *= sup;
    best.c_tail *= sup;
  }
  return best;
}

double sup_ratio(const std::vector<Sample>& rows, const DecayEnvelope& e) {
  double sup = 0.0;
  for (const auto& s : rows) sup = std::max(sup, s.k / (e.c_delta * s.e1 + e.c_tail * s.e2));
  return sup;
}

struct LevelRatios {
  std::map<int, double> ratio;
  std::map<int, int> regime;
  DecayEnvelope low, high;
};

//! Envelopes are fitted on `lv` unless `fitted` supplies them.
LevelRatios ratios(const Level& lv, int j_lo, int j_hi, int j0, bool free, const LevelRatios* fitted = nullptr) {
  LevelRatios out;
  if (fitted) {
    out.low = fitted->low;
    out.high = fitted->high;
  } else {
    const int low_ref = free ? std::clamp(0, j_lo, j_hi) : std::clamp(0, j_lo, std::min(j_hi, j0 - 1));
    out.low = fit_envelope(lv.samples.at(low_ref), low_ref);
    if (!free && j_hi >= j0) out.high = fit_envelope(lv.samples.at(std::max(j0, j_lo)), std::max(j0, j_lo));
  }
  for (int j = j_lo; j <= j_hi; ++j) {
    const bool high = !free && j >= j0;
    out.regime[j] = free ? 2 : (high ? 1 : 0);
    out.ratio[j] = sup_ratio(lv.samples.at(j), high ? out.high : out.low);
  }
  return out;
}

} // namespace

double rho_tail_convolution(double a, double epsilon, double u) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double w) { return rho(a, epsilon, u - w) / ((1.0 + std::abs(w)) * (1.0 + std::abs(w))); };
  const double lo = std::min(0.0, u), hi = std::max(0.0, u);
  std::vector<double> br = {lo - 1.0 / a, lo - 1.0, lo, hi, hi + 1.0, hi + 1.0 / a};
  for (double w = lo; w < hi; w += std::max(1.0 / a, 1.0)) br.push_back(w);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  double acc = gauss_kronrod<double, 61>::integrate(f, -std::numeric_limits<double>::infinity(), br.front(), 12, 1e-11);
  for (std::size_t i = 0; i + 1 < br.size(); ++i)
    acc += gauss_kronrod<double, 61>::integrate(f, br[i], br[i + 1], 12, 1e-11);
  acc += gauss_kronrod<double, 61>::integrate(f, br.back(), std::numeric_limits<double>::infinity(), 12, 1e-11);
  return acc;
}

EstimateReport check_pointwise_decay(const Potential& v, int j_lo, int j_hi, const PointwiseDecayOptions& opt) {
  if (j_lo > j_hi) fail(ErrorCode::invalid_argument, "check_pointwise_decay: empty j range");
  if (!(opt.epsilon > 0.0 && opt.epsilon <= 1.0))
    fail(ErrorCode::invalid_argument, "check_pointwise_decay: epsilon must lie in (0, 1]");
  const auto start = std::chrono::steady_clock::now();
  const bool free = v.is_zero();
  int j0 = opt.j0;
  double k0 = NAN;
  if (!free && j0 == INT_MIN) {
    const MarchenkoKernel mk = solve_marchenko(v);
    k0 = born_threshold(mk);
    j0 = j0_from_threshold(k0, std::abs(mk.nu0) + density_b(mk).l1);
  }
  if (free) j0 = j_hi + 1;

  EstimateReport r;
  r.id = free ? "decay_free" : "decay";
  r.extra_names = {"regime", "ratio_refined", "drift"};
  r.ratio_bound = opt.bound;
  r.metrics["j0"] = j0;
  r.metrics["epsilon"] = opt.epsilon;
  if (std::isfinite(k0)) r.metrics["k0"] = k0;

  const Level l1 = compute_level(v, j_lo, j_hi, j0, 1.0, opt);
  const LevelRatios q1 = ratios(l1, j_lo, j_hi, j0, free);
  LevelRatios q2;
  if (opt.refine) {
    const Potential vf = refined_potential(v);
    const Level l2 = compute_level(vf, j_lo, j_hi, j0, 2.0, opt);
    q2 = ratios(l2, j_lo, j_hi, j0, free, &q1);
  }
  bool stable = true;
  double max_drift = 0.0;
  for (int j = j_lo; j <= j_hi; ++j) {
    const double a = q1.ratio.at(j);
    const double b = opt.refine ? q2.ratio.at(j) : NAN;
    const double drift = opt.refine ? std::abs(b / a - 1.0) : 0.0;
    max_drift = std::max(max_drift, drift);
    stable = stable && drift < opt.refine_tol;
    r.add_row(j, l1.sup_abs.at(j), a, {static_cast<double>(q1.regime.at(j)), b, drift});
  }
  if (opt.refine) r.checks["refinement_stable"] = stable;
  r.metrics["max_drift"] = max_drift;
  r.metrics["c_delta_low"] = q1.low.c_delta;
  r.metrics["c_tail_low"] = q1.low.c_tail;
  r.metrics["ref_j_low"] = q1.low.ref_j;
  if (!free && j_hi >= j0) {
    r.metrics["c_delta_high"] = q1.high.c_delta;
    r.metrics["c_tail_high"] = q1.high.c_tail;
    r.metrics["ref_j_high"] = q1.high.ref_j;
  }
  r.finalize();
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace scatspec
