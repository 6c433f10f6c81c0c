#include "scatspec/apply.hpp"

#include "scatspec/error.hpp"
#include "spectral_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace scatspec {

namespace {

double uniform_step(const std::vector<double>& x) {
  if (x.size() < 2) fail(ErrorCode::invalid_argument, "apply: need at least two x nodes");
  const double h = x[1] - x[0];
  if (!(h > 0.0)) fail(ErrorCode::invalid_argument, "apply: x must increase");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (std::abs(x[i] - x[i - 1] - h) > 1e-9 * h) fail(ErrorCode::invalid_argument, "apply: x must be uniform");
  return h;
}

} // namespace

double l2_norm(const std::vector<double>& x, const std::vector<cplx>& f) {
  const double h = uniform_step(x);
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += ((i == 0 || i + 1 == f.size()) ? 0.5 : 1.0) * std::norm(f[i]);
  return std::sqrt(acc * h);
}

std::vector<Block> window_blocks(const ApplyOptions& opt) {
  if (!(opt.j_lo <= opt.j_hi)) fail(ErrorCode::invalid_argument, "apply: need j_lo <= j_hi");
  std::vector<Block> b;
  if (opt.low_block) b.push_back({BlockKind::Phi, opt.j_lo - 1, 0});
  for (int j = opt.j_lo; j <= opt.j_hi; ++j) b.push_back({BlockKind::phi, j, 0});
  return b;
}

std::vector<std::vector<std::vector<std::vector<cplx>>>>
apply_blocks(const std::vector<Multiplier>& mus, const std::vector<Block>& blocks, const Potential& v,
             const std::vector<double>& x, const std::vector<std::vector<cplx>>& fs, bool with_pp,
             const DyadicSystem& d, const KernelOptions& opt) {
  const double h = uniform_step(x);
  const std::size_t nx = x.size();
  for (const auto& f : fs)
    if (f.size() != nx) fail(ErrorCode::invalid_argument, "apply: f and x sizes differ");
  std::vector<double> w(nx, h);
  w.front() = w.back() = 0.5 * h;
  using Out = std::vector<std::vector<std::vector<std::vector<cplx>>>>;
  Out out(mus.size(), std::vector<std::vector<std::vector<cplx>>>(
                          blocks.size(), std::vector<std::vector<cplx>>(fs.size(), std::vector<cplx>(nx))));
  if (blocks.empty() || fs.empty()) return out;

  // Each block is integrated on its own λ grid, so a narrow low block does not
  // force its fine step onto the wide high blocks.
  const double delta = effective_delta(v, x, x);
  std::vector<cplx> gp(fs.size()), gm(fs.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const KernelQuadrature q = kernel_quadrature(blocks[b], delta, opt);
    if (!std::isfinite(q.step)) continue;
    std::vector<double> active;
    std::vector<double> aw;
    for (std::size_t i = 0; i < q.lambda.size(); ++i) {
      const double wb = blocks[b].weight(d, q.lambda[i] * q.lambda[i]);
      if (wb == 0.0 || q.weight[i] == 0.0) continue;
      active.push_back(q.lambda[i]);
      aw.push_back(q.weight[i] * wb / (2.0 * std::numbers::pi));
    }
    detail::sweep_lambda(v, active, x, opt.jost, opt.chunk, [&](std::size_t a, const detail::LambdaSlice& s) {
      const double e = s.lambda * s.lambda;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        cplx p{}, m{};
        for (std::size_t k = 0; k < nx; ++k) {
          p += w[k] * s.f_minus[k] * fs[i][k];
          m += w[k] * std::conj(s.f_minus[k]) * fs[i][k];
        }
        gp[i] = p;
        gm[i] = m;
      }
      for (std::size_t m = 0; m < mus.size(); ++m) {
        const cplx c = aw[a] * mus[m](e);
        for (std::size_t i = 0; i < fs.size(); ++i) {
          auto& o = out[m][b][i];
          const cplx cp = c * s.t * gp[i], cm = c * std::conj(s.t) * gm[i];
          for (std::size_t k = 0; k < nx; ++k) o[k] += cp * s.f_plus[k] + cm * std::conj(s.f_plus[k]);
        }
      }
    });
  }

  if (with_pp) {
    const BoundStateSet bs = bound_states(v, opt.eig_tol);
    for (std::size_t st = 0; st < bs.count(); ++st) {
      std::vector<double> u(nx);
      for (std::size_t k = 0; k < nx; ++k) u[k] = bs.value(st, x[k]);
      const double e = bs.states[st].energy;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        cplx proj{};
        for (std::size_t k = 0; k < nx; ++k) proj += w[k] * u[k] * fs[i][k];
        for (std::size_t b = 0; b < blocks.size(); ++b) {
          const double wb = blocks[b].weight(d, e);
          if (wb == 0.0) continue;
          for (std::size_t m = 0; m < mus.size(); ++m) {
            const cplx c = wb * mus[m](e) * proj;
            for (std::size_t k = 0; k < nx; ++k) out[m][b][i][k] += c * u[k];
          }
        }
      }
    }
  }
  return out;
}

ApplyResult apply_multiplier(const Multiplier& mu, const Potential& v, const std::vector<double>& x,
                             const std::vector<cplx>& f, const ApplyOptions& opt) {
  const DyadicSystem d(std::min(opt.j_lo - 1, opt.j_hi - 1), opt.j_hi, opt.profile);
  const auto blocks = window_blocks(opt);
  ApplyResult r;
  r.x = x;
  r.ac.assign(x.size(), cplx{});
  r.pp.assign(x.size(), cplx{});
  const auto ac = apply_blocks({mu}, blocks, v, x, {f}, false, d, opt.kernel);
  // Fixed block order for a reproducible sum.
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (std::size_t k = 0; k < x.size(); ++k) r.ac[k] += ac[0][b][0][k];
  if (opt.include_pp) {
    const BoundStateSet bs = bound_states(v, opt.kernel.eig_tol);
    const double h = uniform_step(x);
    for (std::size_t st = 0; st < bs.count(); ++st) {
      const double e = bs.states[st].energy;
      const cplx me = mu(e);
      if (!std::isfinite(me.real()) || !std::isfinite(me.imag()))
        fail(ErrorCode::domain_error, "multiplier is not finite at the eigenvalue " + std::to_string(e));
      std::vector<double> u(x.size());
      cplx proj{};
      for (std::size_t k = 0; k < x.size(); ++k) {
        u[k] = bs.value(st, x[k]);
        proj += ((k == 0 || k + 1 == x.size()) ? 0.5 : 1.0) * h * u[k] * f[k];
      }
      for (std::size_t k = 0; k < x.size(); ++k) r.pp[k] += me * proj * u[k];
    }
  }
  r.value.resize(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) r.value[k] = r.ac[k] + r.pp[k];
  const double delta = effective_delta(v, x, x);
  double step = INFINITY;
  for (const auto& b : blocks) {
    const auto q = kernel_quadrature(b, delta, opt.kernel);
    step = std::min(step, q.step);
    if (std::isfinite(q.step)) r.lambda_points += q.lambda.size();
  }
  r.lambda_step = step;
  return r;
}

double completeness_error(const Potential& v, const std::vector<double>& x, const std::vector<cplx>& f,
                          const ApplyOptions& opt) {
  ApplyOptions o = opt;
  o.include_pp = true;
  const ApplyResult r = apply_multiplier(Multiplier::identity(), v, x, f, o);
  std::vector<cplx> diff(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) diff[k] = f[k] - r.value[k];
  return l2_norm(x, diff);
}

} // namespace scatspec
