#include "scatspec/kernel.hpp"

#include "scatspec/error.hpp"
#include "spectral_sweep.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>

namespace scatspec {

double Block::weight(const DyadicSystem& d, double e) const {
  switch (kind) {
  case BlockKind::phi: return d.phi_j(j, e);
  case BlockKind::Phi: return d.Phi_j(j, e);
  case BlockKind::high_cut: return (1.0 - d.Phi_j(j_cut, e)) * d.Phi_j(j, e);
  case BlockKind::phi_cut: return (1.0 - d.Phi_j(j_cut, e)) * d.phi_j(j, e);
  }
  return 0.0;
}

std::pair<double, double> Block::k_support() const {
  const double hi = DyadicSystem::k_hi(j);
  switch (kind) {
  case BlockKind::phi: return {DyadicSystem::k_lo(j), hi};
  case BlockKind::Phi: return {0.0, hi};
  case BlockKind::high_cut: return {std::min(hi, std::pow(2.0, 0.5 * (j_cut - 1))), hi};
  case BlockKind::phi_cut:
    return {std::min(hi, std::max(DyadicSystem::k_lo(j), std::pow(2.0, 0.5 * (j_cut - 1)))), hi};
  }
  return {0.0, hi};
}

std::string Block::name() const {
  switch (kind) {
  case BlockKind::phi: return "phi_" + std::to_string(j);
  case BlockKind::Phi: return "Phi_" + std::to_string(j);
  case BlockKind::high_cut: return "Phi_" + std::to_string(j) + "_cut_" + std::to_string(j_cut);
  case BlockKind::phi_cut: return "phi_" + std::to_string(j) + "_cut_" + std::to_string(j_cut);
  }
  return "?";
}

double effective_delta(const Potential& v, const std::vector<double>& x, const std::vector<double>& y) {
  double ax = 0.0, ay = 0.0;
  for (double a : x) ax = std::max(ax, std::abs(a));
  for (double a : y) ay = std::max(ay, std::abs(a));
  double diam = 0.0;
  if (auto s = v.support_indices()) diam = v.grid().x(s->second) - v.grid().x(s->first);
  return ax + ay + diam;
}

KernelQuadrature kernel_quadrature(const Block& block, double delta_eff, const KernelOptions& opt) {
  if (!(opt.points_per_period > 0.0)) fail(ErrorCode::invalid_argument, "points_per_period must be positive");
  KernelQuadrature q;
  q.delta_eff = std::max(delta_eff, 1e-12);
  q.required_step = 2.0 * std::numbers::pi / (opt.points_per_period * q.delta_eff);
  const auto [a, b] = block.k_support();
  const double len = b - a;
  if (!(len > 0.0)) {
    q.step = INFINITY;
    q.lambda = {a};
    q.weight = {0.0};
    return q;
  }
  auto n = static_cast<std::size_t>(std::ceil(len / q.required_step - 1e-9));
  n = std::max(n, opt.min_points > 0 ? opt.min_points - 1 : std::size_t{1});
  if (block.contains_zero()) n *= 2;
  q.step = len / static_cast<double>(n);
  q.lambda.resize(n + 1);
  q.weight.assign(n + 1, q.step);
  for (std::size_t i = 0; i <= n; ++i) q.lambda[i] = a + static_cast<double>(i) * q.step;
  q.lambda[n] = b;
  q.weight.front() = q.weight.back() = 0.5 * q.step;
  return q;
}

namespace {

std::vector<double> merged_points(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> u(x);
  u.insert(u.end(), y.begin(), y.end());
  std::sort(u.begin(), u.end());
  u.erase(std::unique(u.begin(), u.end()), u.end());
  return u;
}

std::vector<std::size_t> index_in(const std::vector<double>& pts, const std::vector<double>& all) {
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto it = std::lower_bound(all.begin(), all.end(), pts[i]);
    if (it == all.end() || *it != pts[i]) {
      // Tolerate round-off in externally supplied grids.
      it = std::min_element(all.begin(), all.end(),
                            [&](double a, double b) { return std::abs(a - pts[i]) < std::abs(b - pts[i]); });
      if (it == all.end() || std::abs(*it - pts[i]) > 1e-12 * std::max(1.0, std::abs(pts[i])))
        fail(ErrorCode::inconsistency, "kernel: point " + std::to_string(pts[i]) + " missing from the Jost x grid");
    }
    idx[i] = static_cast<std::size_t>(it - all.begin());
  }
  return idx;
}

struct Accumulator {
  std::size_t nx, ny;
  std::vector<double> re, im;
  Accumulator(std::size_t nx_, std::size_t ny_) : nx(nx_), ny(ny_), re(nx_ * ny_, 0.0), im(nx_ * ny_, 0.0) {}

  //! K += Re(c · a ⊗ b) for real coefficient pieces; c complex, a and b complex vectors:
  //! Re(ab) contributes to the real kernel with coefficient c.
  void add(cplx c, const std::vector<cplx>& a, const std::vector<cplx>& b) {
    std::vector<double> ar(nx), ai(nx), br(ny), bi(ny);
    for (std::size_t i = 0; i < nx; ++i) {
      ar[i] = a[i].real();
      ai[i] = a[i].imag();
    }
    for (std::size_t j = 0; j < ny; ++j) {
      br[j] = b[j].real();
      bi[j] = b[j].imag();
    }
    const double cr = c.real(), ci = c.imag();
    for (std::size_t i = 0; i < nx; ++i) {
      double* pr = re.data() + i * ny;
      double* pi = im.data() + i * ny;
      const double xr = ar[i], xi = ai[i];
      for (std::size_t j = 0; j < ny; ++j) {
        const double g = xr * br[j] - xi * bi[j];
        pr[j] += cr * g;
        pi[j] += ci * g;
      }
    }
  }
};

OperatorKernel finish(Accumulator& acc, const std::vector<double>& x, const std::vector<double>& y) {
  OperatorKernel k;
  k.x = x;
  k.y = y;
  k.values = CMatrix(x.size(), y.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      const cplx v(acc.re[i * y.size() + j], acc.im[i * y.size() + j]);
      k.values(i, j) = v;
    }
  return k;
}

void add_pure_point(OperatorKernel& k, const Potential& v, const Multiplier& mu, const DyadicSystem& d,
                    const Block& block, double eig_tol) {
  const BoundStateSet bs = bound_states(v, eig_tol);
  for (std::size_t m = 0; m < bs.count(); ++m) {
    const double e = bs.states[m].energy;
    const cplx c = mu(e) * block.weight(d, e);
    if (c == cplx{}) continue;
    std::vector<double> ux(k.x.size()), uy(k.y.size());
    for (std::size_t i = 0; i < ux.size(); ++i) ux[i] = bs.value(m, k.x[i]);
    for (std::size_t j = 0; j < uy.size(); ++j) uy[j] = bs.value(m, k.y[j]);
    for (std::size_t i = 0; i < ux.size(); ++i)
      for (std::size_t j = 0; j < uy.size(); ++j) k.values(i, j) += c * ux[i] * uy[j];
  }
}

void diagnostics(OperatorKernel& k) {
  k.max_imag = 0.0;
  for (const auto& v : k.values.data()) k.max_imag = std::max(k.max_imag, std::abs(v.imag()));
  k.symmetry_residual = std::numeric_limits<double>::quiet_NaN();
  if (k.x == k.y) {
    double r = 0.0;
    for (std::size_t i = 0; i < k.x.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) r = std::max(r, std::abs(k.values(i, j) - k.values(j, i)));
    k.symmetry_residual = r;
  }
}

template <class Route>
OperatorKernel assemble_with(const Potential& v, const Multiplier& mu, const DyadicSystem& d, const Block& block,
                             const std::vector<double>& x, const std::vector<double>& y, const KernelOptions& opt,
                             Route&& route) {
  const KernelQuadrature q = kernel_quadrature(block, effective_delta(v, x, y), opt);
  const std::vector<double> all = merged_points(x, y);
  const auto ix = index_in(x, all), iy = index_in(y, all);
  Accumulator acc(x.size(), y.size());
  std::vector<cplx> a(x.size()), b(y.size());
  if (opt.part != KernelPart::pp) {
    detail::sweep_lambda(v, q.lambda, all, opt.jost, opt.chunk, [&](std::size_t n, const detail::LambdaSlice& s) {
      const double lam = s.lambda;
      const cplx c = q.weight[n] * block.weight(d, lam * lam) * mu(lam * lam) / std::numbers::pi;
      if (c == cplx{}) return;
      route(s, ix, iy, a, b);
      acc.add(c, a, b);
    });
  }
  OperatorKernel k = finish(acc, x, y);
  k.block = block;
  k.multiplier = mu.describe();
  k.quad = q;
  k.part = opt.part;
  k.potential_hash = v.hash();
  if (opt.part != KernelPart::ac) add_pure_point(k, v, mu, d, block, opt.eig_tol);
  diagnostics(k);
  return k;
}

} // namespace

OperatorKernel assemble_kernel(const Potential& v, const Multiplier& mu, const DyadicSystem& d, const Block& block,
                               const std::vector<double>& x, const std::vector<double>& y, const KernelOptions& opt) {
  return assemble_with(v, mu, d, block, x, y, opt,
                       [](const detail::LambdaSlice& s, const std::vector<std::size_t>& ix,
                          const std::vector<std::size_t>& iy, std::vector<cplx>& a, std::vector<cplx>& b) {
                         for (std::size_t i = 0; i < ix.size(); ++i) a[i] = s.t * s.f_plus[ix[i]];
                         for (std::size_t j = 0; j < iy.size(); ++j) b[j] = s.f_minus[iy[j]];
                       });
}

OperatorKernel assemble_kernel_r_plus(const Potential& v, const Multiplier& mu, const DyadicSystem& d,
                                      const Block& block, const std::vector<double>& x,
                                      const std::vector<double>& y, const KernelOptions& opt) {
  for (double a : x)
    if (!(a > 0.0)) fail(ErrorCode::precondition, "assemble_kernel_r_plus: x must be positive");
  for (double a : y)
    if (!(a > 0.0)) fail(ErrorCode::precondition, "assemble_kernel_r_plus: y must be positive");
  // t f-(y) = r+ f+(y) + conj f+(y), so t f+(x) f-(y) = f+(x) [r+ f+(y) + conj f+(y)].
  return assemble_with(v, mu, d, block, x, y, opt,
                       [](const detail::LambdaSlice& s, const std::vector<std::size_t>& ix,
                          const std::vector<std::size_t>& iy, std::vector<cplx>& a, std::vector<cplx>& b) {
                         for (std::size_t i = 0; i < ix.size(); ++i) a[i] = s.f_plus[ix[i]];
                         for (std::size_t j = 0; j < iy.size(); ++j) {
                           const cplx f = s.f_plus[iy[j]];
                           b[j] = s.r_plus * f + std::conj(f);
                         }
                       });
}

OperatorKernel assemble_kernel(const Potential& v, const Multiplier& mu, const DyadicSystem& d, const Block& block,
                               const ScatteringData& scat, const JostField& jost, const std::vector<double>& x,
                               const std::vector<double>& y, const KernelOptions& opt) {
  if (jost.potential_hash != v.hash() || scat.potential_hash != v.hash())
    fail(ErrorCode::inconsistency, "assemble_kernel: data belong to another potential");
  if (jost.k != scat.k) fail(ErrorCode::inconsistency, "assemble_kernel: Jost and scattering grids differ");
  const auto& k = jost.k;
  const double delta = effective_delta(v, x, y);
  const double required = 2.0 * std::numbers::pi / (opt.points_per_period * std::max(delta, 1e-12));
  const auto [a, b] = block.k_support();
  if (k.size() < 2 || k.front() > a + 1e-12 || k.back() < b - 1e-12)
    fail(ErrorCode::under_resolved, "assemble_kernel: k grid must cover [" + std::to_string(a) + ", " +
                                        std::to_string(b) + "]");
  const double step = k[1] - k[0];
  for (std::size_t i = 1; i < k.size(); ++i)
    if (std::abs(k[i] - k[i - 1] - step) > 1e-9 * std::max(1.0, step))
      fail(ErrorCode::invalid_argument, "assemble_kernel: k grid must be uniform");
  if (step > required * (1.0 + 1e-12))
    fail(ErrorCode::under_resolved, "assemble_kernel: k step " + std::to_string(step) + " exceeds the required " +
                                        std::to_string(required) + " (need at least " +
                                        std::to_string(static_cast<long>(std::ceil((b - a) / required))) +
                                        " intervals on the block support)");
  const auto ix = index_in(x, jost.x), iy = index_in(y, jost.x);
  Accumulator acc(x.size(), y.size());
  std::vector<cplx> av(x.size()), bv(y.size());
  KernelQuadrature q;
  q.step = step;
  q.required_step = required;
  q.delta_eff = delta;
  q.lambda = k;
  q.weight.assign(k.size(), step);
  q.weight.front() = q.weight.back() = 0.5 * step;
  if (opt.part != KernelPart::pp) {
    for (std::size_t n = 0; n < k.size(); ++n) {
      const double lam = k[n];
      if (lam < 0.0) fail(ErrorCode::invalid_argument, "assemble_kernel: k grid must be nonnegative");
      const cplx c = q.weight[n] * block.weight(d, lam * lam) * mu(lam * lam) / std::numbers::pi;
      if (c == cplx{}) continue;
      for (std::size_t i = 0; i < x.size(); ++i) av[i] = scat.t[n] * std::polar(1.0, lam * x[i]) * jost.m_plus(n, ix[i]);
      for (std::size_t j = 0; j < y.size(); ++j) bv[j] = std::polar(1.0, -lam * y[j]) * jost.m_minus(n, iy[j]);
      acc.add(c, av, bv);
    }
  }
  OperatorKernel out = finish(acc, x, y);
  out.block = block;
  out.multiplier = mu.describe();
  out.quad = std::move(q);
  out.part = opt.part;
  out.potential_hash = v.hash();
  if (opt.part != KernelPart::ac) add_pure_point(out, v, mu, d, block, opt.eig_tol);
  diagnostics(out);
  return out;
}

void write_kernel_csv(const OperatorKernel& k, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << std::setprecision(17) << "x,y,re,im\r\n";
  for (std::size_t i = 0; i < k.x.size(); ++i)
    for (std::size_t j = 0; j < k.y.size(); ++j)
      out << k.x[i] << ',' << k.y[j] << ',' << k.values(i, j).real() << ',' << k.values(i, j).imag() << "\r\n";
}

} // namespace scatspec
