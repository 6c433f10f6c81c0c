#include "scatspec/jost.hpp"

#include "scatspec/error.hpp"
#include "scatspec/green.hpp"
#include "scatspec/parallel.hpp"
#include "window.hpp"

#include <cmath>
#include <limits>

namespace scatspec {

namespace {

constexpr cplx I{0.0, 1.0};

using detail::Window;
using detail::active_window;
using detail::mirrored;

struct NodeRecord {
  cplx m, mp, dm, dmp;
};

struct LevelResult {
  std::vector<NodeRecord> nodes;
  JostTotals tot;
  double residual = 0.0;
};

//! Per-node phase factors e^{ikx} and sin(kx)/k.
struct Phase {
  cplx e1;
  double sk;
};

Phase phase(double x, double k) {
  const double u = k * x;
  return {std::polar(1.0, u), x * sinc(u)};
}

//! One sweep from the right end of the window at a stride of the fine grid.
//! When `m_given` is set the node values are taken from it and only the
//! integrals, derivatives and residual are computed.
LevelResult march_level(const Window& w, std::size_t stride, double k, bool deriv,
                        const std::vector<cplx>* m_given) {
  LevelResult out;
  const std::size_t n = (w.v.size() - 1) / stride + 1;
  const double h = w.h * static_cast<double>(stride);
  out.nodes.resize(n);
  cplx TS{}, TS1{}, TH{}, THd{}, TDS{}, TDH{}, TDS1{};
  double mmax = 1.0;
  for (std::size_t idx = n; idx-- > 0;) {
    const std::size_t i = idx * stride;
    const double x = w.x(i);
    const double vi = w.v[i];
    const Phase p = phase(x, k);
    const cplx e2 = p.e1 * p.e1;
    const cplx ce2 = std::conj(e2);
    const cplx hx = p.e1 * p.sk;
    const cplx hm = -std::conj(p.e1) * p.sk;

    const cplx m = m_given ? (*m_given)[idx] : 1.0 + ce2 * TH + hm * TS;
    const cplx Vm = vi * m;
    const double half = (idx == n - 1) ? 0.0 : 0.5 * h;
    const cplx IntS = TS + half * Vm;
    const cplx IntS1 = TS1 + half * (e2 * Vm);
    const cplx IntH = TH + half * (hx * Vm);
    mmax = std::max(mmax, std::abs(m));
    out.residual = std::max(out.residual, std::abs(m - 1.0 - ce2 * IntH - hm * IntS));

    NodeRecord rec;
    rec.m = m;
    rec.mp = -ce2 * IntS1;
    const double wgt = (idx == n - 1) ? 0.5 * h : h;
    if (deriv) {
      const double u = k * x;
      const cplx bracket{cos_minus_sinc_over_u(u), sinc(u)};
      const cplx hdx = p.e1 * (x * x) * bracket;
      const cplx hdm = std::conj(p.e1) * (x * x) * cplx(-bracket.real(), bracket.imag());
      const cplx IntHd = THd + half * (hdx * Vm);
      const cplx D = -2.0 * I * x * ce2 * IntH + ce2 * IntHd + hdm * IntS;
      const cplx dm = D + ce2 * TDH + hm * TDS;
      const cplx Vdm = vi * dm;
      const cplx f_ds1 = 2.0 * I * x * e2 * Vm + e2 * Vdm;
      const cplx IntDS1 = TDS1 + half * f_ds1;
      rec.dm = dm;
      rec.dmp = 2.0 * I * x * ce2 * IntS1 - ce2 * IntDS1;
      if (idx == 0) {
        out.tot.ds = TDS + half * Vdm;
        out.tot.dh = IntHd + TDH + half * (hx * Vdm);
        out.tot.ds1 = IntDS1;
      }
      THd += wgt * (hdx * Vm);
      TDS += wgt * Vdm;
      TDH += wgt * (hx * Vdm);
      TDS1 += wgt * f_ds1;
    }
    if (idx == 0) {
      out.tot.s = IntS;
      out.tot.s1 = IntS1;
      out.tot.h = IntH;
    }
    out.nodes[idx] = rec;
    TS += wgt * Vm;
    TS1 += wgt * (e2 * Vm);
    TH += wgt * (hx * Vm);
  }
  out.residual /= mmax;
  return out;
}

//! Born terms on one level; terms[n][idx].
std::vector<std::vector<cplx>> born_level_terms(const Window& w, std::size_t stride, double k,
                                                std::size_t n_max, double tol, std::size_t* used) {
  const std::size_t n = (w.v.size() - 1) / stride + 1;
  const double h = w.h * static_cast<double>(stride);
  std::vector<std::vector<cplx>> terms;
  terms.emplace_back(n, cplx(1.0, 0.0));
  for (std::size_t t = 1; t <= n_max; ++t) {
    const auto& prev = terms.back();
    std::vector<cplx> next(n);
    cplx TS{}, TH{};
    double sup = 0.0;
    for (std::size_t idx = n; idx-- > 0;) {
      const double x = w.x(idx * stride);
      const Phase p = phase(x, k);
      const cplx e2 = p.e1 * p.e1;
      const cplx hx = p.e1 * p.sk;
      const cplx hm = -std::conj(p.e1) * p.sk;
      next[idx] = std::conj(e2) * TH + hm * TS;
      sup = std::max(sup, std::abs(next[idx]));
      const double wgt = (idx == n - 1) ? 0.5 * h : h;
      const cplx VM = w.v[idx * stride] * prev[idx];
      TS += wgt * VM;
      TH += wgt * (hx * VM);
    }
    terms.push_back(std::move(next));
    if (used) *used = t;
    if (tol > 0.0 && sup <= tol) break;
  }
  return terms;
}

LevelResult solve_level(const Window& w, std::size_t stride, double k, const JostOptions& opt, std::size_t* iters) {
  if (opt.scheme == VolterraScheme::marching) {
    if (iters) *iters = 1;
    return march_level(w, stride, k, opt.derivative, nullptr);
  }
  std::size_t used = 0;
  auto terms = born_level_terms(w, stride, k, opt.max_terms, opt.tol, &used);
  if (used >= opt.max_terms)
    fail(ErrorCode::non_convergence, "Born series did not converge within " + std::to_string(opt.max_terms) + " terms");
  std::vector<cplx> m(terms[0].size(), cplx{});
  for (const auto& t : terms)
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += t[i];
  if (iters) *iters = used;
  return march_level(w, stride, k, opt.derivative, &m);
}

//! Node values and totals after optional Richardson extrapolation, on the
//! coarse grid (stride 2) or the fine grid (stride 1).
struct SolvedSide {
  Window w;
  std::size_t stride = 1;
  std::vector<NodeRecord> nodes;
  JostTotals tot;
  double residual = 0.0;
  std::size_t iterations = 0;
};

NodeRecord extrapolate(const NodeRecord& f, const NodeRecord& c) {
  return {(4.0 * f.m - c.m) / 3.0, (4.0 * f.mp - c.mp) / 3.0, (4.0 * f.dm - c.dm) / 3.0,
          (4.0 * f.dmp - c.dmp) / 3.0};
}

JostTotals extrapolate(const JostTotals& f, const JostTotals& c) {
  auto r = [](cplx a, cplx b) { return (4.0 * a - b) / 3.0; };
  return {r(f.s, c.s), r(f.s1, c.s1), r(f.h, c.h), r(f.ds, c.ds), r(f.ds1, c.ds1), r(f.dh, c.dh)};
}

SolvedSide solve_side(const Window& w, double k, const JostOptions& opt) {
  SolvedSide s;
  s.w = w;
  if (w.empty()) return s;
  std::size_t it_f = 0, it_c = 0;
  LevelResult fine = solve_level(w, 1, k, opt, &it_f);
  if (!opt.richardson || w.v.size() < 3) {
    s.nodes = std::move(fine.nodes);
    s.tot = fine.tot;
    s.residual = fine.residual;
    s.iterations = it_f;
    return s;
  }
  LevelResult coarse = solve_level(w, 2, k, opt, &it_c);
  s.stride = 2;
  s.nodes.resize(coarse.nodes.size());
  for (std::size_t c = 0; c < coarse.nodes.size(); ++c) s.nodes[c] = extrapolate(fine.nodes[2 * c], coarse.nodes[c]);
  s.tot = extrapolate(fine.tot, coarse.tot);
  s.residual = std::max(fine.residual, coarse.residual);
  s.iterations = std::max(it_f, it_c);
  return s;
}

//! m, ∂_x m, ∂_k m at an arbitrary point for the plus-type problem.
NodeRecord evaluate_side(const SolvedSide& s, double x, double k) {
  if (s.w.empty() || x >= s.w.x_end()) return {cplx(1.0, 0.0), cplx{}, cplx{}, cplx{}};
  if (x <= s.w.x0) {
    const Phase p = phase(x, k);
    const cplx ce2 = std::conj(p.e1 * p.e1);
    const cplx hm = -std::conj(p.e1) * p.sk;
    const JostTotals& t = s.tot;
    NodeRecord r;
    r.m = 1.0 + ce2 * t.h + hm * t.s;
    r.mp = -ce2 * t.s1;
    const double u = k * x;
    const cplx hdm = std::conj(p.e1) * (x * x) * cplx(-cos_minus_sinc_over_u(u), sinc(u));
    r.dm = -2.0 * I * x * ce2 * t.h + ce2 * t.dh + hdm * t.s + hm * t.ds;
    r.dmp = 2.0 * I * x * ce2 * t.s1 - ce2 * t.ds1;
    return r;
  }
  const double H = s.w.h * static_cast<double>(s.stride);
  const double pos = (x - s.w.x0) / H;
  const std::size_t last = s.nodes.size() - 1;
  std::size_t c = static_cast<std::size_t>(std::floor(pos));
  if (c >= last) c = last - 1;
  const double th = pos - static_cast<double>(c);
  if (std::abs(th) < 1e-9) return s.nodes[c];
  if (std::abs(th - 1.0) < 1e-9) return s.nodes[c + 1];
  const double t2 = th * th, t3 = t2 * th;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + th, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  const NodeRecord& a = s.nodes[c];
  const NodeRecord& b = s.nodes[c + 1];
  NodeRecord r;
  r.m = h00 * a.m + h10 * H * a.mp + h01 * b.m + h11 * H * b.mp;
  r.dm = h00 * a.dm + h10 * H * a.dmp + h01 * b.dm + h11 * H * b.dmp;
  // Derivative of the Hermite interpolant.
  const double d00 = (6 * t2 - 6 * th) / H, d10 = 3 * t2 - 4 * th + 1, d01 = (-6 * t2 + 6 * th) / H, d11 = 3 * t2 - 2 * th;
  r.mp = d00 * a.m + d10 * a.mp + d01 * b.m + d11 * b.mp;
  r.dmp = d00 * a.dm + d10 * a.dmp + d01 * b.dm + d11 * b.dmp;
  return r;
}

void check_inputs(const std::vector<double>& k_grid, const std::vector<double>& x_grid, const JostOptions& opt) {
  if (k_grid.empty()) fail(ErrorCode::invalid_argument, "solve_jost: empty k grid");
  for (double k : k_grid)
    if (!std::isfinite(k)) fail(ErrorCode::invalid_argument, "solve_jost: non-finite k");
  for (double x : x_grid)
    if (!std::isfinite(x)) fail(ErrorCode::invalid_argument, "solve_jost: non-finite x");
  if (!(opt.tol > 0.0)) fail(ErrorCode::invalid_argument, "solve_jost: tol must be positive");
}

} // namespace

JostField solve_jost(const Potential& v, const std::vector<double>& k_grid, const std::vector<double>& x_grid,
                     const JostOptions& opt) {
  check_inputs(k_grid, x_grid, opt);
  const Window wp = active_window(v);
  const Window wm = mirrored(wp);
  JostField f;
  f.k = k_grid;
  f.x = x_grid;
  f.options = opt;
  f.potential_hash = v.hash();
  const std::size_t nk = k_grid.size(), nx = x_grid.size();
  f.m_plus = CMatrix(nk, nx);
  f.m_minus = CMatrix(nk, nx);
  if (opt.derivative) {
    f.dm_plus = CMatrix(nk, nx);
    f.dm_minus = CMatrix(nk, nx);
  }
  f.plus.resize(nk);
  f.minus.resize(nk);
  f.residual.assign(nk, 0.0);
  f.iterations.assign(nk, 0);
  // Derivatives at k = 0 are still needed for the resonant limits of the
  // scattering data, so they are always computed for that column.
  parallel_for(nk, opt.jobs, [&](std::size_t ik) {
    const double k = k_grid[ik];
    JostOptions o = opt;
    if (k == 0.0) o.derivative = true;
    const SolvedSide sp = solve_side(wp, k, o);
    const SolvedSide sm = solve_side(wm, k, o);
    f.plus[ik] = sp.tot;
    f.minus[ik] = sm.tot;
    f.residual[ik] = std::max(sp.residual, sm.residual);
    f.iterations[ik] = std::max(sp.iterations, sm.iterations);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const double x = x_grid[ix];
      const NodeRecord a = evaluate_side(sp, x, k);
      const NodeRecord b = evaluate_side(sm, -x, k);
      f.m_plus(ik, ix) = a.m;
      f.m_minus(ik, ix) = b.m;
      if (opt.derivative) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        f.dm_plus(ik, ix) = k == 0.0 ? cplx(nan, nan) : a.dm;
        f.dm_minus(ik, ix) = k == 0.0 ? cplx(nan, nan) : b.dm;
      }
    }
  });
  for (std::size_t ik = 0; ik < nk; ++ik) {
    if (opt.derivative && k_grid[ik] == 0.0) f.derivative_unset_at_zero = true;
    const double limit = opt.scheme == VolterraScheme::born ? 10.0 * opt.tol : std::max(opt.tol, 1e-11);
    if (f.residual[ik] > limit)
      fail(ErrorCode::non_convergence, "Volterra residual " + std::to_string(f.residual[ik]) + " exceeds tolerance at k=" +
                                           std::to_string(k_grid[ik]));
  }
  return f;
}

JostField jost_derivative(const Potential& v, const std::vector<double>& k_grid, const std::vector<double>& x_grid,
                          JostOptions options) {
  options.derivative = true;
  return solve_jost(v, k_grid, x_grid, options);
}

std::vector<cplx> volterra_terms(const Potential& v, double x, double k, std::size_t n_max, bool richardson) {
  // M_n of m-(x,-k) are the Born terms of m+[Ṽ](-x,-k).
  const Window w = mirrored(active_window(v));
  const double xr = -x, kr = -k;
  std::vector<cplx> out(n_max + 1, cplx{});
  out[0] = 1.0;
  if (w.empty() || xr >= w.x_end()) return out;
  auto level = [&](std::size_t stride) {
    std::vector<cplx> vals(n_max + 1, cplx{});
    auto terms = born_level_terms(w, stride, kr, n_max, 0.0, nullptr);
    const double H = w.h * static_cast<double>(stride);
    if (xr <= w.x0) {
      // Exterior: M_n(x) = e^{-2ikx} ∫h(t,k)V M_{n-1} + h(-x,k) ∫V M_{n-1}.
      const std::size_t n = terms[0].size();
      const auto wts = trapezoid_weights(n, H);
      const cplx ce2 = std::conj(std::polar(1.0, 2.0 * kr * xr));
      const cplx hm = GreenFactor::value(-xr, kr);
      vals[0] = 1.0;
      for (std::size_t t = 1; t <= n_max; ++t) {
        cplx S{}, Hs{};
        for (std::size_t i = 0; i < n; ++i) {
          const double xi = w.x(i * stride);
          const cplx VM = wts[i] * w.v[i * stride] * terms[t - 1][i];
          S += VM;
          Hs += GreenFactor::value(xi, kr) * VM;
        }
        vals[t] = ce2 * Hs + hm * S;
      }
      return vals;
    }
    const double pos = (xr - w.x0) / H;
    const double r = std::round(pos);
    if (std::abs(pos - r) > 1e-9)
      fail(ErrorCode::precondition, "volterra_terms: x must lie on the coarse solver grid inside the support");
    const auto idx = static_cast<std::size_t>(r);
    for (std::size_t t = 0; t <= n_max; ++t) vals[t] = terms[t][idx];
    return vals;
  };
  const auto fine = level(1);
  if (!richardson || w.v.size() < 3) return fine;
  const auto coarse = level(2);
  for (std::size_t t = 0; t <= n_max; ++t) out[t] = (4.0 * fine[t] - coarse[t]) / 3.0;
  return out;
}

BornTermTable born_terms_plus(const Potential& v, double k, std::size_t n_max) {
  const Window w = active_window(v);
  BornTermTable tab;
  if (w.empty()) return tab;
  for (std::size_t i = 0; i < w.v.size(); ++i) tab.x.push_back(w.x(i));
  tab.terms = born_level_terms(w, 1, k, n_max, 0.0, nullptr);
  return tab;
}

} // namespace scatspec
