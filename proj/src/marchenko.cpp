#include "scatspec/marchenko.hpp"

#include "scatspec/error.hpp"
#include "scatspec/scattering.hpp"
#include "window.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace scatspec {

namespace {

using detail::Window;

struct LevelOut {
  MarchenkoLevel lev;
  std::vector<double> abs_int, abs_int_y, gamma;
  double envelope = 0.0;
  double residual = 0.0;
};

LevelOut solve_level(const Window& w, std::size_t stride, long p_min_fine, const std::vector<long>& rows_fine,
                     bool tables) {
  LevelOut out;
  MarchenkoLevel& L = out.lev;
  const std::size_t n = (w.v.size() - 1) / stride + 1;
  const double H = w.h * static_cast<double>(stride);
  const long p_min = p_min_fine / static_cast<long>(stride);
  const long ln = static_cast<long>(n);
  const std::size_t ns = static_cast<std::size_t>(ln - p_min);
  L.h = H;
  L.x0 = w.x0;
  L.n = n;
  L.p_min = p_min;
  L.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) L.v[i] = w.v[i * stride];
  const auto& v = L.v;
  auto sx = [&](long p) { return w.x0 + static_cast<double>(p) * H; };
  auto at = [&](long p) { return static_cast<std::size_t>(p - p_min); };

  // Suffix integrals ρ = ∫_x^∞ V, ρ_abs = ∫_x^∞ |V|, M1 = ∫_x^∞ t|V|.
  std::vector<double> rho(ns), rho_abs(ns), m1(ns);
  {
    double a = 0, b = 0, c = 0;
    for (long p = ln - 1; p >= 0; --p) {
      if (p < ln - 1) {
        const double t0 = sx(p), t1 = sx(p + 1);
        const std::size_t i = static_cast<std::size_t>(p);
        a += 0.5 * H * (v[i] + v[i + 1]);
        b += 0.5 * H * (std::abs(v[i]) + std::abs(v[i + 1]));
        c += 0.5 * H * (t0 * std::abs(v[i]) + t1 * std::abs(v[i + 1]));
      }
      rho[at(p)] = a;
      rho_abs[at(p)] = b;
      m1[at(p)] = c;
    }
    for (long p = p_min; p < 0; ++p) {
      rho[at(p)] = a;
      rho_abs[at(p)] = b;
      m1[at(p)] = c;
    }
  }
  std::vector<double> gamma(ns);
  for (long p = p_min; p < ln; ++p) gamma[at(p)] = m1[at(p)] - sx(p) * rho_abs[at(p)];

  const long qmax = ln - 1 - p_min;
  L.rows = RMatrix(rows_fine.size(), static_cast<std::size_t>(qmax + 1), 0.0);
  L.b.assign(static_cast<std::size_t>(qmax + 1), 0.0);
  L.c.assign(n, 0.0);
  L.int_b.assign(ns, 0.0);
  if (tables) {
    out.abs_int.assign(ns, 0.0);
    out.abs_int_y.assign(ns, 0.0);
  }
  std::vector<long> rows(rows_fine.size());
  for (std::size_t r = 0; r < rows.size(); ++r) rows[r] = rows_fine[r] / static_cast<long>(stride);

  std::vector<double> F(rho);
  std::vector<double> Gprev(n, 0.0), Gcur(n, 0.0), Bcur(n, 0.0);
  const double hh = 0.5 * H;
  double env_max = 0.0, res_max = 0.0;

  for (long q = 0; q <= qmax; ++q) {
    const long imax = ln - 1 - q;
    std::swap(Gprev, Gcur);
    std::fill(Gcur.begin(), Gcur.end(), 0.0);
    if (q == 0) {
      for (std::size_t i = 0; i < n; ++i) Bcur[i] = rho[at(static_cast<long>(i))];
      for (long i = ln - 2; i >= 0; --i) {
        const auto u = static_cast<std::size_t>(i);
        Gcur[u] = Gcur[u + 1] + hh * (v[u] * Bcur[u] + v[u + 1] * Bcur[u + 1]);
      }
    } else {
      double b_next = 0.0;
      for (long i = imax; i >= 0; --i) {
        const auto u = static_cast<std::size_t>(i);
        const double A = F[at(i + q)] + hh * Gprev[u + 1];
        const double gpart = Gcur[u + 1] + hh * v[u + 1] * b_next;
        const double B = (A + hh * gpart) / (1.0 - hh * hh * v[u]);
        Gcur[u] = gpart + hh * v[u] * B;
        res_max = std::max(res_max, std::abs(B - A - hh * Gcur[u]));
        Bcur[u] = B;
        b_next = B;
      }
      for (long p = q; p < ln; ++p) {
        const long i = p - q;
        F[at(p)] = (i <= imax) ? Bcur[static_cast<std::size_t>(i)] : 0.0;
      }
      const double g0 = Gcur[0];
      for (long p = p_min + q; p < std::min(q, ln); ++p) {
        const long i1 = p - q + 1;
        F[at(p)] += hh * (Gprev[static_cast<std::size_t>(std::max(0L, i1))] + g0);
      }
    }
    const double wq = (q == 0) ? hh : H;
    L.b[static_cast<std::size_t>(q)] = Gcur[0];
    for (long i = 0; i <= imax; ++i) L.c[static_cast<std::size_t>(i + q)] += wq * v[static_cast<std::size_t>(i)] * Bcur[static_cast<std::size_t>(i)];
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const long p = rows[r] + q;
      if (p < ln) L.rows(r, static_cast<std::size_t>(q)) = F[at(p)];
    }
    const double y = static_cast<double>(q) * H;
    for (long px = p_min; px <= imax; ++px) {
      const double val = F[at(px + q)];
      L.int_b[at(px)] += wq * val;
      if (tables) {
        const double a = std::abs(val);
        out.abs_int[at(px)] += wq * a;
        out.abs_int_y[at(px)] += wq * y * a;
        if (a > 0.0) {
          const double bound = std::exp(gamma[at(px)]) * rho_abs[at(px + q)];
          env_max = std::max(env_max, bound > 0.0 ? a / bound : std::numeric_limits<double>::infinity());
        }
      }
    }
  }
  out.envelope = env_max;
  out.residual = res_max;
  out.gamma = std::move(gamma);
  return out;
}

MarchenkoSide solve_side(const Window& w, double x_lo, const std::vector<double>& rows_x, bool richardson) {
  MarchenkoSide s;
  s.rows_x = rows_x;
  s.richardson = richardson;
  const double h = w.h;
  long p_min = std::min(0L, static_cast<long>(std::floor((x_lo - w.x0) / h + 1e-9)));
  if (p_min % 2 != 0) --p_min;
  std::vector<long> rows_p;
  for (double x : rows_x) {
    const double pos = (x - w.x0) / h;
    const long p = std::lround(pos);
    if (std::abs(pos - static_cast<double>(p)) > 1e-6 || p % 2 != 0)
      fail(ErrorCode::precondition, "solve_marchenko: row x=" + std::to_string(x) + " is not on the coarse grid");
    if (p < p_min) fail(ErrorCode::precondition, "solve_marchenko: row x=" + std::to_string(x) + " below the output window");
    rows_p.push_back(p);
  }
  const long last = static_cast<long>(w.v.size()) - 1;
  LevelOut fine = solve_level(w, 1, p_min, rows_p, true);
  s.fine = std::move(fine.lev);
  s.abs_int = std::move(fine.abs_int);
  s.abs_int_y = std::move(fine.abs_int_y);
  s.gamma = std::move(fine.gamma);
  s.envelope_ratio = fine.envelope;
  s.residual = fine.residual;
  for (long p = p_min; p <= last; ++p) s.table_x.push_back(w.x0 + static_cast<double>(p) * h);
  if (richardson && w.v.size() >= 3) {
    LevelOut coarse = solve_level(w, 2, p_min, rows_p, false);
    s.coarse = std::move(coarse.lev);
    s.residual = std::max(s.residual, coarse.residual);
  } else {
    s.richardson = false;
  }
  return s;
}

//! Σ w_q f_q e^{2ik(origin + qH)} with trapezoid weights (half at both ends).
cplx trapezoid_ft(const std::vector<double>& f, double origin, double H, double k) {
  if (f.empty()) return {};
  cplx acc{};
  const cplx step = std::polar(1.0, 2.0 * k * H);
  cplx ph = std::polar(1.0, 2.0 * k * origin);
  for (std::size_t q = 0; q < f.size(); ++q) {
    if (q % 256 == 0) ph = std::polar(1.0, 2.0 * k * (origin + static_cast<double>(q) * H));
    const double wgt = (q == 0 || q + 1 == f.size()) ? 0.5 * H : H;
    acc += wgt * f[q] * ph;
    ph *= step;
  }
  return acc;
}

template <class Fn> cplx richardson(const MarchenkoSide& s, Fn&& fn) {
  const cplx fine = fn(s.fine);
  if (!s.richardson) return fine;
  return (4.0 * fine - fn(s.coarse)) / 3.0;
}

const MarchenkoSide& side_of(const MarchenkoKernel& mk, int sign) {
  if (sign != 1 && sign != -1) fail(ErrorCode::invalid_argument, "sign must be +1 or -1");
  return sign > 0 ? mk.plus : mk.minus;
}

double trapezoid_sum(const std::vector<double>& f, double H) {
  double acc = 0.0;
  for (std::size_t q = 0; q < f.size(); ++q) acc += ((q == 0 || q + 1 == f.size()) ? 0.5 : 1.0) * H * f[q];
  return acc;
}

std::vector<double> suffix_integral(const std::vector<double>& f, double H) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t q = f.size(); q-- > 1;) out[q - 1] = out[q] + 0.5 * H * (f[q] + f[q - 1]);
  return out;
}

} // namespace

double MarchenkoKernel::B(int sign, std::size_t row, std::size_t q) const {
  if (zero) return 0.0;
  const auto& s = side_of(*this, sign);
  return q < s.fine.rows.cols() ? s.fine.rows(row, q) : 0.0;
}

std::size_t MarchenkoKernel::ny(int sign) const { return zero ? 0 : side_of(*this, sign).fine.rows.cols(); }

cplx MarchenkoKernel::fourier(int sign, std::size_t row, double k) const {
  if (zero) return 1.0;
  const auto& s = side_of(*this, sign);
  return 1.0 + richardson(s, [&](const MarchenkoLevel& L) {
           std::vector<double> f(L.rows.row(row), L.rows.row(row) + L.rows.cols());
           return trapezoid_ft(f, 0.0, L.h, k);
         });
}

MarchenkoKernel solve_marchenko(const Potential& v, const MarchenkoOptions& opt) {
  if (!(opt.tol > 0.0) || opt.n_max == 0) fail(ErrorCode::invalid_argument, "solve_marchenko: bad tolerance or n_max");
  MarchenkoKernel mk;
  mk.potential_hash = v.hash();
  mk.norms = v.norms();
  mk.nu0 = v.norms().integral;
  mk.rows_x = opt.rows_x;
  const Window wp = detail::active_window(v);
  if (wp.empty()) {
    mk.zero = true;
    mk.iteration_count = 0;
    return mk;
  }
  const double x_lo = std::isnan(opt.x_lo) ? v.grid().x_min : opt.x_lo;
  const double x_hi = std::isnan(opt.x_hi) ? v.grid().x_max() : opt.x_hi;
  if (!(x_lo < x_hi)) fail(ErrorCode::invalid_argument, "solve_marchenko: empty output window");
  std::vector<double> rows_m;
  for (double x : opt.rows_x) {
    if (x < x_lo || x > x_hi) fail(ErrorCode::precondition, "solve_marchenko: row outside the output window");
    rows_m.push_back(-x);
  }
  mk.plus = solve_side(wp, x_lo, opt.rows_x, opt.richardson);
  mk.minus = solve_side(detail::mirrored(wp), -x_hi, rows_m, opt.richardson);
  mk.iteration_count = 1;
  const double res = std::max(mk.plus.residual, mk.minus.residual);
  if (res > opt.tol * std::max(1.0, mk.norms.l1))
    fail(ErrorCode::non_convergence, "Marchenko residual " + std::to_string(res) + " exceeds tolerance");
  return mk;
}

WeightedBoundTable weighted_B_bounds(const MarchenkoKernel& mk, int order, double x_lo, double x_hi) {
  if (order != 0 && order != 1) fail(ErrorCode::invalid_argument, "weighted_B_bounds: order must be 0 or 1");
  WeightedBoundTable t;
  t.order = order;
  if (mk.zero) {
    t.x = {x_lo, x_hi};
    t.plus = t.minus = t.ratio_plus = t.ratio_minus = {0.0, 0.0};
    return t;
  }
  const double h = mk.plus.fine.h;
  // Tables live in side coordinates; the minus side is looked up at -x.
  auto lookup = [&](const MarchenkoSide& S, double xs) {
    if (S.table_x.empty()) return 0.0;
    const long j = std::lround((xs - S.table_x.front()) / h);
    if (j < 0 || j >= static_cast<long>(S.table_x.size())) return 0.0;
    const auto u = static_cast<std::size_t>(j);
    return order == 0 ? S.abs_int[u] : S.abs_int_y[u];
  };
  const long first = std::lround(std::ceil((x_lo - mk.plus.fine.x0) / h - 1e-9));
  const long last = std::lround(std::floor((x_hi - mk.plus.fine.x0) / h + 1e-9));
  for (long p = first; p <= last; ++p) {
    const double x = mk.plus.fine.x0 + static_cast<double>(p) * h;
    const double ip = lookup(mk.plus, x);
    const double im = lookup(mk.minus, -x);
    t.x.push_back(x);
    t.plus.push_back(ip);
    t.minus.push_back(im);
    const double wp = std::pow(1.0 + std::max(0.0, -x), order + 1);
    const double wm = std::pow(1.0 + std::max(0.0, x), order + 1);
    t.ratio_plus.push_back(ip / wp);
    t.ratio_minus.push_back(im / wm);
    t.sup_plus = std::max(t.sup_plus, ip / wp);
    t.sup_minus = std::max(t.sup_minus, im / wm);
  }
  return t;
}

Density density_b(const MarchenkoKernel& mk) {
  Density d;
  if (mk.zero) {
    d.x = {0.0};
    d.values = {0.0};
    return d;
  }
  const auto& L = mk.plus.fine;
  for (std::size_t q = 0; q < L.b.size(); ++q) {
    d.x.push_back(static_cast<double>(q) * L.h);
    d.values.push_back(L.b[q]);
  }
  std::vector<double> a(L.b.size());
  for (std::size_t q = 0; q < a.size(); ++q) a[q] = std::abs(L.b[q]);
  d.l1 = trapezoid_sum(a, L.h);
  return d;
}

Density density_a(const MarchenkoKernel& mk, int sign) {
  Density d;
  if (mk.zero) {
    d.x = {0.0};
    d.values = {0.0};
    return d;
  }
  const auto& L = side_of(mk, -sign).fine;
  // In side coordinates a(w) = V(w) + c(w) - 1_{w>0} b(w).
  const double h = L.h;
  const double w_lo = std::min(L.x0, 0.0);
  const double w_hi = std::max(L.x0 + static_cast<double>(L.n - 1) * h, static_cast<double>(L.b.size() - 1) * h);
  const auto count = static_cast<std::size_t>(std::llround((w_hi - w_lo) / h)) + 1;
  auto sample = [&](const std::vector<double>& f, double origin, double w) {
    const double pos = (w - origin) / h;
    if (pos < -1e-9 || pos > static_cast<double>(f.size() - 1) + 1e-9) return 0.0;
    const auto i = static_cast<std::size_t>(std::clamp(std::floor(pos), 0.0, static_cast<double>(f.size() - 1)));
    const double th = pos - static_cast<double>(i);
    if (i + 1 >= f.size()) return f[i];
    return (1 - th) * f[i] + th * f[i + 1];
  };
  std::vector<double> xs(count), vals(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double w = w_lo + static_cast<double>(i) * h;
    double a = sample(L.v, L.x0, w) + sample(L.c, L.x0, w);
    if (w > 1e-12 * h) a -= sample(L.b, 0.0, w);
    xs[i] = w;
    vals[i] = a;
  }
  if (sign > 0) {
    for (auto& x : xs) x = -x;
    std::reverse(xs.begin(), xs.end());
    std::reverse(vals.begin(), vals.end());
  }
  d.x = std::move(xs);
  d.values = std::move(vals);
  std::vector<double> a(d.values.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = std::abs(d.values[i]);
  d.l1 = trapezoid_sum(a, h);
  return d;
}

cplx b_hat(const MarchenkoKernel& mk, double k) {
  if (mk.zero) return {};
  return richardson(mk.plus, [&](const MarchenkoLevel& L) { return trapezoid_ft(L.b, 0.0, L.h, k); });
}

cplx a_hat(const MarchenkoKernel& mk, int sign, double k) {
  if (mk.zero) return {};
  const auto& s = side_of(mk, -sign);
  return richardson(s, [&](const MarchenkoLevel& L) {
    return trapezoid_ft(L.v, L.x0, L.h, k) + trapezoid_ft(L.c, L.x0, L.h, k) - trapezoid_ft(L.b, 0.0, L.h, k);
  });
}

double nu_from_marchenko(const MarchenkoKernel& mk) {
  if (mk.zero) return 0.0;
  const cplx v = richardson(mk.plus, [&](const MarchenkoLevel& L) {
    return cplx(trapezoid_sum(L.v, L.h) + trapezoid_sum(L.b, L.h), 0.0);
  });
  return v.real();
}

cplx t_inverse_from_marchenko(const MarchenkoKernel& mk, double k) {
  if (k == 0.0) fail(ErrorCode::domain_error, "t_inverse_from_marchenko: k = 0");
  const cplx two_ik(0.0, 2.0 * k);
  return 1.0 - (mk.nu0 + b_hat(mk, k)) / two_ik;
}

cplx alpha_from_marchenko(const MarchenkoKernel& mk, int sign, double k) {
  if (k == 0.0) fail(ErrorCode::domain_error, "alpha_from_marchenko: k = 0");
  const cplx two_ik(0.0, 2.0 * k);
  return 1.0 - mk.nu0 / two_ik + a_hat(mk, sign, k) / two_ik;
}

std::vector<cplx> t_inverse_resonant_form(const MarchenkoKernel& mk, const ResonanceClass& cls,
                                          const std::vector<double>& k_grid) {
  if (cls.resonance != Resonance::resonant)
    fail(ErrorCode::precondition, "t_inverse_resonant_form: potential is not resonant");
  std::vector<cplx> out(k_grid.size(), cplx{});
  if (mk.zero) return out;
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    out[i] = -richardson(mk.plus, [&](const MarchenkoLevel& L) {
      return trapezoid_ft(suffix_integral(L.b, L.h), 0.0, L.h, k_grid[i]);
    });
  }
  return out;
}

double resonant_density_l1(const MarchenkoKernel& mk) {
  if (mk.zero) return 0.0;
  auto c = suffix_integral(mk.plus.fine.b, mk.plus.fine.h);
  for (auto& x : c) x = std::abs(x);
  return trapezoid_sum(c, mk.plus.fine.h);
}

void write_weighted_bounds_csv(const WeightedBoundTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << std::setprecision(17);
  out << "x,int_plus,int_minus,ratio_plus,ratio_minus\r\n";
  for (std::size_t i = 0; i < t.x.size(); ++i)
    out << t.x[i] << ',' << t.plus[i] << ',' << t.minus[i] << ',' << t.ratio_plus[i] << ',' << t.ratio_minus[i] << "\r\n";
}

} // namespace scatspec
