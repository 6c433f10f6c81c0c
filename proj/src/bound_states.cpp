#include "scatspec/bound_states.hpp"

#include "scatspec/error.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace scatspec {

namespace {

struct FdResult {
  std::vector<double> w;
  std::vector<double> z;  // column-major, n × m
  std::size_t n = 0;
};

//! Eigenpairs of the tridiagonal -D²_h + V below zero.
FdResult fd_eigen(const std::vector<double>& v, double h, double vmin) {
  FdResult r;
  const auto n = static_cast<lapack_int>(v.size());
  r.n = v.size();
  std::vector<double> d(v.size()), e(v.size() > 0 ? v.size() - 1 : 0, -1.0 / (h * h));
  for (std::size_t i = 0; i < v.size(); ++i) d[i] = 2.0 / (h * h) + v[i];
  lapack_int m = 0;
  std::vector<double> w(v.size()), z;
  std::vector<lapack_int> isuppz(2 * v.size());
  const double vl = vmin - 1.0, vu = 0.0;
  // Count first to size the eigenvector buffer.
  lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'N', 'V', n, std::vector<double>(d).data(),
                                   std::vector<double>(e).data(), vl, vu, 0, 0, 0.0, &m, w.data(), nullptr, 1,
                                   isuppz.data());
  if (info != 0) fail(ErrorCode::non_convergence, "dstevr failed with info=" + std::to_string(info));
  if (m == 0) return r;
  z.assign(v.size() * static_cast<std::size_t>(m + 1), 0.0);
  lapack_int m2 = 0;
  info = LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'V', n, d.data(), e.data(), vl, vu, 0, 0, 0.0, &m2, w.data(), z.data(),
                        n, isuppz.data());
  if (info != 0) fail(ErrorCode::non_convergence, "dstevr failed with info=" + std::to_string(info));
  r.w.assign(w.begin(), w.begin() + m2);
  z.resize(v.size() * static_cast<std::size_t>(m2));
  r.z = std::move(z);
  return r;
}

//! Negative eigenvalues of the lattice operator on the whole line = zeros of the
//! zero-energy solution that is constant to the right of the support, counting
//! the zero of its linear continuation on the left.
std::size_t oscillation_count(const std::vector<double>& v, double h) {
  double up = 1.0, u = 1.0;
  std::size_t zeros = 0;
  for (std::size_t i = v.size(); i-- > 0;) {
    const double down = 2.0 * u - up + h * h * v[i] * u;
    if ((down < 0) != (u < 0) || down == 0.0) ++zeros;
    up = u;
    u = down;
    const double m = std::max(std::abs(u), std::abs(up));
    if (m > 1e100) {
      u /= m;
      up /= m;
    }
  }
  // u is the leftmost value, up its right neighbour: heading to zero further left?
  if (u != 0.0 && (u > 0) == (up > 0) && std::abs(u) < std::abs(up)) ++zeros;
  return zeros;
}

} // namespace

double BoundState::value(const UniformGrid& grid, double x) const {
  if (u.empty()) return 0.0;
  const double kappa = std::sqrt(std::max(0.0, -energy));
  const double pos = (x - grid.x_min) / grid.step;
  const double last = static_cast<double>(u.size() - 1);
  if (pos <= 0.0) return u.front() * std::exp(kappa * pos * grid.step);
  if (pos >= last) return u.back() * std::exp(-kappa * (pos - last) * grid.step);
  const auto i = static_cast<std::size_t>(pos);
  const double th = pos - static_cast<double>(i);
  return (1.0 - th) * u[i] + th * u[std::min(i + 1, u.size() - 1)];
}

std::vector<double> BoundStateSet::energies() const {
  std::vector<double> e;
  for (const auto& s : states) e.push_back(s.energy);
  return e;
}

BoundStateSet bound_states(const Potential& v, double eig_tol, const BoundStateOptions& opt) {
  if (!(eig_tol > 0.0)) fail(ErrorCode::invalid_argument, "bound_states: eig_tol must be positive");
  BoundStateSet out;
  const UniformGrid& g = v.grid();
  const std::vector<double>& s = v.samples();
  double vmin = 0.0;
  for (double x : s) vmin = std::min(vmin, x);
  std::size_t stride = 1;
  while (g.step * static_cast<double>(2 * stride) <= opt.target_step * (1.0 + 1e-12)) stride *= 2;
  const double h = g.step * static_cast<double>(stride);
  // Fine grid: every stride-th sample from index 0, trimmed to an even node count minus one
  // so the 2h grid shares the end points.
  std::vector<double> base;
  for (std::size_t i = 0; i < g.count; i += stride) base.push_back(s[i]);
  if (base.size() % 2 == 0) base.pop_back();
  if (vmin >= 0.0 || base.size() < 5) {
    out.grid = UniformGrid{g.x_min, h, base.size()};
    return out;
  }
  const std::size_t expected = oscillation_count(base, h);
  std::size_t pad = 0;
  for (std::size_t attempt = 0;; ++attempt) {
    std::vector<double> vf(pad, 0.0);
    vf.insert(vf.end(), base.begin(), base.end());
    vf.insert(vf.end(), pad, 0.0);
    const double x0 = g.x_min - static_cast<double>(pad) * h;
    std::vector<double> vc;
    for (std::size_t i = 0; i < vf.size(); i += 2) vc.push_back(vf[i]);
    FdResult fine = fd_eigen(vf, h, vmin);
    FdResult coarse = fd_eigen(vc, 2.0 * h, vmin);
    bool tails_ok = true;
    std::vector<BoundState> states;
    for (std::size_t m = 0; m < fine.w.size(); ++m) {
      BoundState b;
      b.energy_fd = fine.w[m];
      b.energy = m < coarse.w.size() ? (4.0 * fine.w[m] - coarse.w[m]) / 3.0 : fine.w[m];
      b.u.assign(fine.z.begin() + static_cast<long>(m * fine.n), fine.z.begin() + static_cast<long>((m + 1) * fine.n));
      double norm = 0.0, peak = 0.0;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < b.u.size(); ++i) {
        norm += b.u[i] * b.u[i] * h;
        if (std::abs(b.u[i]) > peak) {
          peak = std::abs(b.u[i]);
          arg = i;
        }
      }
      const double scale = (b.u[arg] < 0 ? -1.0 : 1.0) / std::sqrt(norm);
      for (auto& x : b.u) x *= scale;
      peak *= std::abs(scale);
      if (std::max(std::abs(b.u.front()), std::abs(b.u.back())) > opt.tail_fraction * peak) tails_ok = false;
      double res = 0.0;
      for (std::size_t i = 0; i < b.u.size(); ++i) {
        const double l = i > 0 ? b.u[i - 1] : 0.0, r = i + 1 < b.u.size() ? b.u[i + 1] : 0.0;
        const double hu = (2.0 * b.u[i] - l - r) / (h * h) + vf[i] * b.u[i] - b.energy_fd * b.u[i];
        res += hu * hu * h;
      }
      b.residual = std::sqrt(res);
      b.unreliable = std::abs(b.energy) < 10.0 * eig_tol || m >= coarse.w.size();
      states.push_back(std::move(b));
    }
    // a state near the threshold only appears once the box is wide enough
    if ((tails_ok && states.size() >= expected) || attempt >= opt.max_padding) {
      out.grid = UniformGrid{x0, h, vf.size()};
      out.states = std::move(states);
      return out;
    }
    pad = pad == 0 ? base.size() / 2 + 1 : 2 * pad;
    if (pad % 2 != 0) ++pad;
  }
}

} // namespace scatspec
