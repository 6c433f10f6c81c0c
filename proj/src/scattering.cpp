#include "scatspec/scattering.hpp"

#include "scatspec/error.hpp"
#include "scatspec/marchenko.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>

namespace scatspec {

namespace {

const cplx I(0.0, 1.0);

struct ZeroLimit {
  cplx t, r;
};

//! k → 0 limits: t(0) = 0, r(0) = -1 unless ν = 0, where the first
//! derivatives of the totals take over.
ZeroLimit zero_limit(const JostTotals& tot, bool resonant) {
  if (!resonant) return {0.0, -1.0};
  const cplx t = 1.0 / (1.0 - tot.ds / (2.0 * I));
  return {t, t * tot.ds1 / (2.0 * I)};
}

} // namespace

ScatteringData scattering_coefficients(const Potential& v, const JostField& jost, const ScatteringOptions& opt) {
  if (jost.potential_hash != v.hash()) fail(ErrorCode::inconsistency, "scattering: Jost field belongs to another potential");
  ScatteringData s;
  s.k = jost.k;
  s.potential_hash = v.hash();
  s.nu0 = v.norms().integral;
  s.l1_1 = v.norms().l1_1;
  s.resonance_threshold = opt.resonance_rel * (1.0 + s.l1_1);

  JostTotals zero_plus, zero_minus;
  bool have_zero = false;
  for (std::size_t i = 0; i < jost.k.size(); ++i)
    if (jost.k[i] == 0.0) {
      zero_plus = jost.plus[i];
      zero_minus = jost.minus[i];
      have_zero = true;
    }
  if (!have_zero) {
    JostOptions o = jost.options;
    o.derivative = false;
    const JostField z = solve_jost(v, {0.0}, {}, o);
    zero_plus = z.plus[0];
    zero_minus = z.minus[0];
  }
  s.nu = zero_plus.s.real();
  s.resonance = std::abs(s.nu) < s.resonance_threshold ? Resonance::resonant : Resonance::non_resonant;
  const bool res = s.resonance == Resonance::resonant;

  const std::size_t n = s.k.size();
  s.t.resize(n);
  s.t_minus.resize(n);
  s.r_plus.resize(n);
  s.r_minus.resize(n);
  s.w.resize(n);
  s.cross_discrepancy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = s.k[i];
    const JostTotals& P = jost.plus[i];
    const JostTotals& M = jost.minus[i];
    if (k == 0.0) {
      const ZeroLimit lp = zero_limit(P, res), lm = zero_limit(M, res);
      s.t[i] = lp.t;
      s.t_minus[i] = lm.t;
      s.r_minus[i] = lp.r;
      s.r_plus[i] = lm.r;
      s.w[i] = P.s;
    } else {
      const cplx two_ik = 2.0 * I * k;
      s.t[i] = 1.0 / (1.0 - P.s / two_ik);
      s.t_minus[i] = 1.0 / (1.0 - M.s / two_ik);
      s.r_minus[i] = s.t[i] * P.s1 / two_ik;
      s.r_plus[i] = s.t[i] * M.s1 / two_ik;
      s.w[i] = -two_ik + P.s;
    }
    s.cross_discrepancy[i] = std::abs(s.t[i] - s.t_minus[i]);
    if (s.cross_discrepancy[i] > 100.0 * opt.tol)
      fail(ErrorCode::inconsistency, "t from m+ and m- differ by " + std::to_string(s.cross_discrepancy[i]) +
                                         " at k=" + std::to_string(k));
  }
  return s;
}

ScatteringData scattering_on_grid(const Potential& v, const std::vector<double>& k_grid, const JostOptions& jopt,
                                  const ScatteringOptions& opt) {
  return scattering_coefficients(v, solve_jost(v, k_grid, {}, jopt), opt);
}

std::vector<cplx> alpha(const ScatteringData& scat, int sign) {
  if (sign != 1 && sign != -1) fail(ErrorCode::invalid_argument, "alpha: sign must be +1 or -1");
  std::vector<cplx> out(scat.k.size());
  for (std::size_t i = 0; i < scat.k.size(); ++i) {
    if (scat.k[i] == 0.0) fail(ErrorCode::domain_error, "alpha: k = 0 is excluded");
    const cplx r = sign > 0 ? scat.r_plus[i] : scat.r_minus[i];
    out[i] = (1.0 + r) / scat.t[i];
  }
  return out;
}

ResonanceClass classify_resonance(const ScatteringData& scat, const MarchenkoKernel* mk, double rel) {
  ResonanceClass c;
  c.nu = scat.nu;
  c.threshold = rel * (1.0 + scat.l1_1);
  c.resonance = std::abs(c.nu) < c.threshold ? Resonance::resonant : Resonance::non_resonant;
  c.nu_marchenko = std::nan("");
  if (mk) {
    if (mk->potential_hash != scat.potential_hash)
      fail(ErrorCode::inconsistency, "classify_resonance: Marchenko kernel belongs to another potential");
    c.nu_marchenko = nu_from_marchenko(*mk);
    if (std::abs(c.nu_marchenko - c.nu) > 1e-6)
      fail(ErrorCode::inconsistency, "ν from Jost (" + std::to_string(c.nu) + ") and Marchenko (" +
                                         std::to_string(c.nu_marchenko) + ") disagree");
  }
  return c;
}

InterrelationResidual interrelation_residual(const JostField& jost, const ScatteringData& scat) {
  InterrelationResidual out;
  if (jost.k != scat.k) fail(ErrorCode::inconsistency, "interrelation_residual: k grids differ");
  for (std::size_t i = 0; i < jost.k.size(); ++i) {
    const double k = jost.k[i];
    if (k == 0.0) continue;
    for (std::size_t j = 0; j < jost.x.size(); ++j) {
      const double x = jost.x[j];
      const cplx mp = jost.m_plus(i, j), mm = jost.m_minus(i, j);
      const cplx e = std::polar(1.0, 2.0 * k * x);
      out.plus = std::max(out.plus, std::abs(scat.t[i] * mm - e * scat.r_plus[i] * mp - std::conj(mp)));
      out.minus = std::max(out.minus, std::abs(scat.t[i] * mp - std::conj(e) * scat.r_minus[i] * mm - std::conj(mm)));
    }
  }
  return out;
}

double born_threshold(const MarchenkoKernel& mk) { return std::max(1.0, std::abs(mk.nu0) + density_b(mk).l1); }

BornSeriesResult born_series_high(const MarchenkoKernel& mk, double k, std::size_t n_terms) {
  BornSeriesResult out;
  out.k0 = born_threshold(mk);
  if (!(std::abs(k) > out.k0))
    fail(ErrorCode::domain_error, "born_series_high: |k| = " + std::to_string(std::abs(k)) + " is not above k0 = " +
                                      std::to_string(out.k0));
  const cplx two_ik = 2.0 * I * k;
  const cplx bh = b_hat(mk, k);
  const cplx q = mk.nu0 + bh;
  const cplx z = q / two_ik;
  out.ratio = std::abs(q) / (2.0 * std::abs(k));
  // t = Σ_{n≥0} z^n;  r± = (b̂ + â±) Σ_{n≥1} (2ik)^{-n} (ν0 + b̂)^{n-1}.
  cplx term = 1.0, partial_t = 0.0, partial_r = 0.0;
  for (std::size_t n = 0; n <= n_terms; ++n) {
    partial_t += term;
    if (n < n_terms) partial_r += term;
    const cplx next = term * z;
    if (n < n_terms) out.term_ratios.push_back(std::abs(term) > 0.0 ? std::abs(next) / std::abs(term) : 0.0);
    term = next;
  }
  out.t = partial_t;
  out.r_plus = (bh + a_hat(mk, 1, k)) / two_ik * partial_r;
  out.r_minus = (bh + a_hat(mk, -1, k)) / two_ik * partial_r;
  out.n_used = n_terms;
  return out;
}

void assign_born_threshold(ScatteringData& scat, const MarchenkoKernel& mk) {
  const double th = born_threshold(mk);
  scat.k0 = th;
  double best = INFINITY;
  for (double k : scat.k)
    if (k >= th && k < best) best = k;
  if (std::isfinite(best)) scat.k0 = best;
}

int j0_from_threshold(double k0, double dsigma_mass) {
  if (!(k0 > 0.0)) fail(ErrorCode::invalid_argument, "j0_from_threshold: k0 must be positive");
  const int first = 2 + static_cast<int>(std::ceil(2.0 * std::log2(k0) - 1e-12));
  if (!(dsigma_mass > 0.0)) return first;
  const int second = static_cast<int>(std::ceil(2.0 * std::log2(dsigma_mass) - 1e-12));
  return std::max(first, second);
}

AsymptoticsReport scattering_asymptotics_report(const ScatteringData& scat, double lo_a, double lo_b, double hi_a,
                                                double hi_b) {
  AsymptoticsReport rep;
  std::vector<double> lx, ly, hx, hy;
  const auto& k = scat.k;
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    if (k[i] <= 0.0) continue;
    const double dk = k[i + 1] - k[i - 1];
    if (!(dk > 0.0)) continue;
    const double tdot = std::abs(scat.t[i + 1] - scat.t[i - 1]) / dk;
    const double rdot = std::abs(scat.r_plus[i + 1] - scat.r_plus[i - 1]) / dk;
    if (k[i] >= lo_a && k[i] <= lo_b) {
      rep.low_k_times_tdot = std::max(rep.low_k_times_tdot, k[i] * tdot);
      rep.low_k_times_rdot = std::max(rep.low_k_times_rdot, k[i] * rdot);
      if (tdot > 0.0) {
        lx.push_back(std::log(k[i]));
        ly.push_back(std::log(tdot));
      }
    }
    if (k[i] >= hi_a && k[i] <= hi_b) {
      rep.high_k2_times_tdot = std::max(rep.high_k2_times_tdot, k[i] * k[i] * tdot);
      if (tdot > 0.0) {
        hx.push_back(std::log(k[i]));
        hy.push_back(std::log(tdot));
      }
    }
  }
  auto fit = [](const std::vector<double>& x, const std::vector<double>& y, double& slope, double& resid) {
    if (x.size() < 2) return;
    const auto [s, c] = fit_line(x, y);
    slope = s;
    for (std::size_t i = 0; i < x.size(); ++i) resid = std::max(resid, std::abs(y[i] - (s * x[i] + c)));
  };
  fit(lx, ly, rep.low_slope, rep.low_fit_residual);
  fit(hx, hy, rep.high_slope, rep.high_fit_residual);
  return rep;
}

void write_scattering_csv(const ScatteringData& scat, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << std::setprecision(17);
  out << "k,re_t,im_t,re_r_plus,im_r_plus,re_r_minus,im_r_minus,unitarity\r\n";
  for (std::size_t i = 0; i < scat.k.size(); ++i) {
    const cplx t = scat.t[i], rp = scat.r_plus[i], rm = scat.r_minus[i];
    out << scat.k[i] << ',' << t.real() << ',' << t.imag() << ',' << rp.real() << ',' << rp.imag() << ','
        << rm.real() << ',' << rm.imag() << ',' << std::norm(t) + std::norm(rp) << "\r\n";
  }
}

void write_scattering_manifest(const ScatteringData& scat, const std::string& path) {
  nlohmann::ordered_json j;
  j["potential_hash"] = scat.potential_hash;
  j["nu"] = scat.nu;
  j["nu0"] = scat.nu0;
  j["resonance"] = scat.resonance == Resonance::resonant;
  j["resonance_threshold"] = scat.resonance_threshold;
  j["k0"] = scat.k0;
  j["k_count"] = scat.k.size();
  double worst = 0.0;
  for (double d : scat.cross_discrepancy) worst = std::max(worst, d);
  j["max_cross_discrepancy"] = worst;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << j.dump(2) << "\n";
}

} // namespace scatspec
