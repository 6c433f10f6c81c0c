//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "oracles/crank_nicolson.hpp"
#include "oracles/fd_eigen.hpp"
#include "oracles/fft_kernels.hpp"
#include "scatspec/apply.hpp"
#include "scatspec/bound_states.hpp"
#include "scatspec/kernel.hpp"
#include "scatspec/marchenko.hpp"
#include "scatspec/scattering.hpp"
#include "scatspec/verify/cz.hpp"
#include "scatspec/verify/pointwise_decay.hpp"
#include "scatspec/verify/tails.hpp"
#include "scatspec/verify/weak11.hpp"
#include "scatspec/verify/weighted_l2.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace scatspec;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

Potential free_potential(double h = 1.0 / 64) { return reference_potential("free", {}, UniformGrid::from_range(-10, 10, h)); }
Potential well() {
  return reference_potential("square_well", {{"depth", -1.0}, {"width", 2.0}},
                             UniformGrid::from_range(-10, 10, 1.0 / 512));
}
Potential sech2() {
  return reference_potential("sech2", {{"amplitude", -2.0}}, UniformGrid::from_range(-20, 20, 1.0 / 256));
}

std::vector<cplx> gaussian(const std::vector<double>& x, double c) {
  std::vector<cplx> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = std::exp(-(x[i] - c) * (x[i] - c));
  return f;
}

void free_oracle(Outcome& o) {
  const auto v = free_potential();
  const auto ks = linspace_step(0.25, 8.0, 0.25);
  const auto xs = linspace_step(-8.0, 8.0, 0.5);
  const auto f = solve_jost(v, ks, xs);
  const auto s = scattering_coefficients(v, f);
  double em = 0.0, es = 0.0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t r = 0; r < xs.size(); ++r)
      em = std::max({em, std::abs(f.m_plus(i, r) - 1.0), std::abs(f.m_minus(i, r) - 1.0)});
    es = std::max({es, std::abs(s.t[i] - 1.0), std::abs(s.r_plus[i]), std::abs(s.r_minus[i])});
  }
  o.require(em <= 1e-10, "m = 1");
  o.require(es <= 1e-10, "t = 1, r = 0");

  const DyadicSystem d(-6, 8);
  const double dx = 1.0 / 16;
  const std::size_t n = 1 << 17;
  std::vector<double> xk, yk{0.0, 0.5};
  for (int i = -32; i <= 32; ++i) xk.push_back(i * 4 * dx);
  double ek = 0.0;
  for (int j : {-3, 0, 4}) {
    const Block b{BlockKind::Phi, j, 0};
    const auto K = assemble_kernel(v, Multiplier::identity(), d, b, xk, yk);
    const auto ref = oracle::inverse_transform([&](double xi) { return cplx(b.weight(d, xi * xi)); }, dx, n);
    for (std::size_t i = 0; i < xk.size(); ++i)
      for (std::size_t q = 0; q < yk.size(); ++q) {
        const long r = std::lround((xk[i] - yk[q]) / dx) + static_cast<long>(n / 2);
        ek = std::max(ek, std::abs(K.values(i, q) - ref[static_cast<std::size_t>(r)]));
      }
  }
  o.require(ek <= 1e-8, "Phi_j kernel vs FFT");
  o.detail << "max|m-1| " << em << ", coeff " << es << ", kernel vs FFT " << ek;
}

void scattering_identities(Outcome& o) {
  const auto ks = linspace_step(0.25, 8.0, 0.25);
  const auto xs = linspace_step(-8.0, 8.0, 0.25);
  // the off-centre well is not even, so the m+ and m- routes to t see different data
  const std::pair<const char*, Potential> cases[] = {
      {"square_well", well()},
      {"sech2", sech2()},
      {"off-centre well", reference_potential("square_well", {{"depth", -1.0}, {"width", 2.0}, {"center", 0.7}},
                                              UniformGrid::from_range(-10, 10, 1.0 / 512))}};
  for (const auto& [name, v] : cases) {
    const auto f = solve_jost(v, ks, xs);
    const auto s = scattering_coefficients(v, f);
    double eu = 0.0, et = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      eu = std::max({eu, std::abs(std::norm(s.t[i]) + std::norm(s.r_plus[i]) - 1.0),
                     std::abs(std::norm(s.t[i]) + std::norm(s.r_minus[i]) - 1.0)});
      et = std::max(et, std::abs(s.t[i] - s.t_minus[i]));
    }
    const auto r = interrelation_residual(f, s);
    o.require(eu <= 1e-6, std::string(name) + " unitarity");
    o.require(r.plus <= 1e-6 && r.minus <= 1e-6, std::string(name) + " interrelation");
    o.require(et <= 1e-6, std::string(name) + " t from m+/m-");
    o.detail << name << ": unitarity " << eu << ", interrelation " << std::max(r.plus, r.minus) << ", t+- " << et
             << "; ";
  }
}

void marchenko_consistency(Outcome& o) {
  const std::pair<const char*, Potential> cases[] = {{"square_well", well()}, {"sech2", sech2()}};
  for (const auto& [name, v] : cases) {
    MarchenkoOptions mo;
    mo.rows_x = linspace_step(-8.0, 8.0, 2.0);
    const auto mk = solve_marchenko(v, mo);
    const auto ks = linspace_step(0.25, 8.0, 0.25);
    const auto f = solve_jost(v, ks, mo.rows_x);
    double e = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
      for (std::size_t r = 0; r < mo.rows_x.size(); ++r)
        e = std::max({e, std::abs(mk.fourier(+1, r, ks[i]) - f.m_plus(i, r)),
                      std::abs(mk.fourier(-1, r, ks[i]) - f.m_minus(i, r))});
    o.require(e <= 1e-5, std::string(name) + " 1 + FT B = m");
    const auto full = solve_marchenko(v);
    const double env = std::exp(v.norms().t_l1) * (1.0 + v.norms().l1_2);
    o.detail << name << ": FT " << e;
    for (int order : {0, 1}) {
      const auto t = weighted_B_bounds(full, order, -8, 8);
      const double c = std::max(t.sup_plus, t.sup_minus);
      o.require(std::isfinite(c) && c <= env, std::string(name) + " B-L1 order " + std::to_string(order));
      o.detail << ", n=" << order << " constant " << c;
    }
    o.detail << " (envelope " << env << "); ";
  }
}

void born_series(Outcome& o) {
  const auto v = well();
  const auto mk = solve_marchenko(v);
  const double k0 = born_threshold(mk);
  double et = 0.0, er = 0.0, worst = 0.0;
  for (double k : {2.0 * k0, 2.5 * k0, 3.0 * k0, 4.0 * k0}) {
    const auto b = born_series_high(mk, k, 20);
    const auto s = scattering_on_grid(v, {k});
    o.require(b.n_used == 20, "20 terms");
    et = std::max(et, std::abs(b.t - s.t[0]) / std::abs(s.t[0]));
    er = std::max({er, std::abs(b.r_plus - s.r_plus[0]) / std::max(std::abs(s.r_plus[0]), 1e-3),
                   std::abs(b.r_minus - s.r_minus[0]) / std::max(std::abs(s.r_minus[0]), 1e-3)});
    for (double r : b.term_ratios) worst = std::max(worst, r);
    worst = std::max(worst, b.ratio);
  }
  o.require(et <= 1e-4 && er <= 1e-4, "partial sums vs direct");
  o.require(worst <= 0.5, "term ratio <= 1/2");
  o.detail << "k0 " << k0 << ", t rel " << et << ", r rel " << er << ", max term ratio " << worst;
}

void weighted_l2(Outcome& o) {
  const auto fr = check_weighted_L2(free_potential(), {0.0, 1.0}, -8, 8);
  o.require(std::abs(fr[0].slope + 0.25) <= 0.05, "free slope s=0");
  o.require(std::abs(fr[1].slope - 0.25) <= 0.05, "free slope s=1");
  o.require(fr[0].pass && fr[1].pass, "free reports");
  o.detail << "free slopes " << fr[0].slope << ", " << fr[1].slope;
  WeightedL2Options wo;
  wo.assert_slope = false;
  const std::pair<const char*, Potential> cases[] = {{"square_well", well()}, {"sech2", sech2()}};
  for (const auto& [name, v] : cases) {
    const auto reps = check_weighted_L2(v, {0.0, 0.75, 1.0}, -8, 8, wo);
    for (const auto& r : reps) o.require(r.pass && std::isfinite(r.sup_ratio), std::string(name) + " " + r.id);
    const auto mid = interpolation_check(reps[0], reps[2], reps[1], 0.0, 1.0, 0.75);
    o.require(mid.pass, std::string(name) + " s=0.75 between envelopes");
    o.detail << "; " << name << " sup ratios " << reps[0].sup_ratio << ", " << reps[1].sup_ratio << ", "
             << reps[2].sup_ratio;
  }
}

void pointwise_decay(Outcome& o) {
  const auto v = well();
  const auto mk = solve_marchenko(v);
  const int j0 = j0_from_threshold(born_threshold(mk), std::abs(mk.nu0) + density_b(mk).l1);
  PointwiseDecayOptions po;
  po.refine = true;
  po.refine_tol = 0.10;
  const auto r = check_pointwise_decay(v, -6, j0 + 4, po);
  o.require(r.pass, "report");
  o.require(r.checks.at("refinement_stable"), "refinement drift < 10%");
  o.detail << "j in [-6, " << j0 + 4 << "], sup ratio " << r.sup_ratio << " (bound " << po.bound << "), drift "
           << r.metrics.at("max_drift");
}

void cz_decomposition(Outcome& o) {
  std::mt19937_64 rng(20261014);
  std::exponential_distribution<double> height(1.0);
  std::uniform_int_distribution<int> size(1, 3000);
  std::bernoulli_distribution spike(0.05), sign(0.5);
  std::uniform_real_distribution<double> alpha(0.05, 5.0);
  int good = 0;
  for (int d = 0; d < 1000; ++d) {
    std::vector<double> f(static_cast<std::size_t>(size(rng)));
    for (auto& v : f) {
      v = spike(rng) ? 50.0 * height(rng) : height(rng);
      if (d % 2 && sign(rng)) v = -v;
    }
    const auto cz = cz_decompose(f, -1.0, std::exp2(-static_cast<int>(d % 7)), alpha(rng));
    good += cz_check(cz).all();
  }
  o.require(good == 1000, "properties (i)-(iii)");
  const auto r = check_kernel_tail_L1(Multiplier::imaginary_power(1.0), free_potential(), 0.0, 0, -3, 8);
  const auto w = check_kernel_tail_L1(Multiplier::imaginary_power(1.0), well(), 0.0, 0, -3, 8, [] {
    KernelTailOptions t;
    t.assert_slope = false;
    return t;
  }());
  o.require(r.checks.at("vanishing_below_jI") && w.checks.at("vanishing_below_jI"), "tail below j_I vanishes");
  o.detail << good << "/1000 draws, tails vanish below j_I (free, square well)";
}

void weak11(Outcome& o) {
  const auto reps = weak11_experiment({Multiplier::imaginary_power(1.0), Multiplier::imaginary_power(3.0)}, well());
  for (const auto& r : reps) {
    const double drift = r.metrics.at("drift");
    o.require(std::isfinite(r.sup_ratio) && r.index.size() == 20, r.id + " finite over 20 members");
    o.require(drift < 0.10, r.id + " drift < 10%");
    o.require(r.pass, r.id);
    o.detail << r.id << ": sup " << r.sup_ratio << ", refined " << r.metrics.at("sup_refined") << ", drift " << drift
             << "; ";
  }
}

void completeness(Outcome& o) {
  const auto v = well();
  const auto x = UniformGrid::from_range(-15, 15, 0.0125).nodes();
  ApplyOptions ao;
  ao.j_lo = -2;
  ao.j_hi = 7;
  const double e = completeness_error(v, x, gaussian(x, 1.0), ao);
  o.require(e <= 1e-3, "identity reproduces f");

  const double t = 0.5;
  const auto xc = UniformGrid::from_range(-30, 30, 1.0 / 128).nodes();
  const auto ref = oracle::heat_evolve([&](double s) { return v.analytic()->evaluate(s); }, xc, gaussian(xc, 1.0), t,
                                       2000);
  const auto xh = UniformGrid::from_range(-12, 12, 1.0 / 64).nodes();
  ApplyOptions ho;
  ho.j_lo = -8;
  ho.j_hi = 7;
  const auto r = apply_multiplier(Multiplier::heat(t), v, xh, gaussian(xh, 1.0), ho);
  double eh = 0.0;
  for (std::size_t i = 0; i < xh.size(); ++i)
    eh = std::max(eh, std::abs(r.value[i] - ref[static_cast<std::size_t>(std::lround((xh[i] + 30.0) * 128))]));
  o.require(eh <= 1e-3, "heat vs Crank-Nicolson");
  o.detail << "completeness " << e << " on x in [-15, 15], heat sup deviation " << eh;
}

void bound_state_count(Outcome& o) {
  const auto v = sech2();
  const auto b = bound_states(v);
  const double ref = oracle::fd_ground_state_richardson(*v.analytic(), 20.0, 1.0 / 32);
  o.require(b.count() == 1, "exactly one eigenvalue");
  if (b.count() >= 1) {
    o.require(std::abs(b.states[0].energy + 1.0) <= 1e-4, "E = -1");
    o.require(std::abs(b.states[0].energy - ref) <= 1e-4, "E vs FD oracle");
    o.detail.precision(10);
    o.detail << "E " << b.states[0].energy << ", FD oracle " << ref;
  }
  const auto g = UniformGrid::from_range(-10, 10, 1.0 / 128);
  std::size_t extra = 0;
  for (const auto& p : {reference_potential("free", {}, g),
                        reference_potential("square_well", {{"depth", 1.0}, {"width", 2.0}}, g),
                        reference_potential("bump", {{"amplitude", 3.0}, {"width", 4.0}}, g),
                        reference_potential("sech2", {{"amplitude", 2.0}}, g)})
    extra += bound_states(p).count();
  o.require(extra == 0, "none for V >= 0");
  o.detail << ", states for V >= 0: " << extra;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  ///< seconds, 0 for none
  std::function<void(Outcome&)> run;
};

} // namespace

int main() {
  const Criterion all[] = {
      {1, "free-case oracle", 5.0, free_oracle},
      {2, "scattering identities", 60.0, scattering_identities},
      {3, "Marchenko-Jost consistency", 0.0, marchenko_consistency},
      {4, "Born series", 0.0, born_series},
      {5, "weighted L2 scaling", 600.0, weighted_l2},
      {6, "pointwise decay envelopes", 0.0, pointwise_decay},
      {7, "CZ decomposition", 0.0, cz_decomposition},
      {8, "weak (1,1) experiment", 0.0, weak11},
      {9, "spectral completeness", 0.0, completeness},
      {10, "bound states", 0.0, bound_state_count},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit > 0 && secs >= c.time_limit) o.require(false, "runtime limit " + std::to_string(c.time_limit) + " s");
    failed += !o.pass;
    std::printf("criterion %2d %-28s %s  %.1f s  %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed ? 1 : 0;
}
