#include "oracles/ode_shooting.hpp"
#include "oracles/square_well.hpp"
#include "scatspec/marchenko.hpp"
#include "scatspec/scattering.hpp"

#include <doctest.h>

#include <cmath>

using namespace scatspec;

namespace {

std::vector<double> k_range(double lo, double hi, double step) { return linspace_step(lo, hi, step); }

Potential well(double depth = -1.0, double width = 2.0, double h = 1.0 / 512) {
  return reference_potential("square_well", {{"depth", depth}, {"width", width}},
                             UniformGrid::from_range(-10, 10, h));
}
Potential sech2() {
  return reference_potential("sech2", {{"amplitude", -2.0}}, UniformGrid::from_range(-20, 20, 1.0 / 256));
}

// u'' = V u from x = L with u = 1, u' = 0; returns -u'(-L), the zero-energy Wronskian.
double zero_energy_wronskian(const AnalyticForm& form, double L) {
  const int n = 400000;
  const double h = -2.0 * L / n;
  double u = 1.0, p = 0.0, x = L;
  for (int i = 0; i < n; ++i) {
    auto V = [&](double s) { return form.evaluate(s); };
    const double k1u = p, k1p = V(x) * u;
    const double k2u = p + h / 2 * k1p, k2p = V(x + h / 2) * (u + h / 2 * k1u);
    const double k3u = p + h / 2 * k2p, k3p = V(x + h / 2) * (u + h / 2 * k2u);
    const double k4u = p + h * k3p, k4p = V(x + h) * (u + h * k3u);
    u += h / 6 * (k1u + 2 * k2u + 2 * k3u + k4u);
    p += h / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
    x = L + (i + 1) * h;
  }
  return -p;
}

} // namespace

TEST_CASE("free scattering data") {
  const auto v = reference_potential("free", {}, UniformGrid::from_range(-5, 5, 0.125));
  const auto s = scattering_on_grid(v, {0.25, 1.0, 5.0});
  for (std::size_t i = 0; i < s.k.size(); ++i) {
    CHECK(s.t[i] == cplx(1.0));
    CHECK(s.r_plus[i] == cplx(0.0));
    CHECK(s.r_minus[i] == cplx(0.0));
    CHECK(s.w[i] == cplx(0.0, -2.0 * s.k[i]));
  }
  CHECK(s.nu == 0.0);
  CHECK(s.resonance == Resonance::resonant);
  for (const auto& a : alpha(s, +1)) CHECK(a == cplx(1.0));
  for (const auto& a : alpha(s, -1)) CHECK(a == cplx(1.0));
  const auto cls = classify_resonance(s);
  CHECK(cls.resonance == Resonance::resonant);
  const auto rep = scattering_asymptotics_report(scattering_on_grid(v, k_range(0.05, 8.0, 0.05)));
  CHECK(rep.low_k_times_tdot == 0.0);
  CHECK(rep.high_k2_times_tdot == 0.0);
}

TEST_CASE("square well against plane-wave matching") {
  for (double depth : {-1.0, 2.5}) {
    CAPTURE(depth);
    const auto v = well(depth);
    const auto ks = k_range(0.25, 8.0, 0.25);
    const auto s = scattering_on_grid(v, ks);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const auto o = oracle::square_well_scattering(depth, 2.0, 0.0, ks[i]);
      CAPTURE(ks[i]);
      CHECK(std::abs(s.t[i] - o.t) <= 1e-5 * std::abs(o.t));
      CHECK(std::abs(s.r_plus[i] - o.r_plus) <= 1e-5 * std::max(std::abs(o.r_plus), 1e-3));
      CHECK(std::abs(s.r_minus[i] - o.r_minus) <= 1e-5 * std::max(std::abs(o.r_minus), 1e-3));
    }
  }
}

TEST_CASE("sech2 is reflectionless") {
  const auto v = sech2();
  const auto ks = k_range(0.5, 8.0, 0.25);
  const auto s = scattering_on_grid(v, ks);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    CHECK(std::abs(s.r_plus[i]) <= 1e-5);
    CHECK(std::abs(s.r_minus[i]) <= 1e-5);
    CHECK(std::abs(std::abs(s.t[i]) - 1.0) <= 1e-5);
  }
  // the shooting oracle sees the same
  for (double k : {0.5, 2.0}) {
    const auto o = oracle::shoot(*v.analytic(), 20.0, 0.0, k);
    CHECK(std::abs(o.r_plus) <= 1e-5);
    CHECK(std::abs(std::abs(o.t) - 1.0) <= 1e-5);
  }
}

TEST_CASE("unitarity, bounds and conjugation") {
  for (const auto& v : {well(), well(3.0, 0.5), sech2()}) {
    std::vector<double> ks = k_range(0.25, 8.0, 0.25);
    std::vector<double> neg;
    for (double k : ks) neg.push_back(-k);
    const auto s = scattering_on_grid(v, ks);
    const auto sn = scattering_on_grid(v, neg);
    for (std::size_t i = 0; i < ks.size(); ++i) {
      CHECK(std::abs(std::norm(s.t[i]) + std::norm(s.r_plus[i]) - 1.0) <= 1e-6);
      CHECK(std::abs(std::norm(s.t[i]) + std::norm(s.r_minus[i]) - 1.0) <= 1e-6);
      CHECK(std::abs(s.t[i]) <= 1.0 + 1e-8);
      CHECK(std::abs(s.r_plus[i]) <= 1.0 + 1e-8);
      CHECK(std::abs(s.t[i] - s.t_minus[i]) <= 1e-6);
      CHECK(std::abs(sn.t[i] - std::conj(s.t[i])) <= 1e-10);
      CHECK(std::abs(sn.r_plus[i] - std::conj(s.r_plus[i])) <= 1e-10);
      CHECK(std::abs(sn.r_minus[i] - std::conj(s.r_minus[i])) <= 1e-10);
      CHECK(std::abs(s.w[i] - cplx(0.0, -2.0 * ks[i]) / s.t[i]) <= 1e-12 * std::abs(s.w[i]));
    }
  }
}

TEST_CASE("interrelation identities") {
  const auto ks = k_range(0.25, 8.0, 0.25);
  const auto xs = linspace_step(-8.0, 8.0, 0.25);
  for (const auto& v : {well(), sech2()}) {
    const auto f = solve_jost(v, ks, xs);
    const auto s = scattering_coefficients(v, f);
    const auto r = interrelation_residual(f, s);
    MESSAGE("residuals " << r.plus << " " << r.minus);
    CHECK(r.plus <= 1e-6);
    CHECK(r.minus <= 1e-6);
  }
  const auto free = reference_potential("free", {}, UniformGrid::from_range(-8, 8, 0.25));
  const auto f = solve_jost(free, ks, xs);
  const auto r = interrelation_residual(f, scattering_coefficients(free, f));
  CHECK(r.plus == 0.0);
  CHECK(r.minus == 0.0);
}

TEST_CASE("alpha two ways and its large-k envelope") {
  const auto v = well();
  const auto mk = solve_marchenko(v);
  const auto ks = k_range(0.5, 8.0, 0.5);
  const auto s = scattering_on_grid(v, ks);
  for (int sign : {+1, -1}) {
    const auto a = alpha(s, sign);
    const double env = std::abs(mk.nu0) + density_a(mk, sign).l1;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      CAPTURE(ks[i]);
      const cplx b = alpha_from_marchenko(mk, sign, ks[i]);
      CHECK(std::abs(a[i] - b) <= 1e-5);
      CHECK(std::abs(a[i] - 1.0) <= env / (2.0 * ks[i]));
    }
  }
}

TEST_CASE("Born series above the threshold") {
  const auto free = reference_potential("free", {}, UniformGrid::from_range(-5, 5, 0.125));
  const auto bf = born_series_high(solve_marchenko(free), 3.0);
  CHECK(bf.t == cplx(1.0));
  CHECK(bf.r_plus == cplx(0.0));
  CHECK(bf.r_minus == cplx(0.0));

  const auto v = well();
  const auto mk = solve_marchenko(v);
  const double k0 = born_threshold(mk);
  CHECK(k0 >= 1.0);
  for (double k : {2.0 * k0, 3.0 * k0}) {
    const auto b = born_series_high(mk, k, 20);
    const auto s = scattering_on_grid(v, {k});
    CHECK(b.n_used == 20);
    CHECK(std::abs(b.t - s.t[0]) <= 1e-4 * std::abs(s.t[0]));
    CHECK(std::abs(b.r_plus - s.r_plus[0]) <= 1e-4 * std::max(std::abs(s.r_plus[0]), 1e-3));
    CHECK(std::abs(b.r_minus - s.r_minus[0]) <= 1e-4 * std::max(std::abs(s.r_minus[0]), 1e-3));
    const double q = (std::abs(mk.nu0) + density_b(mk).l1) / (2.0 * k);
    CHECK(q <= 0.5);
    CHECK(b.ratio <= q + 1e-12);
    for (double r : b.term_ratios) CHECK(r <= q + 1e-12);
  }
  CHECK((std::abs(mk.nu0) + density_b(mk).l1) / (2.0 * k0) <= 0.5);
}

TEST_CASE("resonance classification") {
  // a weak positive bump with unit mass is not resonant
  const auto g = UniformGrid::from_range(-10, 10, 1.0 / 256);
  auto bump = reference_potential("bump", {{"amplitude", 1.0}, {"width", 2.0}}, g);
  const double scale = 1.0 / bump.norms().integral;
  bump = reference_potential("bump", {{"amplitude", scale}, {"width", 2.0}}, g);
  CHECK(bump.norms().integral == doctest::Approx(1.0).epsilon(1e-12));
  const auto sb = scattering_on_grid(bump, {0.5});
  CHECK(sb.resonance == Resonance::non_resonant);
  CHECK(sb.nu > 0.0);
  CHECK(sb.nu >= sb.nu0);  // m+(·,0) >= 1 when V >= 0
  CHECK(std::abs(sb.nu - zero_energy_wronskian(*bump.analytic(), 10.0)) <= 1e-6);

  // -2 sech² has a bounded zero-energy solution (tanh); the oracle agrees
  const auto v = sech2();
  const auto s = scattering_on_grid(v, {0.5});
  const double nu_oracle = zero_energy_wronskian(*v.analytic(), 20.0);
  MESSAGE("sech2: nu = " << s.nu << ", oracle " << nu_oracle);
  CHECK(std::abs(s.nu - nu_oracle) <= 1e-6);
  CHECK(s.resonance == (std::abs(nu_oracle) < s.resonance_threshold ? Resonance::resonant : Resonance::non_resonant));

  // the Marchenko form of ν agrees
  const auto w = well();
  const auto mk = solve_marchenko(w);
  const auto cls = classify_resonance(scattering_on_grid(w, {0.5}), &mk);
  CHECK(cls.resonance == Resonance::non_resonant);
  CHECK(std::abs(cls.nu - cls.nu_marchenko) <= 1e-6);
  CHECK(std::abs(cls.nu - zero_energy_wronskian(*w.analytic(), 10.0)) <= 1e-6);
}

TEST_CASE("derivative asymptotics are finite") {
  const auto v = well();
  const auto s = scattering_on_grid(v, k_range(0.025, 8.0, 0.025));
  const auto r = scattering_asymptotics_report(s);
  MESSAGE("sup|k r'| = " << r.low_k_times_rdot << ", sup|k^2 t'| = " << r.high_k2_times_tdot);
  CHECK(std::isfinite(r.low_k_times_rdot));
  CHECK(std::isfinite(r.high_k2_times_tdot));
  CHECK(r.high_k2_times_tdot > 0.0);
}

TEST_CASE("Born threshold index") {
  CHECK(j0_from_threshold(1.0, 0.0) >= 2);
  CHECK(j0_from_threshold(4.0, 1.0) >= 2 + 4);
  CHECK(j0_from_threshold(1.0, 64.0) >= 12);
}
