#include "scatspec/dyadic.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace scatspec;

TEST_CASE("bump values") {
  for (auto p : {BumpProfile::exponential, BumpProfile::smoothstep7}) {
    const DyadicSystem d(-4, 6, p);
    CHECK(d.Phi(0.3) == 1.0);
    CHECK(d.Phi(-0.5) == 1.0);
    CHECK(d.Phi(1.0) == 0.0);
    CHECK(d.Phi(-1.7) == 0.0);
    CHECK(d.Phi(0.75) > 0.0);
    CHECK(d.Phi(0.75) < 1.0);
    CHECK(d.Phi(0.6) == d.Phi(-0.6));
    CHECK(smooth_step(0.0, p) == 0.0);
    CHECK(smooth_step(1.0, p) == 1.0);
  }
  CHECK(parse_profile(profile_name(BumpProfile::smoothstep7)) == BumpProfile::smoothstep7);
}

TEST_CASE("partition of unity on the covered annulus") {
  for (auto p : {BumpProfile::exponential, BumpProfile::smoothstep7}) {
    const DyadicSystem d(-3, 6, p);
    CHECK(std::abs(d.partition_sum(5.7) - 1.0) <= 1e-12);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(std::log2(0.125) - 1, 6 - 2);
    for (int i = 0; i < 2000; ++i) {
      const double x = std::exp2(u(rng));
      CHECK(std::abs(d.partition_sum(x) - 1.0) <= 1e-12);
      CHECK(std::abs(d.partition_sum(-x) - 1.0) <= 1e-12);
    }
    // Φ + Σ_{j=1}^{b} φ_j = 1 near the origin
    std::uniform_real_distribution<double> w(-std::exp2(4), std::exp2(4));
    for (int i = 0; i < 2000; ++i) {
      const double x = w(rng);
      double s = d.Phi(x);
      for (int j = 1; j <= 6; ++j) s += d.phi_j(j, x);
      CHECK(std::abs(s - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("support of phi_j") {
  const DyadicSystem d(-8, 8);
  for (int j = -6; j <= 6; ++j) {
    const double a = std::exp2(j - 2), b = std::exp2(j);
    for (double f : {1.0001, 1.5, 3.0, 100.0}) CHECK(d.phi_j(j, b * f) == 0.0);
    for (double f : {0.9999, 0.5, 0.01, 0.0}) CHECK(d.phi_j(j, a * f) == 0.0);
    CHECK(d.phi_j(j, 0.5 * b) > 0.0);
    // λ-form on the k-axis
    CHECK(d.psi_j(j, DyadicSystem::k_hi(j) * 1.0001) == 0.0);
    CHECK(d.psi_j(j, DyadicSystem::k_lo(j) * 0.9999) == 0.0);
    CHECK(DyadicSystem::k_hi(j) == doctest::Approx(std::sqrt(b)));
    CHECK(DyadicSystem::k_lo(j) == doctest::Approx(std::sqrt(a)));
    CHECK(DyadicSystem::lambda(j) == doctest::Approx(std::exp2(-j / 2.0)));
    // telescoping
    for (double x : {0.3 * b, 0.7 * b, 1.3 * b}) CHECK(d.phi_j(j, x) == doctest::Approx(d.Phi_j(j, x) - d.Phi_j(j - 1, x)));
  }
}

TEST_CASE("chi is supported in [1/4, 4]") {
  const DyadicSystem d(0, 1);
  CHECK(d.chi(0.25) == 0.0);
  CHECK(d.chi(4.0) == 0.0);
  CHECK(d.chi(-1.0) == 0.0);
  CHECK(d.chi(1.0) == 1.0);
}
