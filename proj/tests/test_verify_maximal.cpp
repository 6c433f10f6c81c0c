#include "scatspec/verify/maximal.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace scatspec;

namespace {

// sup_r (2r)^{-1} |[x-r, x+r] ∩ [a, b]| by scanning r on the exact function
double scan_indicator_maximal(double a, double b, double x) {
  double best = 0.0;
  for (int i = 1; i <= 2000000; ++i) {
    const double r = 1e-5 * i;
    const double len = std::max(0.0, std::min(b, x + r) - std::max(a, x - r));
    best = std::max(best, len / (2 * r));
  }
  return best;
}

} // namespace

TEST_CASE("constants are fixed points") {
  const std::vector<double> f(301, 2.5);
  for (double m : hl_maximal(f)) CHECK(m == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("indicator of [0,1] seen from x = 2") {
  const double scan = scan_indicator_maximal(0.0, 1.0, 2.0);
  CHECK(scan == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(indicator_maximal(0.0, 1.0, 2.0) == doctest::Approx(scan).epsilon(1e-9));
  CHECK(indicator_maximal(0.0, 1.0, 0.5) == 1.0);

  // cell centres (i + 1/2) dx on [-8, 8); f is 1 on the cells inside [0, 1]
  const double dx = 1.0 / 64;
  std::vector<double> f(1024, 0.0);
  for (std::size_t i = 512; i < 576; ++i) f[i] = 1.0;
  const auto m = hl_maximal(f);
  const std::size_t at = 512 + 128;  // the cell whose centre is 2 + dx/2
  const double x = -8.0 + (static_cast<double>(at) + 0.5) * dx;
  CHECK(m[at] <= indicator_maximal(0.0, 1.0, x - 2 * dx));
  CHECK(m[at] >= indicator_maximal(0.0, 1.0, x + 2 * dx));
}

TEST_CASE("maximal function majorises Gaussian mollifiers") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> n(0.0, 1.0);
  std::bernoulli_distribution spike(0.03);
  for (int d = 0; d < 50; ++d) {
    std::vector<double> f(600);
    for (auto& v : f) v = spike(rng) ? 30.0 * n(rng) : n(rng);
    const auto m = hl_maximal(f);
    for (double s : {0.5, 1.0, 3.0, 10.0, 40.0}) {
      const auto g = gaussian_mollify(f, s);
      for (std::size_t i = 0; i < f.size(); ++i) REQUIRE(g[i] <= m[i] * (1 + 1e-12));
    }
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(m[i] >= std::abs(f[i]));
  }
}
