#include "oracles/fft_kernels.hpp"
#include "scatspec/error.hpp"
#include "scatspec/kernel.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

using namespace scatspec;

namespace {

Potential well() {
  return reference_potential("square_well", {{"depth", -1.0}, {"width", 2.0}},
                             UniformGrid::from_range(-10, 10, 1.0 / 512));
}

} // namespace

TEST_CASE("free kernels match the FFT evaluation") {
  const auto v = reference_potential("free", {}, UniformGrid::from_range(-10, 10, 1.0 / 64));
  const DyadicSystem d(-6, 8);
  const double dx = 1.0 / 16;
  const std::size_t n = 1 << 17;
  std::vector<double> xs, ys{0.0, 0.5};
  for (int i = -32; i <= 32; ++i) xs.push_back(i * 4 * dx);
  struct Case {
    Block b;
    Multiplier mu;
  };
  const std::vector<Case> cases{
      {{BlockKind::Phi, 0, 0}, Multiplier::identity()},
      {{BlockKind::Phi, 4, 0}, Multiplier::identity()},
      {{BlockKind::Phi, -3, 0}, Multiplier::identity()},
      {{BlockKind::phi, 2, 0}, Multiplier::identity()},
      {{BlockKind::phi, 0, 0}, Multiplier::imaginary_power(1.0)},
      {{BlockKind::phi_cut, 3, 2}, Multiplier::heat(0.1)},
      {{BlockKind::high_cut, 5, 1}, Multiplier::imaginary_power(-2.0)},
  };
  for (const auto& c : cases) {
    CAPTURE(c.b.name());
    CAPTURE(c.mu.describe());
    const auto K = assemble_kernel(v, c.mu, d, c.b, xs, ys);
    const auto ref = oracle::inverse_transform(
        [&](double xi) { return c.b.weight(d, xi * xi) * c.mu(xi * xi); }, dx, n);
    double e = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i)
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const long r = std::lround((xs[i] - ys[j]) / dx);
        e = std::max(e, std::abs(K.values(i, j) - ref[static_cast<std::size_t>(r + static_cast<long>(n / 2))]));
      }
    MESSAGE("max deviation " << e);
    CHECK(e <= 1e-8);
  }
}

TEST_CASE("square well kernel is symmetric and real") {
  const auto v = well();
  const DyadicSystem d(-4, 6);
  std::vector<double> xs;
  for (int i = -16; i <= 16; ++i) xs.push_back(0.25 * i);
  const auto K = assemble_kernel(v, Multiplier::identity(), d, Block{BlockKind::phi, 0, 0}, xs, xs);
  MESSAGE("symmetry " << K.symmetry_residual << ", imag " << K.max_imag);
  CHECK(K.symmetry_residual <= 1e-6);
  CHECK(K.max_imag <= 1e-6);
  double e = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j) e = std::max(e, std::abs(K.values(i, j) - K.values(j, i)));
  CHECK(e == doctest::Approx(K.symmetry_residual));
  const auto Kp = assemble_kernel(v, Multiplier::heat(0.3), d, Block{BlockKind::Phi, 2, 0}, xs, xs);
  CHECK(Kp.symmetry_residual <= 1e-6);
  CHECK(Kp.max_imag <= 1e-6);
}

TEST_CASE("direct and r+ assembly agree on the positive half-line") {
  const auto v = well();
  const DyadicSystem d(-4, 6);
  const std::vector<double> xp{0.5, 1, 2, 3}, yp{0.25, 1.5, 2.5};
  for (const auto& b : {Block{BlockKind::phi, 0, 0}, Block{BlockKind::phi, 3, 0}, Block{BlockKind::Phi, 1, 0}}) {
    const auto A = assemble_kernel(v, Multiplier::identity(), d, b, xp, yp);
    const auto B = assemble_kernel_r_plus(v, Multiplier::identity(), d, b, xp, yp);
    double e = 0.0;
    for (std::size_t i = 0; i < xp.size(); ++i)
      for (std::size_t j = 0; j < yp.size(); ++j) e = std::max(e, std::abs(A.values(i, j) - B.values(i, j)));
    CAPTURE(b.name());
    CHECK(e <= 1e-6);
  }
}

TEST_CASE("pure-point part is the eigenprojection") {
  const auto v = well();
  const DyadicSystem d(-4, 6);
  const std::vector<double> xs{-1.0, 0.0, 0.5};
  KernelOptions o;
  o.part = KernelPart::pp;
  const auto K = assemble_kernel(v, Multiplier::identity(), d, Block{BlockKind::Phi, 0, 0}, xs, xs, o);
  const auto bs = bound_states(v);
  REQUIRE(bs.count() == 1);
  const DyadicSystem dd(-4, 6);
  const double w = dd.Phi_j(0, bs.states[0].energy);
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      CHECK(std::abs(K.values(i, j) - w * bs.value(0, xs[i]) * bs.value(0, xs[j])) <= 1e-12);
}

TEST_CASE("Nyquist rule") {
  const Block b{BlockKind::phi, 2, 0};
  const auto q = kernel_quadrature(b, 10.0);
  CHECK(q.step <= q.required_step);
  CHECK(q.required_step == doctest::Approx(2 * M_PI / (8.0 * 10.0)));
  CHECK(q.lambda.front() >= b.k_support().first);
  CHECK(q.lambda.back() <= b.k_support().second);
  // a supplied λ grid that is too coarse is refused
  const auto v = well();
  const DyadicSystem d(-4, 6);
  std::vector<double> ks;
  for (double k = 0.0; k <= 2.5; k += 0.25) ks.push_back(k);
  const std::vector<double> xs{0.0, 3.0};
  const auto jost = solve_jost(v, ks, xs);
  const auto scat = scattering_coefficients(v, jost);
  CHECK_THROWS_AS(assemble_kernel(v, Multiplier::identity(), d, b, scat, jost, xs, xs), Error);
  try {
    assemble_kernel(v, Multiplier::identity(), d, b, scat, jost, xs, xs);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::under_resolved);
  }
}

TEST_CASE("kernel CSV layout") {
  const auto v = reference_potential("free", {}, UniformGrid::from_range(-4, 4, 1.0 / 32));
  const DyadicSystem d(-4, 6);
  const auto K = assemble_kernel(v, Multiplier::identity(), d, Block{BlockKind::phi, 0, 0}, {0.0, 1.0}, {0.5});
  const auto path = std::filesystem::temp_directory_path() / "scatspec_kernel.csv";
  write_kernel_csv(K, path.string());
  std::ifstream in(path, std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(in)), {});
  CHECK(all.find("\r\n") != std::string::npos);
  std::size_t lines = 0;
  for (char c : all) lines += c == '\n';
  CHECK(lines == 3);
  std::filesystem::remove(path);
}
