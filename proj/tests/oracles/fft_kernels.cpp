#include "oracles/fft_kernels.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

namespace oracle {

namespace {

// Unnormalised DFT in place, sign -1 forward and +1 backward.
void dft(std::vector<cplx>& a, int sign) {
  const int n = static_cast<int>(a.size());
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan = fftw_plan_dft_1d(n, p, p, sign, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

// Angular frequency of DFT bin m.
double freq(std::size_t m, std::size_t n, double dx) {
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(n) * dx);
  const auto mi = static_cast<long>(m);
  const auto ni = static_cast<long>(n);
  return static_cast<double>(mi < (ni + 1) / 2 ? mi : mi - ni) * dxi;
}

} // namespace

std::vector<cplx> inverse_transform(const std::function<cplx(double)>& w, double dx, std::size_t n) {
  std::vector<cplx> a(n);
  for (std::size_t m = 0; m < n; ++m) a[m] = w(freq(m, n, dx));
  dft(a, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(n) * dx);
  // bin i holds r = i·dx (mod n·dx); reorder so r runs from -n/2·dx upwards
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = a[(i + n - n / 2) % n] * scale;
  return out;
}

std::vector<cplx> fourier_multiply(const std::function<cplx(double)>& w, const std::vector<cplx>& f, double dx) {
  std::vector<cplx> a = f;
  const std::size_t n = a.size();
  dft(a, FFTW_FORWARD);
  for (std::size_t m = 0; m < n; ++m) a[m] *= w(freq(m, n, dx));
  dft(a, FFTW_BACKWARD);
  for (auto& v : a) v /= static_cast<double>(n);
  return a;
}

double plancherel_norm(const std::function<double(double)>& w, const std::vector<cplx>& f, double dx) {
  std::vector<cplx> a = f;
  const std::size_t n = a.size();
  dft(a, FFTW_FORWARD);
  // f̂(ξ_m) ≈ dx·a_m and dξ = 2π/(n dx)
  double s = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    const double wm = w(freq(m, n, dx));
    s += wm * wm * std::norm(a[m]);
  }
  return std::sqrt(s * dx / static_cast<double>(n));
}

} // namespace oracle
