#pragma once
//! Weak-(1,1) experiment: sup over f and α of α·|{|μ(H)f| > α}| / ‖f‖₁.

#include "scatspec/apply.hpp"
#include "scatspec/verify/report.hpp"

#include <cstdint>

namespace scatspec {

struct Weak11Options {
  int members = 20;
  double width = 0.0625;        ///< Gaussian spike width
  double half_length = 16.0;    ///< x ∈ [-half_length, half_length]
  double cells_per_width = 8.0;
  int j_lo = -6;
  int j_hi = 12;                ///< window top for the coarse run, about (4/width)² in energy
  double refine = 4.0;          ///< dx divided by this in the second run
  double min_gap = 2.0;         ///< spike separation, so sharpening never splits a merged bump
  bool sharpen = true;          ///< also divide the width and raise j_hi by 2·log2(refine)
  double refine_tol = 0.10;
  std::vector<double> alphas;   ///< empty: exact supremum over all α > 0
  std::uint64_t seed = 1;
  BumpProfile profile = BumpProfile::exponential;
  KernelOptions kernel;
};

//! Spike trains: 2 to 5 unit-mass Gaussians of the given width, centres at least
//! `min_gap` apart. Centres depend on the seed and the x-range only.
std::vector<std::vector<cplx>> spike_train_family(const std::vector<double>& x, double width, int members,
                                                  std::uint64_t seed, double min_gap = 2.0);

//! sup_α α·|{|Tf| > α}| / ‖f‖₁ by midpoint counting on the grid; over all α when `alphas` is empty.
double weak_ratio(const std::vector<double>& x, const std::vector<cplx>& tf, const std::vector<cplx>& f,
                  const std::vector<double>& alphas);

//! One report per multiplier; rows are family members.
std::vector<EstimateReport> weak11_experiment(const std::vector<Multiplier>& mus, const Potential& v,
                                              const Weak11Options& opt = {});

} // namespace scatspec
