#pragma once
//! sup_y ‖|x-y|^s φ_j(H_ac)(x,y)‖_{L²_x} against λ_j^{s-1/2}‖φ‖_{W^s_2}.
//! The reported slope κ is defined by N_j ∝ 2^{-κ j}, so κ = (2s-1)/4.

#include "scatspec/kernel.hpp"
#include "scatspec/verify/report.hpp"

#include <vector>

namespace scatspec {

struct WeightedL2Options {
  std::vector<double> y_set = {-4, -2, -1, -0.5, 0, 0.5, 1, 2, 4};
  double dx_fraction = 1.0 / 16.0;  ///< dx = fraction · 2^{-j/2}
  double radius_factor = 40.0;      ///< x-window y ± factor · 2^{-j/2}
  bool assert_slope = true;         ///< compare κ with (2s-1)/4 (free case)
  double slope_tol = 0.05;
  BumpProfile profile = BumpProfile::exponential;
  KernelOptions kernel;
};

//! ‖φ‖_{W^s_2} of the dyadic φ (even, supported in 1/4 ≤ |x| ≤ 1).
double phi_sobolev_norm(BumpProfile profile, double s);

//! One report per s, sharing the kernels of each j.
std::vector<EstimateReport> check_weighted_L2(const Potential& v, const std::vector<double>& s_values, int j_lo,
                                              int j_hi, const WeightedL2Options& opt = {});

//! Interpolation containment for s0 < s < s1: per j, N_s ≤ N_{s0}^{1-θ} N_{s1}^{θ}
//! (Hölder), and κ_s between κ_{s0} and κ_{s1}.
EstimateReport interpolation_check(const EstimateReport& r0, const EstimateReport& r1, const EstimateReport& rs,
                                   double s0, double s1, double s);

} // namespace scatspec
