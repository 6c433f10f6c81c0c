#pragma once
//! Off-diagonal L¹ tails of (μ φ_j (1-Φ_{j_I}))(H) away from a cube I of length t = 2^{-j_I/2}:
//!   T_j = sup_{y ∈ I} ∫_{|x-y_I| ≥ 2t} |K_j(x,y)| dx,
//! expected to decay like (2^{j/2} t)^{1/2-s}.

#include "scatspec/kernel.hpp"
#include "scatspec/verify/report.hpp"

namespace scatspec {

struct KernelTailOptions {
  double s = 1.0;
  double slope_tol = 0.1;
  bool assert_slope = true;        ///< off: the power is only reported
  int y_samples = 5;               ///< points of I at which the sup is taken
  double reach = 40.0;             ///< x-window 2t + reach·2^{-j/2} beyond the cube
  double cells_per_scale = 16.0;
  BumpProfile profile = BumpProfile::exponential;
  KernelOptions kernel;
};

//! Rows j ∈ [j_lo, j_hi]; index column is log2(2^{j/2} t). Rows with j ≤ j_I - 1
//! must vanish identically and are excluded from the fit.
EstimateReport check_kernel_tail_L1(const Multiplier& mu, const Potential& v, double cube_center, int j_I, int j_lo,
                                    int j_hi, const KernelTailOptions& opt = {});

} // namespace scatspec
