#pragma once
//! Uniform-in-j pointwise envelopes for Φ_j(H_ac)(x,y).
//!
//! V = 0:  |K_j(x,y)| ≤ c 2^{j/2}(1+2^{j/2}|x-y|)^{-N}, c fitted at the reference j.
//! V ≠ 0:  |K_j(x,y)| ≤ Σ_± (R_j ∗ E)(x ∓ y), R_j = ρ_j below j0 and ρ_0 + ρ_j above,
//!         ρ_j(u) = 2^{j/2}(1+2^{j/2}|u|)^{-1-ε}, E = c1 δ + c2 (1+|u|)^{-2}.
//! The free check samples a scale-invariant grid; otherwise a fixed grid is added.

#include "scatspec/kernel.hpp"
#include "scatspec/verify/report.hpp"

#include <climits>

namespace scatspec {

struct PointwiseDecayOptions {
  double epsilon = 0.5;
  int free_order = 4;              ///< N of the free envelope
  int j0 = INT_MIN;                ///< INT_MIN: from the Born threshold
  double bound = 4.0;              ///< declared bound on every normalized ratio
  bool refine = true;
  double refine_tol = 0.10;
  double u_max = 6.0;              ///< scaled grid u·2^{-j/2}, |u| ≤ u_max
  double u_step = 0.25;
  double fixed_half = 3.0;         ///< plus the fixed grid [-fixed_half, fixed_half] when V ≠ 0
  double fixed_step = 0.25;        ///< capped at 2·u_step·2^{-j/2}
  BumpProfile profile = BumpProfile::exponential;
  KernelOptions kernel;
};

struct DecayEnvelope {
  double c_delta = 0.0;
  double c_tail = 0.0;
  int ref_j = 0;
};

//! (ρ_a ∗ (1+|·|)^{-2})(u) with ρ_a(u) = a(1+a|u|)^{-1-ε}.
double rho_tail_convolution(double a, double epsilon, double u);

//! Columns: ratio (normalized), regime (0 low, 1 high, 2 free), refined ratio, drift.
EstimateReport check_pointwise_decay(const Potential& v, int j_lo, int j_hi, const PointwiseDecayOptions& opt = {});

} // namespace scatspec
