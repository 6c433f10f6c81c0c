#pragma once
//! μ(H)f = Σ_m μ(E_m)⟨u_m, f⟩u_m + Σ_blocks (μ W_b)(H_ac) f.
//!
//! The ac part is evaluated without forming kernels:
//!   (W(H_ac)f)(x) = (1/2π) ∫_0^∞ W(λ²)[t f+(x) ĝ+(λ) + conj(t f+(x)) ĝ-(λ)] dλ,
//! with ĝ+ = ∫ f-(y,λ) f(y) dy and ĝ- = ∫ conj f-(y,λ) f(y) dy.

#include "scatspec/kernel.hpp"

#include <vector>

namespace scatspec {

struct ApplyOptions {
  int j_lo = -6;
  int j_hi = 6;
  bool low_block = true;   ///< add Φ_{j_lo-1}, making the window sum exactly Φ_{j_hi}
  bool include_pp = true;
  BumpProfile profile = BumpProfile::exponential;
  KernelOptions kernel;    ///< Nyquist rule, Jost options, chunking, eig_tol
};

struct ApplyResult {
  std::vector<double> x;
  std::vector<cplx> value;  ///< ac + pp
  std::vector<cplx> ac;
  std::vector<cplx> pp;
  std::size_t lambda_points = 0;  ///< summed over blocks
  double lambda_step = 0.0;       ///< finest block step
};

//! x must be uniform; f is sampled on x and integrals use the trapezoid rule.
ApplyResult apply_multiplier(const Multiplier& mu, const Potential& v, const std::vector<double>& x,
                             const std::vector<cplx>& f, const ApplyOptions& opt = {});

//! Every combination out[m][b][i] = (μ_m W_b)(H) f_i; each block has its own λ grid
//! and one Jost solve per node serves all multipliers and inputs.
//! pp parts are included when `with_pp` is set.
std::vector<std::vector<std::vector<std::vector<cplx>>>>
apply_blocks(const std::vector<Multiplier>& mus, const std::vector<Block>& blocks, const Potential& v,
             const std::vector<double>& x, const std::vector<std::vector<cplx>>& fs, bool with_pp,
             const DyadicSystem& d, const KernelOptions& opt = {});

//! Blocks of the window [j_lo, j_hi] (plus Φ_{j_lo-1} when requested).
std::vector<Block> window_blocks(const ApplyOptions& opt);

//! ‖f - Φ_{j_hi}(H) f‖₂ with the pp part included: the truncation error of the window.
double completeness_error(const Potential& v, const std::vector<double>& x, const std::vector<cplx>& f,
                          const ApplyOptions& opt = {});

double l2_norm(const std::vector<double>& x, const std::vector<cplx>& f);

} // namespace scatspec
