#pragma once
//! Centered Hardy–Littlewood maximal function on a uniform grid.

#include <vector>

namespace scatspec {

//! Mf_i = max_{k ≥ 0} (2k+1)^{-1} Σ_{|m-i| ≤ k} |f_m|, with f extended by zero.
std::vector<double> hl_maximal(const std::vector<double>& f);

//! Continuum value sup_r (2r)^{-1} |[x-r, x+r] ∩ [a, b]| for the indicator of [a, b].
double indicator_maximal(double a, double b, double x);

//! Σ_m w_m |f_{i-m}| with w the normalized discrete Gaussian of width sigma (in cells).
std::vector<double> gaussian_mollify(const std::vector<double>& f, double sigma);

} // namespace scatspec
