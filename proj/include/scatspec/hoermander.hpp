#pragma once
//! Scale-invariant local Sobolev norm sup_t ‖μ(t·)χ‖_{W^s_2}.

#include "scatspec/dyadic.hpp"
#include "scatspec/multiplier.hpp"

#include <vector>

namespace scatspec {

struct HoermanderOptions {
  double s = 1.0;
  std::vector<double> t_grid;  ///< defaults to 2^m, m = -10..10
  std::size_t samples = 8192;  ///< FFT length
  double period = 16.0;        ///< ξ-interval [0, period) holding supp χ = [1/4, 4]
  BumpProfile profile = BumpProfile::exponential;
};

struct HoermanderResult {
  double norm = 0.0;  ///< sup over t
  double inf = 0.0;   ///< inf over t (scale-invariance diagnostics)
  std::vector<double> t;
  std::vector<double> values;
  double sup_abs = 0.0;    ///< sup_t sup_ξ |μ(tξ)χ(ξ)|
  double chi_norm = 0.0;   ///< ‖χ‖_{W^s_2}
};

//! ‖g‖_{W^s_2} = ‖(1+ω²)^{s/2} ĝ‖ / √(2π) for samples g on a periodic grid of step dξ.
double sobolev_norm(const std::vector<cplx>& g, double dxi, double s);

HoermanderResult hoermander_norm(const Multiplier& mu, const HoermanderOptions& opt = {});

} // namespace scatspec
