#pragma once
//! The Volterra kernel h(x,k) = (e^{2ikx} - 1)/(2ik) and its k-derivative.

#include "scatspec/grid.hpp"

namespace scatspec {

struct GreenFactor {
  //! h(x,k); equals x at k = 0.
  static cplx value(double x, double k);
  //! ∂h/∂k; equals i x² at k = 0.
  static cplx dk(double x, double k);
};

//! sin(u)/u, accurate near 0.
double sinc(double u);
//! (cos u - sinc u)/u, accurate near 0.
double cos_minus_sinc_over_u(double u);

} // namespace scatspec
