#pragma once
// Independent reference: integrate -f'' + V f = k² f with RK4 from the
// asymptotic region, splitting at the breakpoints of the closed form.

#include "scatspec/potential.hpp"

#include <complex>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct ShootingResult {
  cplx m_plus, m_minus;  // modified Jost functions at the requested x
  cplx t, r_plus, r_minus;
};

// `form` is evaluated pointwise; `reach` is a point beyond which V == 0.
ShootingResult shoot(const scatspec::AnalyticForm& form, double reach, double x, double k);

} // namespace oracle
