#pragma once
// Lowest eigenvalue of the central-difference -D² + V with Dirichlet ends, by
// Sturm-count bisection on the tridiagonal matrix.

#include "scatspec/potential.hpp"

namespace oracle {

double fd_ground_state(const scatspec::AnalyticForm& form, double L, double h);

// Richardson extrapolation of the O(h²) error from steps h and h/2.
double fd_ground_state_richardson(const scatspec::AnalyticForm& form, double L, double h);

} // namespace oracle
