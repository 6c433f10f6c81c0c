#pragma once
//! Negative eigenvalues of H = -D² + V from the central-difference
//! discretisation, refined by Richardson extrapolation over two grids.

#include "scatspec/grid.hpp"
#include "scatspec/potential.hpp"

#include <vector>

namespace scatspec {

struct BoundState {
  double energy = 0.0;        ///< Richardson-refined
  double energy_fd = 0.0;     ///< finite-difference value on the fine grid
  std::vector<double> u;      ///< L²-normalised on BoundStateSet::grid
  double residual = 0.0;      ///< ‖(-D²_h + V - E_h)u‖₂
  bool unreliable = false;    ///< |E| < 10·tol

  //! u(x) by linear interpolation, continued by e^{-κ|x|} beyond the grid.
  double value(const UniformGrid& grid, double x) const;
};

struct BoundStateSet {
  UniformGrid grid;
  std::vector<BoundState> states;  ///< ascending energy
  std::size_t count() const { return states.size(); }
  std::vector<double> energies() const;
  double value(std::size_t m, double x) const { return states[m].value(grid, x); }
};

struct BoundStateOptions {
  double target_step = 0.0078125;  ///< 2^-7
  double tail_fraction = 1e-6;
  std::size_t max_padding = 6;
};

BoundStateSet bound_states(const Potential& v, double eig_tol = 1e-8, const BoundStateOptions& opt = {});

} // namespace scatspec
