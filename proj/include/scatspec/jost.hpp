#pragma once
//! Modified Jost solutions m±(x,k) from the Volterra integral equations
//!   m+(x,k) = 1 + ∫_x^∞ h(t-x,k) V(t) m+(t,k) dt,
//!   m-(x,k) = 1 + ∫_{-∞}^x h(x-t,k) V(t) m-(t,k) dt.
//!
//! The equations are discretised with the trapezoid rule on the potential
//! grid. Because h(0,k) = 0 the discrete system is lower triangular, so a
//! single sweep from the far end reaches the discrete fixed point
//! (scheme::marching). The Born expansion (scheme::born) sums the iterated
//! integrals instead and is kept for cross-checks and for the term-wise API.
//! Two step sizes h and 2h are combined by Richardson extrapolation.

#include "scatspec/grid.hpp"
#include "scatspec/potential.hpp"

#include <string>
#include <vector>

namespace scatspec {

enum class VolterraScheme { marching, born };

struct JostOptions {
  double tol = 1e-10;
  VolterraScheme scheme = VolterraScheme::marching;
  bool richardson = true;
  bool derivative = false;
  std::size_t max_terms = 64;  ///< Born scheme only
  unsigned jobs = 0;
};

//! Integrals over the whole line for one sign at one k:
//!   s = ∫V m, s1 = ∫e^{±2ikt} V m, and their k-derivatives.
//! For the minus sign the integrals refer to the mirrored potential, so
//! s1 carries e^{-2ikt} in the original variable.
struct JostTotals {
  cplx s{}, s1{}, h{}, ds{}, ds1{}, dh{};
};

struct JostField {
  std::vector<double> k;
  std::vector<double> x;
  CMatrix m_plus;   ///< [k][x]
  CMatrix m_minus;  ///< [k][x]
  CMatrix dm_plus;  ///< ∂_k m+, empty unless requested; NaN on a k = 0 column
  CMatrix dm_minus;
  std::vector<JostTotals> plus;
  std::vector<JostTotals> minus;
  std::vector<double> residual;      ///< per k, sup over nodes, relative to max(1, |m|)
  std::vector<std::size_t> iterations;
  bool derivative_unset_at_zero = false;
  std::string potential_hash;
  JostOptions options;
};

JostField solve_jost(const Potential& v, const std::vector<double>& k_grid, const std::vector<double>& x_grid,
                     const JostOptions& options = {});

//! Same as solve_jost with the k-derivative fields filled in.
JostField jost_derivative(const Potential& v, const std::vector<double>& k_grid,
                          const std::vector<double>& x_grid, JostOptions options = {});

//! Born terms M_0..M_{n_max} of the expansion m-(x,-k) = Σ_n M_n(x,k).
//! x must lie on the coarse solver grid or outside the support of V.
std::vector<cplx> volterra_terms(const Potential& v, double x, double k, std::size_t n_max,
                                 bool richardson = true);

//! Born terms of m+(x,k) at every fine node of the active window
//! (used for term-bound checks). Row n holds M_n.
struct BornTermTable {
  std::vector<double> x;
  std::vector<std::vector<cplx>> terms;
};
BornTermTable born_terms_plus(const Potential& v, double k, std::size_t n_max);

//! Cache key for a Jost solve.
std::string jost_cache_key(const Potential& v, const std::vector<double>& k_grid,
                           const std::vector<double>& x_grid, const JostOptions& options);
void save_jost(const JostField& field, const std::string& path);
JostField load_jost(const std::string& path);
//! Loads from `dir` when a matching entry exists, otherwise solves and stores.
JostField cached_jost(const Potential& v, const std::vector<double>& k_grid, const std::vector<double>& x_grid,
                      const JostOptions& options, const std::string& dir, bool* hit = nullptr);

} // namespace scatspec
