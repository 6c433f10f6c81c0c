#pragma once
//! Marchenko kernels B±(x,y), the transforms of m±(x,±k) - 1:
//!   m+(x,k) = 1 + ∫_0^∞ B+(x,y) e^{2iky} dy,
//!   B+(x,y) = ∫_{x+y}^∞ V + ∫_0^y dz ∫_{x+y-z}^∞ V(t) B+(t,z) dt,
//! and the mirror-image equation for B-.
//!
//! Writing B+(x,y) = F(x+y, y) turns the inner double integral into a
//! recurrence in y, so the discrete equation is solved level by level in y
//! with one implicit scalar update per node. As in the Jost solver, two step
//! sizes are combined by Richardson extrapolation for the smooth functionals.

#include "scatspec/grid.hpp"
#include "scatspec/potential.hpp"

#include <string>
#include <vector>

namespace scatspec {

//! One discretisation level of one side, in the coordinates of the plus
//! problem (the minus side is stored as the plus problem of V(-x)).
struct MarchenkoLevel {
  double h = 0.0;
  double x0 = 0.0;         ///< first active node
  std::size_t n = 0;       ///< active nodes
  long p_min = 0;          ///< lowest s index (x = x0 + p h), p_min <= 0
  std::vector<double> v;   ///< active samples at this level
  RMatrix rows;            ///< B(row_x, q h)
  std::vector<double> b;   ///< b(q h) = ∫ V(t) B(t, q h) dt
  std::vector<double> c;   ///< c(x0 + p h) = ∫_{t<=w} V(t) B(t, w - t) dt
  std::vector<double> int_b;  ///< ∫ B(x,y) dy for x = x0 + p h, p in [p_min, n)
};

struct MarchenkoSide {
  std::vector<double> rows_x;  ///< side coordinates
  MarchenkoLevel fine, coarse;
  bool richardson = true;
  std::vector<double> table_x;       ///< fine s-grid nodes
  std::vector<double> abs_int;       ///< ∫ |B(x,y)| dy
  std::vector<double> abs_int_y;     ///< ∫ |y| |B(x,y)| dy
  std::vector<double> gamma;         ///< ∫_x^∞ (t-x)|V(t)| dt
  double envelope_ratio = 0.0;       ///< max |B| / (e^γ ρ)
  double residual = 0.0;
};

struct MarchenkoOptions {
  double tol = 1e-10;
  std::size_t n_max = 1;        ///< sweeps; the level recurrence needs one
  double x_lo = NAN;            ///< output window, defaults to the potential window
  double x_hi = NAN;
  std::vector<double> rows_x;   ///< rows of B± to keep (must lie on the coarse grid)
  bool richardson = true;
};

struct MarchenkoKernel {
  MarchenkoSide plus, minus;
  std::vector<double> rows_x;   ///< original coordinates
  double nu0 = 0.0;
  WeightedNorms norms;
  std::size_t iteration_count = 0;
  std::string potential_hash;
  bool zero = false;            ///< V ≡ 0

  //! B±(rows_x[row], ±q h) on the fine grid; y-step is fine_step().
  double B(int sign, std::size_t row, std::size_t q) const;
  std::size_t ny(int sign) const;
  double fine_step() const { return plus.fine.h; }
  //! 1 + ∫ B±(x,y) e^{±2iky} dy over the half-line, reconstructing m±(x,k).
  cplx fourier(int sign, std::size_t row, double k) const;
};

MarchenkoKernel solve_marchenko(const Potential& v, const MarchenkoOptions& opt = {});

struct WeightedBoundTable {
  int order = 0;
  std::vector<double> x;
  std::vector<double> plus, minus;            ///< ∫|y|^n |B±(x,y)| dy
  std::vector<double> ratio_plus, ratio_minus;
  double sup_plus = 0.0, sup_minus = 0.0;     ///< fitted constants
};

//! Ratios ∫|y|^n|B±| / (1 + max(0, ∓x))^{n+1} over x in [x_lo, x_hi].
WeightedBoundTable weighted_B_bounds(const MarchenkoKernel& mk, int order, double x_lo, double x_hi);

struct Density {
  std::vector<double> x;
  std::vector<double> values;
  double l1 = 0.0;
};

//! b(y) = ∫ V(t) B+(t,y) dt for y >= 0.
Density density_b(const MarchenkoKernel& mk);
//! a±(w): V(w) plus the two B∓-integral densities.
Density density_a(const MarchenkoKernel& mk, int sign);

//! b̂(k) = ∫_0^∞ b(y) e^{2iky} dy.
cplx b_hat(const MarchenkoKernel& mk, double k);
//! â±(k) = ∫ a±(w) e^{∓2ikw} dw.
cplx a_hat(const MarchenkoKernel& mk, int sign, double k);
//! ν in the form ν0 + ∫_0^∞ b.
double nu_from_marchenko(const MarchenkoKernel& mk);
//! 1 - (ν0 + b̂(k)) / (2ik).
cplx t_inverse_from_marchenko(const MarchenkoKernel& mk, double k);
//! 1 - ν0/(2ik) + â±(k)/(2ik).
cplx alpha_from_marchenko(const MarchenkoKernel& mk, int sign, double k);

struct ResonanceClass;

//! t(k)^{-1} - 1 = -∫_0^∞ (∫_ξ^∞ b) e^{2ikξ} dξ, valid when ν = 0.
//! Throws precondition unless `cls` says resonant.
std::vector<cplx> t_inverse_resonant_form(const MarchenkoKernel& mk, const ResonanceClass& cls,
                                          const std::vector<double>& k_grid);
//! L¹ norm of the ξ-density ∫_ξ^∞ b.
double resonant_density_l1(const MarchenkoKernel& mk);

void write_weighted_bounds_csv(const WeightedBoundTable& t, const std::string& path);

} // namespace scatspec
