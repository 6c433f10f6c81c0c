#pragma once
//! Kernels of spectral windows of H_ac,
//!   W(H_ac)(x,y) = (1/2π) ∫ W(λ²) t(λ) m+(x,λ) m-(y,λ) e^{iλ(x-y)} dλ
//!                = (1/π) ∫_0^∞ W(λ²) Re[t f+(x,λ) f-(y,λ)] dλ,
//! by the trapezoid rule in λ, plus the optional pure-point part.

#include "scatspec/bound_states.hpp"
#include "scatspec/dyadic.hpp"
#include "scatspec/jost.hpp"
#include "scatspec/multiplier.hpp"
#include "scatspec/scattering.hpp"

#include <string>
#include <vector>

namespace scatspec {

enum class BlockKind {
  phi,      ///< φ_j
  Phi,      ///< Φ_j
  high_cut, ///< (1 - Φ_{j_cut}) Φ_j
  phi_cut   ///< (1 - Φ_{j_cut}) φ_j
};

struct Block {
  BlockKind kind = BlockKind::phi;
  int j = 0;
  int j_cut = 0;

  double weight(const DyadicSystem& d, double energy) const;
  //! λ-interval outside of which the weight vanishes.
  std::pair<double, double> k_support() const;
  bool contains_zero() const { return kind == BlockKind::Phi; }
  std::string name() const;
};

enum class KernelPart { ac, pp, full };

struct KernelQuadrature {
  std::vector<double> lambda;
  std::vector<double> weight;  ///< trapezoid weights
  double step = 0.0;
  double required_step = 0.0;  ///< 2π / (points_per_period · Δ_eff)
  double delta_eff = 0.0;
};

struct KernelOptions {
  double points_per_period = 8.0;
  std::size_t min_points = 256;
  KernelPart part = KernelPart::ac;
  JostOptions jost;
  double eig_tol = 1e-8;
  std::size_t chunk = 64;  ///< λ nodes per Jost solve
};

struct OperatorKernel {
  std::vector<double> x, y;
  CMatrix values;  ///< [x][y]
  Block block;
  std::string multiplier;
  KernelQuadrature quad;
  KernelPart part = KernelPart::ac;
  double symmetry_residual = 0.0;  ///< sup |K - Kᵀ| when x and y grids coincide, else NaN
  double max_imag = 0.0;
  std::string potential_hash;
};

//! max|x| + max|y| + diam supp V, which bounds every |x ± y| phase in the integrand.
double effective_delta(const Potential& v, const std::vector<double>& x, const std::vector<double>& y);

//! Uniform λ nodes on the block support at the Nyquist step (halved for blocks containing 0).
KernelQuadrature kernel_quadrature(const Block& block, double delta_eff, const KernelOptions& opt = {});

OperatorKernel assemble_kernel(const Potential& v, const Multiplier& mu, const DyadicSystem& d, const Block& block,
                               const std::vector<double>& x, const std::vector<double>& y,
                               const KernelOptions& opt = {});

//! Assembly from precomputed data: jost.k is the λ grid (uniform, nonnegative) and
//! jost.x must contain every x and y. An under-resolved grid raises under_resolved.
OperatorKernel assemble_kernel(const Potential& v, const Multiplier& mu, const DyadicSystem& d, const Block& block,
                               const ScatteringData& scat, const JostField& jost, const std::vector<double>& x,
                               const std::vector<double>& y, const KernelOptions& opt = {});

//! Same-side route for x, y > 0 through t f- = r+ f+ + f+(·,-λ): uses m+ and r+ only.
OperatorKernel assemble_kernel_r_plus(const Potential& v, const Multiplier& mu, const DyadicSystem& d,
                                      const Block& block, const std::vector<double>& x,
                                      const std::vector<double>& y, const KernelOptions& opt = {});

void write_kernel_csv(const OperatorKernel& k, const std::string& path);

} // namespace scatspec
