#pragma once
//! Calderón–Zygmund decomposition on the dyadic tree of a power-of-two grid.
//!
//! Cells are [x0 + i·dx, x0 + (i+1)·dx) with dx a power of two, so every cube
//! length is a power of two. Properties, with exact sums on the tree:
//!   (i)   |g| ≤ 2α,
//!   (ii)  |I_k|^{-1} ∫_{I_k} |f| ≤ 2α,
//!   (iii) Σ |I_k| ≤ α^{-1} ‖f‖₁.

#include <cstddef>
#include <vector>

namespace scatspec {

struct CZCube {
  std::size_t first = 0;  ///< cell index on the padded grid
  std::size_t cells = 0;
  double length = 0.0;
  double mean = 0.0;      ///< signed mean of f
  double abs_mean = 0.0;  ///< mean of |f|
};

struct CZDecomposition {
  double alpha = 0.0;
  double x0 = 0.0, dx = 0.0;
  std::vector<double> f, g, b;  ///< padded to a power-of-two cell count
  std::vector<CZCube> cubes;
  double l1 = 0.0;              ///< ‖f‖₁ as the root sum of the tree
  double total_length = 0.0;    ///< Σ |I_k|
  std::size_t padding_doublings = 0;
};

struct CZCheck {
  bool good_bounded = false;   ///< (i) with c = 2
  bool cube_means = false;     ///< (ii) with c = 2
  bool total_length = false;   ///< (iii) with c = 1
  bool disjoint = false;
  bool mean_zero = false;      ///< ∫ b_k = 0 up to rounding
  bool reconstruction = false; ///< f = g + b up to a few ulps
  double max_reconstruction = 0.0;
  double max_b_mean = 0.0;
  bool all() const { return good_bounded && cube_means && total_length && disjoint && mean_zero && reconstruction; }
};

//! dx must be a positive power of two; α > 0.
CZDecomposition cz_decompose(const std::vector<double>& f, double x0, double dx, double alpha);
CZCheck cz_check(const CZDecomposition& cz);

} // namespace scatspec
