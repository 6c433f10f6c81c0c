#pragma once
//! Homogeneous Besov and Triebel–Lizorkin norms adapted to H:
//!   B: (Σ_j 2^{jαq} ‖φ_j(H)f‖_p^q)^{1/q},   F: ‖(Σ_j 2^{jαq} |φ_j(H)f|^q)^{1/q}‖_p.
//! φ_j(H) includes the pure-point part; q = ∞ takes the supremum.

#include "scatspec/apply.hpp"
#include "scatspec/verify/report.hpp"

namespace scatspec {

struct BesovOptions {
  int j_lo = -6;
  int j_hi = 6;
  BumpProfile profile = BumpProfile::exponential;
  KernelOptions kernel;
};

//! pieces[m][j - j_lo][x] = (μ_m φ_j)(H) f.
std::vector<std::vector<std::vector<cplx>>> littlewood_paley_pieces(const std::vector<Multiplier>& mus,
                                                                    const Potential& v, const std::vector<double>& x,
                                                                    const std::vector<cplx>& f,
                                                                    const BesovOptions& opt = {});

double lp_norm(const std::vector<double>& x, const std::vector<cplx>& f, double p);
double besov_from_pieces(const std::vector<double>& x, const std::vector<std::vector<cplx>>& pieces, int j_lo,
                         double alpha, double p, double q);
double tl_from_pieces(const std::vector<double>& x, const std::vector<std::vector<cplx>>& pieces, int j_lo,
                      double alpha, double p, double q);

double besov_norm(const Potential& v, const std::vector<double>& x, const std::vector<cplx>& f, double alpha,
                  double p, double q, const BesovOptions& opt = {});
double tl_norm(const Potential& v, const std::vector<double>& x, const std::vector<cplx>& f, double alpha, double p,
               double q, const BesovOptions& opt = {});

//! ‖μ(H)f‖_B / ‖f‖_B for B = B^{α,q}_p(H); declared bound `bound`.
EstimateReport check_besov_multiplier(const Multiplier& mu, const Potential& v, const std::vector<double>& x,
                                      const std::vector<cplx>& f, double alpha, double p, double q, double bound,
                                      const BesovOptions& opt = {});

} // namespace scatspec
