#pragma once
//! Transmission and reflection coefficients from the Jost integrals.

#include "scatspec/jost.hpp"

#include <string>
#include <vector>

namespace scatspec {

struct MarchenkoKernel;

enum class Resonance { resonant, non_resonant };

struct ScatteringData {
  std::vector<double> k;
  std::vector<cplx> t;        ///< from the m+ integral
  std::vector<cplx> t_minus;  ///< from the m- integral
  std::vector<cplx> r_plus;
  std::vector<cplx> r_minus;
  std::vector<cplx> w;        ///< Wronskian -2ik/t
  std::vector<double> cross_discrepancy;  ///< |t - t_minus| per k
  double nu = 0.0;   ///< W(0) = ∫V m+(·,0)
  double nu0 = 0.0;  ///< ∫V
  double l1_1 = 0.0; ///< ‖V‖_{L¹_1}, scale for the resonance threshold
  Resonance resonance = Resonance::non_resonant;
  double resonance_threshold = 0.0;
  double k0 = 0.0;   ///< Born threshold; 0 until assigned
  std::string potential_hash;
};

struct ScatteringOptions {
  double tol = 1e-8;   ///< cross-discrepancy above 100·tol is an error
  double resonance_rel = 1e-6;
};

ScatteringData scattering_coefficients(const Potential& v, const JostField& jost, const ScatteringOptions& opt = {});

//! Convenience: solves the Jost problem on `k_grid` (x outputs unused).
ScatteringData scattering_on_grid(const Potential& v, const std::vector<double>& k_grid,
                                  const JostOptions& jopt = {}, const ScatteringOptions& opt = {});

//! α±(k) = (1 + r±(k)) / t(k); k = 0 is rejected. sign = +1 or -1.
std::vector<cplx> alpha(const ScatteringData& scat, int sign);

struct ResonanceClass {
  Resonance resonance;
  double nu;
  double nu_marchenko;  ///< NaN when no Marchenko kernel is supplied
  double threshold;
};

//! Resonant iff |ν| < rel·(1 + ‖V‖_{L¹_1}). With `mk` the B-form of ν is
//! cross-checked and a mismatch above 1e-6 raises inconsistency.
ResonanceClass classify_resonance(const ScatteringData& scat, const MarchenkoKernel* mk = nullptr,
                                  double rel = 1e-6);

struct InterrelationResidual {
  double plus = 0.0;   ///< sup |t m- - e^{2ikx} r+ m+ - m+(x,-k)|
  double minus = 0.0;  ///< sup |t m+ - e^{-2ikx} r- m- - m-(x,-k)|
};

//! Uses m(x,-k) = conj(m(x,k)), valid for real V. k = 0 columns are skipped.
InterrelationResidual interrelation_residual(const JostField& jost, const ScatteringData& scat);

struct BornSeriesResult {
  cplx t, r_plus, r_minus;
  double k0 = 0.0;
  std::size_t n_used = 0;
  double ratio = 0.0;  ///< |ν0 + b̂(k)| / (2|k|), the geometric ratio
  std::vector<double> term_ratios;  ///< |term_{n+1}| / |term_n| for the t series
};

//! Threshold k0 = max(1, |ν0| + ‖b‖₁), so that the ratio is ≤ 1/2 for |k| > k0.
double born_threshold(const MarchenkoKernel& mk);

//! Partial sums of the geometric expansions of t and r± up to order n_terms.
BornSeriesResult born_series_high(const MarchenkoKernel& mk, double k, std::size_t n_terms = 20);

//! Records on `scat` the smallest grid value k with k ≥ born_threshold(mk).
void assign_born_threshold(ScatteringData& scat, const MarchenkoKernel& mk);

//! Energy index j0 = max(2 + ceil(2 log2 k0), 2 log2 ‖dσ‖), floored at the first entry.
int j0_from_threshold(double k0, double dsigma_mass);

struct AsymptoticsReport {
  double low_k_times_tdot = 0.0;    ///< sup |k ṫ| on the low window
  double low_k_times_rdot = 0.0;    ///< sup |k ṙ+| on the low window
  double high_k2_times_tdot = 0.0;  ///< sup |k² ṫ| on the high window
  double low_slope = 0.0;           ///< log-log slope of |ṫ| at low k
  double high_slope = 0.0;          ///< log-log slope of |ṫ| at high k
  double low_fit_residual = 0.0;
  double high_fit_residual = 0.0;
};

//! Central differences on the k-grid; windows [lo_a, lo_b] and [hi_a, hi_b].
AsymptoticsReport scattering_asymptotics_report(const ScatteringData& scat, double lo_a = 0.05, double lo_b = 0.5,
                                                double hi_a = 1.0, double hi_b = 8.0);

void write_scattering_csv(const ScatteringData& scat, const std::string& path);
void write_scattering_manifest(const ScatteringData& scat, const std::string& path);

} // namespace scatspec
