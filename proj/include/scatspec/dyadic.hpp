#pragma once
//! Dyadic partition of unity {Φ, φ_j} on the energy axis.
//!
//! Φ is even, ≡ 1 on [-1/2, 1/2] and vanishes outside [-1, 1];
//! φ(x) = Φ(x) - Φ(2x) lives on 1/4 ≤ |x| ≤ 1, so the sums telescope:
//!   Σ_{j=a}^{b} φ_j = Φ_b - Φ_{a-1},   Φ + Σ_{j=1}^{b} φ_j = Φ_b.

#include <string>

namespace scatspec {

enum class BumpProfile { exponential, smoothstep7 };

std::string profile_name(BumpProfile p);
BumpProfile parse_profile(const std::string& name);

//! Monotone transition 0 → 1 on [0, 1], flat to all orders (exponential) or
//! to order 7 (polynomial smoothstep) at both ends.
double smooth_step(double u, BumpProfile p);

class DyadicSystem {
public:
  DyadicSystem(int j_lo, int j_hi, BumpProfile profile = BumpProfile::exponential);

  int j_lo() const { return j_lo_; }
  int j_hi() const { return j_hi_; }
  BumpProfile profile() const { return profile_; }

  double Phi(double x) const;
  double phi(double x) const { return Phi(x) - Phi(2.0 * x); }
  double Phi_j(int j, double x) const;
  double phi_j(int j, double x) const;
  double Psi_j(int j, double k) const { return Phi_j(j, k * k); }
  double psi_j(int j, double k) const { return phi_j(j, k * k); }
  //! Σ_{j_lo}^{j_hi} φ_j(x); equals 1 on 2^{j_lo-1} ≤ |x| ≤ 2^{j_hi-1}.
  double partition_sum(double x) const;
  //! χ(ξ) = Φ(ξ/4) - Φ(2ξ) for ξ > 0, 0 otherwise; supported in [1/4, 4].
  double chi(double xi) const;

  static double lambda(int j);
  //! k-support of ψ_j: [2^{j/2-1}, 2^{j/2}].
  static double k_lo(int j);
  static double k_hi(int j);

private:
  int j_lo_, j_hi_;
  BumpProfile profile_;
};

} // namespace scatspec
