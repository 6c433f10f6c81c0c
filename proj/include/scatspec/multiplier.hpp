#pragma once
//! Scalar spectral multipliers μ(E) on the energy axis.

#include "scatspec/grid.hpp"

#include <map>
#include <string>
#include <vector>

namespace scatspec {

enum class MultiplierKind { identity, imaginary_power, heat, custom };

class Multiplier {
public:
  static Multiplier identity();
  //! |E|^{iγ}; the value at E = 0 is taken as 1.
  static Multiplier imaginary_power(double gamma);
  //! e^{-tE}
  static Multiplier heat(double t);
  //! Linear interpolation of samples (E_i, μ_i); E outside the table is a domain error.
  static Multiplier custom(std::vector<double> energies, std::vector<cplx> values);

  MultiplierKind kind() const { return kind_; }
  double parameter() const { return param_; }
  std::string tag() const;
  //! Canonical text used for hashing and manifests.
  std::string describe() const;
  std::string hash() const;

  cplx operator()(double energy) const;
  bool is_real() const { return kind_ != MultiplierKind::imaginary_power && real_table_; }

private:
  MultiplierKind kind_ = MultiplierKind::identity;
  double param_ = 0.0;
  std::vector<double> energies_;
  std::vector<cplx> values_;
  bool real_table_ = true;
};

//! Builds a multiplier from a tag and parameters; unknown tags raise bad_multiplier.
Multiplier parse_multiplier(const std::string& tag, const std::map<std::string, double>& params);

} // namespace scatspec
