#pragma once
//! Sampled real potentials on a uniform window, with optional closed forms.

#include "scatspec/grid.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace scatspec {

enum class PotentialTag { free, square_well, sech2, gaussian, bump };

const char* tag_name(PotentialTag tag);
PotentialTag parse_tag(const std::string& name);

//! Closed form of a reference potential. Samples beyond `truncation_radius`
//! are exactly zero; `evaluate` includes that truncation.
struct AnalyticForm {
  PotentialTag tag = PotentialTag::free;
  std::map<std::string, double> params;
  double truncation_radius = 0.0;

  double evaluate(double x) const;
};

struct WeightedNorms {
  double l1 = 0.0;    ///< ∫|V|
  double l1_1 = 0.0;  ///< ∫(1+|x|)|V|
  double l1_2 = 0.0;  ///< ∫(1+|x|)²|V|
  double t_l1 = 0.0;  ///< ∫|x||V|
  double integral = 0.0;
};

class Potential {
public:
  Potential() = default;
  //! Arbitrary samples. Throws invalid_potential on non-finite values or a
  //! size mismatch.
  Potential(UniformGrid grid, std::vector<double> samples,
            std::optional<AnalyticForm> analytic = std::nullopt);

  const UniformGrid& grid() const { return grid_; }
  const std::vector<double>& samples() const { return samples_; }
  const std::optional<AnalyticForm>& analytic() const { return analytic_; }
  const std::string& hash() const { return hash_; }
  const WeightedNorms& norms() const { return norms_; }
  //! True when the window cuts off more than the allowed tail weight.
  bool tail_warning() const { return tail_warning_; }
  bool is_zero() const;

  //! Mirror image x -> -x on the mirrored window.
  Potential reflected() const;

  //! Smallest and largest node index with a nonzero sample; empty if V == 0.
  std::optional<std::pair<std::size_t, std::size_t>> support_indices() const;

private:
  UniformGrid grid_;
  std::vector<double> samples_;
  std::optional<AnalyticForm> analytic_;
  std::string hash_;
  WeightedNorms norms_;
  bool tail_warning_ = false;
};

//! Tail weight allowed outside the truncation radius of a closed form.
inline constexpr double kTailWeightLimit = 1e-10;

//! ∫(1+|x|)^gamma |V(x)| dx by the trapezoid rule, gamma in {0,1,2}.
double weighted_norm(const Potential& v, int gamma);

//! Reference potential sampled on `grid`. Parameters:
//!   square_well: depth (signed value inside), width, center
//!   sech2: amplitude, scale          V = amplitude sech²(x/scale)
//!   gaussian: amplitude, sigma       V = amplitude exp(-x²/(2 sigma²))
//!   bump: amplitude, width           smooth, supported on |x| < width/2
Potential reference_potential(PotentialTag tag, const std::map<std::string, double>& params,
                              const UniformGrid& grid);
Potential reference_potential(const std::string& tag, const std::map<std::string, double>& params,
                              const UniformGrid& grid);

//! Tail weight ∫_{|x|>r}(1+|x|)²|V| of a closed form (ignoring truncation).
double analytic_tail_weight(const AnalyticForm& form, double r);

//! Writes `<stem>.json` (metadata) and `<stem>.f64` (little-endian samples).
void save_potential(const Potential& v, const std::string& stem);
Potential load_potential(const std::string& stem);

} // namespace scatspec
