#include "scatspec/multiplier.hpp"

#include "scatspec/error.hpp"
#include "scatspec/hashing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scatspec {

Multiplier Multiplier::identity() { return {}; }

Multiplier Multiplier::imaginary_power(double gamma) {
  if (!std::isfinite(gamma)) fail(ErrorCode::bad_multiplier, "imaginary_power: γ must be finite");
  Multiplier m;
  m.kind_ = MultiplierKind::imaginary_power;
  m.param_ = gamma;
  return m;
}

Multiplier Multiplier::heat(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) fail(ErrorCode::bad_multiplier, "heat: t must be finite and nonnegative");
  Multiplier m;
  m.kind_ = MultiplierKind::heat;
  m.param_ = t;
  return m;
}

Multiplier Multiplier::custom(std::vector<double> energies, std::vector<cplx> values) {
  if (energies.size() < 2 || energies.size() != values.size())
    fail(ErrorCode::bad_multiplier, "custom multiplier needs at least two (E, μ) samples");
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (!(energies[i] > energies[i - 1])) fail(ErrorCode::bad_multiplier, "custom multiplier energies must increase");
  Multiplier m;
  m.kind_ = MultiplierKind::custom;
  m.real_table_ = std::all_of(values.begin(), values.end(), [](cplx v) { return v.imag() == 0.0; });
  m.energies_ = std::move(energies);
  m.values_ = std::move(values);
  return m;
}

std::string Multiplier::tag() const {
  switch (kind_) {
  case MultiplierKind::identity: return "identity";
  case MultiplierKind::imaginary_power: return "imaginary_power";
  case MultiplierKind::heat: return "heat";
  case MultiplierKind::custom: return "custom";
  }
  return "identity";
}

std::string Multiplier::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << tag();
  if (kind_ == MultiplierKind::imaginary_power) os << "(gamma=" << param_ << ")";
  if (kind_ == MultiplierKind::heat) os << "(t=" << param_ << ")";
  if (kind_ == MultiplierKind::custom) os << "(n=" << energies_.size() << ")";
  return os.str();
}

std::string Multiplier::hash() const {
  Sha256 h;
  h.text(describe());
  h.f64s(energies_);
  for (const auto& v : values_) {
    h.f64(v.real());
    h.f64(v.imag());
  }
  return h.hex();
}

cplx Multiplier::operator()(double e) const {
  if (!std::isfinite(e)) fail(ErrorCode::domain_error, "multiplier evaluated at a non-finite energy");
  switch (kind_) {
  case MultiplierKind::identity: return 1.0;
  case MultiplierKind::imaginary_power:
    if (e == 0.0) return 1.0;
    return std::polar(1.0, param_ * std::log(std::abs(e)));
  case MultiplierKind::heat: {
    const double v = std::exp(-param_ * e);
    if (!std::isfinite(v)) fail(ErrorCode::domain_error, "heat multiplier overflows at E=" + std::to_string(e));
    return v;
  }
  case MultiplierKind::custom: {
    if (e < energies_.front() || e > energies_.back())
      fail(ErrorCode::domain_error, "custom multiplier undefined at E=" + std::to_string(e));
    auto it = std::upper_bound(energies_.begin(), energies_.end(), e);
    std::size_t i = static_cast<std::size_t>(it - energies_.begin());
    if (i >= energies_.size()) return values_.back();
    const double th = (e - energies_[i - 1]) / (energies_[i] - energies_[i - 1]);
    return (1.0 - th) * values_[i - 1] + th * values_[i];
  }
  }
  return 1.0;
}

Multiplier parse_multiplier(const std::string& tag, const std::map<std::string, double>& params) {
  auto get = [&](const char* key) {
    auto it = params.find(key);
    if (it == params.end()) fail(ErrorCode::bad_multiplier, tag + ": missing parameter '" + key + "'");
    return it->second;
  };
  if (tag == "identity") return Multiplier::identity();
  if (tag == "imaginary_power") return Multiplier::imaginary_power(get("gamma"));
  if (tag == "heat") return Multiplier::heat(get("t"));
  if (tag == "custom") fail(ErrorCode::bad_multiplier, "custom multipliers need a sampled table");
  fail(ErrorCode::bad_multiplier, "unknown multiplier tag '" + tag + "'");
}

} // namespace scatspec
