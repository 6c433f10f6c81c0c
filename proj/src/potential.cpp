#include "scatspec/potential.hpp"

#include "scatspec/error.hpp"
#include "scatspec/hashing.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace scatspec {

namespace {

double param(const std::map<std::string, double>& p, const std::string& key, double fallback) {
  auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

double require_param(const std::map<std::string, double>& p, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) fail(ErrorCode::invalid_potential, "missing parameter '" + key + "'");
  if (!std::isfinite(it->second)) fail(ErrorCode::invalid_potential, "non-finite parameter '" + key + "'");
  return it->second;
}

double raw_value(const AnalyticForm& f, double x) {
  const auto& p = f.params;
  switch (f.tag) {
  case PotentialTag::free: return 0.0;
  case PotentialTag::square_well: {
    const double depth = param(p, "depth", -1.0);
    const double half = 0.5 * param(p, "width", 2.0);
    const double d = std::abs(x - param(p, "center", 0.0));
    if (std::abs(d - half) <= 1e-12 * std::max(1.0, half)) return 0.5 * depth;
    return d < half ? depth : 0.0;
  }
  case PotentialTag::sech2: {
    const double c = std::cosh(x / param(p, "scale", 1.0));
    return param(p, "amplitude", -2.0) / (c * c);
  }
  case PotentialTag::gaussian: {
    const double s = param(p, "sigma", 1.0);
    return param(p, "amplitude", -1.0) * std::exp(-x * x / (2.0 * s * s));
  }
  case PotentialTag::bump: {
    const double u = 2.0 * x / param(p, "width", 2.0);
    if (std::abs(u) >= 1.0) return 0.0;
    return param(p, "amplitude", 1.0) * std::exp(1.0 - 1.0 / (1.0 - u * u));
  }
  }
  return 0.0;
}

//! Outer edge of the closed-form support, or +inf for analytic tails.
double support_radius(const AnalyticForm& f) {
  const auto& p = f.params;
  switch (f.tag) {
  case PotentialTag::free: return 0.0;
  case PotentialTag::square_well: return std::abs(param(p, "center", 0.0)) + 0.5 * param(p, "width", 2.0);
  case PotentialTag::bump: return 0.5 * param(p, "width", 2.0);
  default: return INFINITY;
  }
}

void validate(const AnalyticForm& f) {
  const auto& p = f.params;
  auto positive = [&](const char* key) {
    if (p.count(key) && !(p.at(key) > 0.0))
      fail(ErrorCode::invalid_potential, std::string("parameter '") + key + "' must be positive");
  };
  for (const auto& [k, v] : p)
    if (!std::isfinite(v)) fail(ErrorCode::invalid_potential, "non-finite parameter '" + k + "'");
  positive("width");
  positive("scale");
  positive("sigma");
}

WeightedNorms compute_norms(const UniformGrid& g, const std::vector<double>& v) {
  WeightedNorms n;
  const auto w = trapezoid_weights(g.count, g.step);
  for (std::size_t i = 0; i < g.count; ++i) {
    const double a = std::abs(v[i]) * w[i];
    const double ax = 1.0 + std::abs(g.x(i));
    n.l1 += a;
    n.l1_1 += a * ax;
    n.l1_2 += a * ax * ax;
    n.t_l1 += a * std::abs(g.x(i));
    n.integral += v[i] * w[i];
  }
  return n;
}

std::string compute_hash(const UniformGrid& g, const std::vector<double>& v,
                         const std::optional<AnalyticForm>& a) {
  Sha256 h;
  h.text("potential/v1");
  h.f64(g.x_min).f64(g.step).u64(g.count);
  if (a) {
    h.text(tag_name(a->tag));
    for (const auto& [k, x] : a->params) h.text(k).f64(x);
    h.f64(a->truncation_radius);
  } else {
    h.text("samples");
  }
  h.f64s(v);
  return h.hex();
}

} // namespace

const char* tag_name(PotentialTag tag) {
  switch (tag) {
  case PotentialTag::free: return "free";
  case PotentialTag::square_well: return "square_well";
  case PotentialTag::sech2: return "sech2";
  case PotentialTag::gaussian: return "gaussian";
  case PotentialTag::bump: return "bump";
  }
  return "?";
}

PotentialTag parse_tag(const std::string& name) {
  for (auto t : {PotentialTag::free, PotentialTag::square_well, PotentialTag::sech2, PotentialTag::gaussian,
                 PotentialTag::bump})
    if (name == tag_name(t)) return t;
  fail(ErrorCode::unknown_tag, "unknown potential tag '" + name + "'");
}

double AnalyticForm::evaluate(double x) const {
  if (std::abs(x) > truncation_radius) return 0.0;
  return raw_value(*this, x);
}

double analytic_tail_weight(const AnalyticForm& f, double r) {
  r = std::max(r, 0.0);
  const double edge = support_radius(f);
  if (r >= edge) return 0.0;
  double length = 0.0;
  switch (f.tag) {
  case PotentialTag::sech2: length = 60.0 * param(f.params, "scale", 1.0); break;
  case PotentialTag::gaussian: length = 14.0 * param(f.params, "sigma", 1.0); break;
  default: length = edge - r; break;
  }
  // Composite Simpson on both half-lines.
  const int n = 20000;
  const double hstep = length / n;
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double x = r + i * hstep;
      const double wgt = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      s += wgt * (1.0 + x) * (1.0 + x) * std::abs(raw_value(f, sign * x));
    }
    total += s * hstep / 3.0;
  }
  return total;
}

Potential::Potential(UniformGrid grid, std::vector<double> samples, std::optional<AnalyticForm> analytic)
    : grid_(grid), samples_(std::move(samples)), analytic_(std::move(analytic)) {
  if (grid_.count == 0 || samples_.size() != grid_.count)
    fail(ErrorCode::invalid_potential, "potential: sample count does not match grid");
  if (!(grid_.step > 0.0) || !std::isfinite(grid_.x_min))
    fail(ErrorCode::invalid_potential, "potential: bad grid");
  for (double v : samples_)
    if (!std::isfinite(v)) fail(ErrorCode::invalid_potential, "potential: non-finite sample");
  norms_ = compute_norms(grid_, samples_);
  if (analytic_) {
    const double covered = std::min(-grid_.x_min, grid_.x_max());
    tail_warning_ = analytic_tail_weight(*analytic_, covered) > kTailWeightLimit &&
                    covered < analytic_->truncation_radius;
  } else {
    // Without a closed form, flag windows whose edge samples carry weight.
    const double edge = std::abs(samples_.front()) + std::abs(samples_.back());
    tail_warning_ = edge * std::pow(1.0 + std::max(-grid_.x_min, grid_.x_max()), 2) > kTailWeightLimit;
  }
  hash_ = compute_hash(grid_, samples_, analytic_);
}

bool Potential::is_zero() const {
  for (double v : samples_)
    if (v != 0.0) return false;
  return true;
}

std::optional<std::pair<std::size_t, std::size_t>> Potential::support_indices() const {
  std::size_t lo = samples_.size(), hi = 0;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i] != 0.0) {
      lo = std::min(lo, i);
      hi = i;
    }
  }
  if (lo == samples_.size()) return std::nullopt;
  return std::make_pair(lo, hi);
}

Potential Potential::reflected() const {
  UniformGrid g{-grid_.x_max(), grid_.step, grid_.count};
  std::vector<double> s(samples_.rbegin(), samples_.rend());
  std::optional<AnalyticForm> a = analytic_;
  if (a && a->params.count("center")) a->params["center"] = -a->params["center"];
  return Potential(g, std::move(s), a);
}

double weighted_norm(const Potential& v, int gamma) {
  switch (gamma) {
  case 0: return v.norms().l1;
  case 1: return v.norms().l1_1;
  case 2: return v.norms().l1_2;
  default: fail(ErrorCode::invalid_argument, "weighted_norm: gamma must be 0, 1 or 2");
  }
}

Potential reference_potential(PotentialTag tag, const std::map<std::string, double>& params,
                              const UniformGrid& grid) {
  AnalyticForm form{tag, params, 0.0};
  validate(form);
  switch (tag) {
  case PotentialTag::free: form.params.clear(); break;
  case PotentialTag::square_well:
    require_param(params, "depth");
    require_param(params, "width");
    form.params.try_emplace("center", 0.0);
    break;
  case PotentialTag::sech2:
    require_param(params, "amplitude");
    form.params.try_emplace("scale", 1.0);
    break;
  case PotentialTag::gaussian:
    require_param(params, "amplitude");
    form.params.try_emplace("sigma", 1.0);
    break;
  case PotentialTag::bump:
    require_param(params, "amplitude");
    require_param(params, "width");
    break;
  }
  validate(form);
  double radius = support_radius(form);
  if (!std::isfinite(radius)) {
    double lo = 0.0, hi = 1.0;
    while (analytic_tail_weight(form, hi) >= kTailWeightLimit) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (analytic_tail_weight(form, mid) >= kTailWeightLimit ? lo : hi) = mid;
    }
    radius = hi;
  } else {
    radius *= 1.0 + 1e-12;
  }
  form.truncation_radius = radius;
  std::vector<double> s(grid.count);
  for (std::size_t i = 0; i < grid.count; ++i) s[i] = form.evaluate(grid.x(i));
  return Potential(grid, std::move(s), form);
}

Potential reference_potential(const std::string& tag, const std::map<std::string, double>& params,
                              const UniformGrid& grid) {
  return reference_potential(parse_tag(tag), params, grid);
}

void save_potential(const Potential& v, const std::string& stem) {
  nlohmann::ordered_json j;
  j["format"] = "scatspec.potential/1";
  j["grid"] = {{"x_min", v.grid().x_min}, {"step", v.grid().step}, {"count", v.grid().count}};
  j["hash"] = v.hash();
  j["sidecar"] = "f64le";
  if (v.analytic()) {
    j["tag"] = tag_name(v.analytic()->tag);
    j["params"] = v.analytic()->params;
    j["truncation_radius"] = v.analytic()->truncation_radius;
  }
  std::ofstream js(stem + ".json");
  if (!js) fail(ErrorCode::io_error, "cannot write " + stem + ".json");
  js << j.dump(2) << "\n";
  std::ofstream bin(stem + ".f64", std::ios::binary);
  if (!bin) fail(ErrorCode::io_error, "cannot write " + stem + ".f64");
  for (double x : v.samples()) {
    auto u = std::bit_cast<std::uint64_t>(x);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(u >> (8 * i));
    bin.write(reinterpret_cast<const char*>(b), 8);
  }
}

Potential load_potential(const std::string& stem) {
  std::ifstream js(stem + ".json");
  if (!js) fail(ErrorCode::io_error, "cannot read " + stem + ".json");
  const auto j = nlohmann::json::parse(js);
  UniformGrid g{j["grid"]["x_min"].get<double>(), j["grid"]["step"].get<double>(),
                j["grid"]["count"].get<std::size_t>()};
  std::ifstream bin(stem + ".f64", std::ios::binary);
  if (!bin) fail(ErrorCode::io_error, "cannot read " + stem + ".f64");
  std::vector<double> s(g.count);
  for (auto& x : s) {
    unsigned char b[8];
    if (!bin.read(reinterpret_cast<char*>(b), 8)) fail(ErrorCode::io_error, "truncated sidecar " + stem + ".f64");
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    x = std::bit_cast<double>(u);
  }
  std::optional<AnalyticForm> a;
  if (j.contains("tag")) {
    a = AnalyticForm{parse_tag(j["tag"].get<std::string>()), j["params"].get<std::map<std::string, double>>(),
                     j["truncation_radius"].get<double>()};
  }
  Potential v(g, std::move(s), a);
  if (v.hash() != j["hash"].get<std::string>())
    fail(ErrorCode::inconsistency, "potential hash mismatch for " + stem);
  return v;
}

} // namespace scatspec
