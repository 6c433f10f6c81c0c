#include "scatspec/cli/config.hpp"

#include "scatspec/error.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace scatspec {
namespace pt = boost::property_tree;

namespace {

double number(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::bad_config, "'" + key + "' is not a number: " + s);
  }
  while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
  if (used != s.size()) fail(ErrorCode::bad_config, "'" + key + "' is not a number: " + s);
  return v;
}

int integer(const std::string& key, const std::string& s) {
  const double v = number(key, s);
  if (v != std::floor(v) || std::abs(v) > 1e9) fail(ErrorCode::bad_config, "'" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> list(const std::string& key, const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(number(key, item.substr(a, b - a + 1)));
  }
  return out;
}

class Section {
public:
  Section(const pt::ptree& root, const std::string& name) : name_(name) {
    if (auto c = root.get_child_optional(name)) tree_ = *c;
  }
  bool has(const std::string& k) const { return tree_.get_optional<std::string>(k).has_value(); }
  std::string text(const std::string& k, const std::string& d) const { return tree_.get<std::string>(k, d); }
  double num(const std::string& k, double d) const { return has(k) ? number(name_ + "." + k, text(k, "")) : d; }
  int integer_or(const std::string& k, int d) const { return has(k) ? integer(name_ + "." + k, text(k, "")) : d; }
  RangeSpec range(const std::string& p, RangeSpec d) const {
    return {num(p + "_min", d.lo), num(p + "_max", d.hi), num(p + "_step", d.step)};
  }
  const pt::ptree& tree() const { return tree_; }

private:
  pt::ptree tree_;
  std::string name_;
};

void check_range(const std::string& name, const RangeSpec& r) {
  if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.hi >= r.lo))
    fail(ErrorCode::bad_config, name + ": need finite min <= max");
  if (!(r.step > 0.0)) fail(ErrorCode::bad_config, name + ": step must be positive");
  if ((r.hi - r.lo) / r.step > 1e6) fail(ErrorCode::bad_config, name + ": more than 10^6 nodes");
}

} // namespace

std::vector<double> RangeSpec::nodes() const {
  std::vector<double> out;
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
  return out;
}

Potential PotentialSpec::build() const {
  const UniformGrid g = UniformGrid::from_range(x_min, x_max, step);
  return reference_potential(tag, params, g);
}

Multiplier MultiplierSpec::build() const {
  if (tag == "custom") {
    if (energies.size() != values.size() || energies.size() < 2)
      fail(ErrorCode::bad_multiplier, "custom multiplier needs matching energies/values lists (at least 2)");
    std::vector<cplx> v(values.begin(), values.end());
    return Multiplier::custom(energies, v);
  }
  return parse_multiplier(tag, params);
}

std::string cache_policy_name(CachePolicy p) {
  switch (p) {
  case CachePolicy::off: return "off";
  case CachePolicy::read: return "read";
  case CachePolicy::readwrite: return "readwrite";
  }
  return "?";
}

BlockKind parse_block_kind(const std::string& s) {
  if (s == "phi") return BlockKind::phi;
  if (s == "Phi") return BlockKind::Phi;
  if (s == "high_cut") return BlockKind::high_cut;
  if (s == "phi_cut") return BlockKind::phi_cut;
  fail(ErrorCode::bad_config, "unknown kernel block '" + s + "'");
}

std::string block_kind_name(BlockKind k) {
  switch (k) {
  case BlockKind::phi: return "phi";
  case BlockKind::Phi: return "Phi";
  case BlockKind::high_cut: return "high_cut";
  case BlockKind::phi_cut: return "phi_cut";
  }
  return "?";
}

KernelOptions ExperimentConfig::kernel_options() const {
  KernelOptions o;
  o.points_per_period = points_per_period;
  o.part = part;
  o.jost = jost_options();
  return o;
}

JostOptions ExperimentConfig::jost_options() const {
  JostOptions o;
  o.tol = tol_jost;
  o.jobs = jobs;
  return o;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree root;
  try {
    std::istringstream in(text);
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    fail(ErrorCode::bad_config, std::string("config does not parse: ") + e.message() + " at line " +
                                    std::to_string(e.line()));
  }
  static const std::set<std::string> known = {"potential", "grids",  "window", "multiplier", "tolerances",
                                              "kernel",    "verify", "output", "cache",      "run",   "apply"};
  for (const auto& [name, _] : root)
    if (!known.count(name)) fail(ErrorCode::bad_config, "unknown section [" + name + "]");

  ExperimentConfig c;
  c.source_text = text;
  const Section pot(root, "potential");
  c.potential.tag = pot.text("tag", "free");
  c.potential.x_min = pot.num("x_min", c.potential.x_min);
  c.potential.x_max = pot.num("x_max", c.potential.x_max);
  c.potential.step = pot.num("step", c.potential.step);
  for (const auto& [k, v] : pot.tree())
    if (k != "tag" && k != "x_min" && k != "x_max" && k != "step")
      c.potential.params[k] = number("potential." + k, v.data());

  const Section grids(root, "grids");
  c.k = grids.range("k", c.k);
  c.x = grids.range("x", c.x);
  c.y = grids.range("y", c.x);

  const Section win(root, "window");
  c.j_lo = win.integer_or("j_lo", c.j_lo);
  c.j_hi = win.integer_or("j_hi", c.j_hi);
  try {
    c.profile = parse_profile(win.text("profile", "exponential"));
  } catch (const Error& e) {
    fail(ErrorCode::bad_config, e.what());
  }

  const Section mul(root, "multiplier");
  c.multiplier.tag = mul.text("tag", "identity");
  for (const auto& [k, v] : mul.tree()) {
    if (k == "tag") continue;
    if (k == "energies") c.multiplier.energies = list("multiplier.energies", v.data());
    else if (k == "values") c.multiplier.values = list("multiplier.values", v.data());
    else c.multiplier.params[k] = number("multiplier." + k, v.data());
  }

  const Section tol(root, "tolerances");
  c.tol_jost = tol.num("jost", c.tol_jost);
  c.tol_scattering = tol.num("scattering", c.tol_scattering);
  c.tol_marchenko = tol.num("marchenko", c.tol_marchenko);

  const Section ker(root, "kernel");
  c.block = parse_block_kind(ker.text("block", "phi"));
  c.block_j = ker.integer_or("j", c.block_j);
  c.block_j_cut = ker.integer_or("j_cut", c.block_j_cut);
  c.points_per_period = ker.num("points_per_period", c.points_per_period);
  const std::string part = ker.text("part", "ac");
  if (part == "ac") c.part = KernelPart::ac;
  else if (part == "pp") c.part = KernelPart::pp;
  else if (part == "full") c.part = KernelPart::full;
  else fail(ErrorCode::bad_config, "kernel.part must be ac, pp or full");

  const Section app(root, "apply");
  c.apply_center = app.num("center", c.apply_center);
  c.apply_width = app.num("width", c.apply_width);
  if (!(c.apply_width > 0.0)) fail(ErrorCode::bad_config, "apply.width must be positive");

  const Section ver(root, "verify");
  for (const auto& [k, v] : ver.tree()) c.verify[k] = v.data();

  const Section out(root, "output");
  c.output_dir = out.text("dir", c.output_dir);
  const Section cache(root, "cache");
  const std::string pol = cache.text("policy", "readwrite");
  if (pol == "off") c.cache = CachePolicy::off;
  else if (pol == "read") c.cache = CachePolicy::read;
  else if (pol == "readwrite") c.cache = CachePolicy::readwrite;
  else fail(ErrorCode::bad_config, "cache.policy must be off, read or readwrite");
  c.cache_dir = cache.text("dir", c.cache_dir);

  const Section run(root, "run");
  const double seed = run.num("seed", 1.0);
  if (seed < 0 || seed != std::floor(seed) || seed > 9.007199254740992e15)
    fail(ErrorCode::bad_config, "run.seed must be a nonnegative integer");
  c.seed = static_cast<std::uint64_t>(seed);
  const int jobs = run.integer_or("jobs", 0);
  if (jobs < 0) fail(ErrorCode::bad_config, "run.jobs must be nonnegative");
  c.jobs = static_cast<unsigned>(jobs);

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io_error, "cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) {
  check_range("grids.k", c.k);
  check_range("grids.x", c.x);
  check_range("grids.y", c.y);
  if (c.k.lo < 0.0) fail(ErrorCode::bad_config, "grids.k: energies are sampled at k >= 0");
  if (!(c.potential.step > 0.0) || !(c.potential.x_max > c.potential.x_min))
    fail(ErrorCode::bad_config, "potential: need x_min < x_max and a positive step");
  if (!(c.tol_jost > 0.0 && c.tol_scattering > 0.0 && c.tol_marchenko > 0.0))
    fail(ErrorCode::bad_config, "tolerances must be positive");
  if (!(c.j_lo < c.j_hi)) fail(ErrorCode::bad_config, "window: need j_lo < j_hi");
  if (!(c.points_per_period >= 2.0)) fail(ErrorCode::bad_config, "kernel.points_per_period must be at least 2");
  // The x and y grids must resolve the shortest wave of the window, 8 nodes per period.
  const double k_top = DyadicSystem::k_hi(c.j_hi);
  const double need = 2.0 * std::numbers::pi / (8.0 * k_top);
  if (c.x.step > need * (1 + 1e-12) || c.y.step > need * (1 + 1e-12))
    fail(ErrorCode::bad_config, "grids.x/y step exceeds the Nyquist bound " + std::to_string(need) +
                                    " for j_hi = " + std::to_string(c.j_hi));
  // Tags are checked here so that a typo fails before any stage runs.
  (void)c.multiplier.build();
  try {
    (void)parse_tag(c.potential.tag);
  } catch (const Error& e) {
    fail(ErrorCode::bad_config, e.what());
  }
}

double verify_number(const ExperimentConfig& cfg, const std::string& key, double fallback) {
  auto it = cfg.verify.find(key);
  return it == cfg.verify.end() ? fallback : number("verify." + key, it->second);
}

std::vector<double> verify_list(const ExperimentConfig& cfg, const std::string& key, std::vector<double> fallback) {
  auto it = cfg.verify.find(key);
  return it == cfg.verify.end() ? fallback : list("verify." + key, it->second);
}

} // namespace scatspec
