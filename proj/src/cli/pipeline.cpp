#include "scatspec/cli/pipeline.hpp"

#include "scatspec/apply.hpp"
#include "scatspec/binio.hpp"
#include "scatspec/hashing.hpp"
#include "scatspec/hoermander.hpp"
#include "scatspec/marchenko.hpp"
#include "scatspec/parallel.hpp"
#include "scatspec/scattering.hpp"
#include "scatspec/verify/besov.hpp"
#include "scatspec/verify/cz.hpp"
#include "scatspec/verify/pointwise_decay.hpp"
#include "scatspec/verify/tails.hpp"
#include "scatspec/verify/weak11.hpp"
#include "scatspec/verify/weighted_l2.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>

namespace scatspec {

const char* const kScatspecVersion = "0.4.0";

namespace {
using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class Context {
public:
  Context(const ExperimentConfig& c, RunOutcome& o) : cfg(c), out(o) {
    ensure_directory(cfg.output_dir);
  }
  std::string path(const std::string& name) {
    out.files.push_back(name);
    return (fs::path(cfg.output_dir) / name).string();
  }
  const Potential& potential() {
    if (!v_) v_ = cfg.potential.build();
    return *v_;
  }
  void report(const EstimateReport& r) {
    write_report_csv(r, path(r.id + ".csv"));
    write_report_json(r, path(r.id + ".json"));
    reports.push_back({{"id", r.id}, {"sup_ratio", num(r.sup_ratio)}, {"slope", num(r.slope)}, {"pass", r.pass}});
    if (!r.pass) out.status = 1;
    std::clog << "  " << r.id << ": " << (r.pass ? "pass" : "FAIL") << " (" << std::fixed << std::setprecision(2)
              << r.runtime << " s)\n";
  }
  template <class F> void stage(const std::string& name, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.stage_seconds[name] = s;
    stages.push_back(name);
    std::clog << "stage " << name << ": " << std::fixed << std::setprecision(3) << s << " s\n";
  }

  const ExperimentConfig& cfg;
  RunOutcome& out;
  json reports = json::array();
  std::vector<std::string> stages;

private:
  std::optional<Potential> v_;
};

void write_json(const std::string& path, const json& j) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::io_error, "cannot write " + path);
  f << j.dump(2) << "\n";
}

// --- stages --------------------------------------------------------------

void stage_scatter(Context& ctx) {
  ScatteringOptions so;
  so.tol = ctx.cfg.tol_scattering;
  const auto scat = scattering_on_grid(ctx.potential(), ctx.cfg.k.nodes(), ctx.cfg.jost_options(), so);
  write_scattering_csv(scat, ctx.path("scattering.csv"));
  write_scattering_manifest(scat, ctx.path("scattering.json"));
}

void stage_marchenko(Context& ctx) {
  MarchenkoOptions mo;
  mo.tol = ctx.cfg.tol_marchenko;
  const auto mk = solve_marchenko(ctx.potential(), mo);
  const auto& g = ctx.potential().grid();
  json j;
  j["nu0"] = mk.nu0;
  j["nu_marchenko"] = nu_from_marchenko(mk);
  const double k0 = born_threshold(mk);
  j["born_k0"] = k0;
  j["j0"] = j0_from_threshold(k0, std::abs(mk.nu0) + density_b(mk).l1);
  j["b_l1"] = density_b(mk).l1;
  for (int order : {0, 1}) {
    const auto t = weighted_B_bounds(mk, order, g.x_min, g.x_max());
    write_weighted_bounds_csv(t, ctx.path("weighted_bounds_" + std::to_string(order) + ".csv"));
    j["sup_plus_" + std::to_string(order)] = t.sup_plus;
    j["sup_minus_" + std::to_string(order)] = t.sup_minus;
  }
  write_json(ctx.path("marchenko.json"), j);
}

std::string kernel_key(const ExperimentConfig& cfg, const Potential& v, const Multiplier& mu, const Block& b,
                       const std::vector<double>& x, const std::vector<double>& y, const KernelOptions& ko) {
  Sha256 h;
  h.text("kernel/1").text(v.hash()).text(mu.hash()).text(b.name()).text(profile_name(cfg.profile));
  h.f64s(x).f64s(y).f64(ko.points_per_period).u64(ko.min_points).u64(static_cast<std::uint64_t>(ko.part));
  h.f64(ko.jost.tol).f64(ko.eig_tol);
  return h.hex();
}

void stage_kernel(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& v = ctx.potential();
  const Multiplier mu = cfg.multiplier.build();
  const Block blk{cfg.block, cfg.block_j, cfg.block_j_cut};
  const auto x = cfg.x.nodes(), y = cfg.y.nodes();
  const KernelOptions ko = cfg.kernel_options();
  const std::string key = kernel_key(cfg, v, mu, blk, x, y, ko);
  const std::string cache_file = (fs::path(cfg.cache_dir) / (key + ".kernel")).string();

  OperatorKernel k;
  bool hit = false;
  if (cfg.cache != CachePolicy::off && file_exists(cache_file)) {
    BinaryReader in(cache_file);
    if (in.text() == key) {
      k.x = in.f64s();
      k.y = in.f64s();
      k.values = in.cmatrix();
      k.quad.lambda = in.f64s();
      k.quad.weight = in.f64s();
      k.quad.step = in.f64();
      k.quad.required_step = in.f64();
      k.quad.delta_eff = in.f64();
      k.symmetry_residual = in.f64();
      k.max_imag = in.f64();
      k.block = blk;
      k.multiplier = mu.describe();
      k.part = ko.part;
      k.potential_hash = v.hash();
      hit = true;
    }
  }
  if (!hit) {
    const DyadicSystem d(cfg.j_lo, cfg.j_hi, cfg.profile);
    k = assemble_kernel(v, mu, d, blk, x, y, ko);
    if (cfg.cache == CachePolicy::readwrite) {
      ensure_directory(cfg.cache_dir);
      const std::string tmp = cache_file + ".tmp";
      BinaryWriter w(tmp);
      w.text(key);
      w.f64s(k.x);
      w.f64s(k.y);
      w.cmatrix(k.values);
      w.f64s(k.quad.lambda);
      w.f64s(k.quad.weight);
      w.f64(k.quad.step);
      w.f64(k.quad.required_step);
      w.f64(k.quad.delta_eff);
      w.f64(k.symmetry_residual);
      w.f64(k.max_imag);
      w.close();
      fs::rename(tmp, cache_file);
    }
  }
  ctx.out.cache_hits["kernel"] = hit;
  std::clog << "kernel cache " << (hit ? "hit" : "miss") << " " << key.substr(0, 16) << "\n";

  write_kernel_csv(k, ctx.path("kernel.csv"));
  {
    std::ofstream f(ctx.path("kernel.f64"), std::ios::binary);
    if (!f) fail(ErrorCode::io_error, "cannot write kernel.f64");
    for (std::size_t i = 0; i < k.values.rows(); ++i)
      for (std::size_t c = 0; c < k.values.cols(); ++c) {
        const double re = k.values(i, c).real(), im = k.values(i, c).imag();
        f.write(reinterpret_cast<const char*>(&re), sizeof re);
        f.write(reinterpret_cast<const char*>(&im), sizeof im);
      }
  }
  json h;
  h["file"] = "kernel.f64";
  h["dtype"] = "float64";
  h["endianness"] = "little";
  h["layout"] = "row-major [x][y], (re, im) interleaved";
  h["shape"] = {k.values.rows(), k.values.cols(), 2};
  h["block"] = blk.name();
  h["multiplier"] = mu.describe();
  h["potential_hash"] = v.hash();
  h["cache_key"] = key;
  h["lambda_points"] = k.quad.lambda.size();
  h["lambda_step"] = num(k.quad.step);
  h["required_step"] = num(k.quad.required_step);
  h["delta_eff"] = num(k.quad.delta_eff);
  h["symmetry_residual"] = num(k.symmetry_residual);
  h["max_imag"] = num(k.max_imag);
  write_json(ctx.path("kernel.json"), h);
}

std::vector<cplx> gaussian(const std::vector<double>& x, double c, double w) {
  std::vector<cplx> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double u = (x[i] - c) / w;
    f[i] = std::exp(-0.5 * u * u);
  }
  return f;
}

void stage_apply(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto x = cfg.x.nodes();
  const auto f = gaussian(x, cfg.apply_center, cfg.apply_width);
  ApplyOptions ao;
  ao.j_lo = cfg.j_lo;
  ao.j_hi = cfg.j_hi;
  ao.profile = cfg.profile;
  ao.kernel = cfg.kernel_options();
  const auto r = apply_multiplier(cfg.multiplier.build(), ctx.potential(), x, f, ao);
  std::ofstream o(ctx.path("apply.csv"), std::ios::binary);
  if (!o) fail(ErrorCode::io_error, "cannot write apply.csv");
  o << std::setprecision(17) << "x,f,re,im,ac_re,ac_im,pp_re,pp_im\r\n";
  for (std::size_t i = 0; i < x.size(); ++i)
    o << x[i] << ',' << f[i].real() << ',' << r.value[i].real() << ',' << r.value[i].imag() << ',' << r.ac[i].real()
      << ',' << r.ac[i].imag() << ',' << r.pp[i].real() << ',' << r.pp[i].imag() << "\r\n";
}

void stage_hnorm(Context& ctx) {
  HoermanderOptions ho;
  ho.s = verify_number(ctx.cfg, "hnorm_s", 1.0);
  ho.profile = ctx.cfg.profile;
  const Multiplier mu = ctx.cfg.multiplier.build();
  const auto r = hoermander_norm(mu, ho);
  std::ofstream o(ctx.path("hnorm.csv"), std::ios::binary);
  if (!o) fail(ErrorCode::io_error, "cannot write hnorm.csv");
  o << std::setprecision(17) << "t,value\r\n";
  for (std::size_t i = 0; i < r.t.size(); ++i) o << r.t[i] << ',' << r.values[i] << "\r\n";
  json j;
  j["multiplier"] = mu.describe();
  j["s"] = ho.s;
  j["norm"] = r.norm;
  j["inf"] = r.inf;
  j["sup_abs"] = r.sup_abs;
  j["chi_norm"] = r.chi_norm;
  write_json(ctx.path("hnorm.json"), j);
}

void verify_wl2(Context& ctx, std::vector<double> s) {
  const auto& cfg = ctx.cfg;
  if (s.empty()) s = verify_list(cfg, "s", {0.0, 1.0});
  WeightedL2Options o;
  o.profile = cfg.profile;
  o.kernel = cfg.kernel_options();
  o.assert_slope = ctx.potential().is_zero();
  o.slope_tol = verify_number(cfg, "slope_tol", o.slope_tol);
  const auto reps = check_weighted_L2(ctx.potential(), s, cfg.j_lo, cfg.j_hi, o);
  for (const auto& r : reps) ctx.report(r);
  // interpolation between the extreme orders
  for (std::size_t i = 0; i < s.size(); ++i) {
    std::size_t a = s.size(), b = s.size();
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] < s[i] && (a == s.size() || s[k] < s[a])) a = k;
      if (s[k] > s[i] && (b == s.size() || s[k] > s[b])) b = k;
    }
    if (a < s.size() && b < s.size()) ctx.report(interpolation_check(reps[a], reps[b], reps[i], s[a], s[b], s[i]));
  }
}

void verify_decay(Context& ctx) {
  const auto& cfg = ctx.cfg;
  PointwiseDecayOptions o;
  o.epsilon = verify_number(cfg, "epsilon", o.epsilon);
  o.bound = verify_number(cfg, "decay_bound", o.bound);
  o.refine = verify_number(cfg, "refine", 1.0) != 0.0;
  o.profile = cfg.profile;
  o.kernel = cfg.kernel_options();
  const double j0 = verify_number(cfg, "j0", NAN);
  if (std::isfinite(j0)) o.j0 = static_cast<int>(j0);
  ctx.report(check_pointwise_decay(ctx.potential(), cfg.j_lo, cfg.j_hi, o));
}

void verify_weak11(Context& ctx) {
  const auto& cfg = ctx.cfg;
  Weak11Options o;
  o.members = static_cast<int>(verify_number(cfg, "members", o.members));
  o.width = verify_number(cfg, "width", o.width);
  o.half_length = verify_number(cfg, "half_length", o.half_length);
  o.j_lo = cfg.j_lo;
  o.j_hi = cfg.j_hi;
  o.refine = verify_number(cfg, "refine", o.refine);
  o.seed = cfg.seed;
  o.profile = cfg.profile;
  o.kernel = cfg.kernel_options();
  std::vector<Multiplier> mus;
  for (double g : verify_list(cfg, "gammas", {})) mus.push_back(Multiplier::imaginary_power(g));
  if (mus.empty()) mus.push_back(cfg.multiplier.build());
  for (const auto& r : weak11_experiment(mus, ctx.potential(), o)) ctx.report(r);
}

void verify_cz(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const int draws = static_cast<int>(verify_number(cfg, "draws", 1000));
  const int cells = static_cast<int>(verify_number(cfg, "cells", 1000));
  const double alpha = verify_number(cfg, "alpha", 1.0);
  if (draws < 1 || cells < 1) fail(ErrorCode::bad_config, "verify.draws and verify.cells must be positive");
  std::mt19937_64 rng(cfg.seed);
  std::exponential_distribution<double> height(0.5);
  std::bernoulli_distribution sign(0.5), spike(0.05);
  EstimateReport r;
  r.id = "cz";
  r.index_name = "draw";
  r.extra_names = {"cubes", "max_abs_g_over_alpha"};
  r.ratio_bound = 1.0;
  bool all = true;
  for (int d = 0; d < draws; ++d) {
    std::vector<double> f(static_cast<std::size_t>(cells));
    const bool signed_draw = d % 2 == 1;
    for (auto& v : f) {
      v = spike(rng) ? 20.0 * height(rng) : height(rng) * 0.5;
      if (signed_draw && sign(rng)) v = -v;
    }
    const auto cz = cz_decompose(f, 0.0, 1.0 / 16.0, alpha);
    const auto chk = cz_check(cz);
    all = all && chk.all();
    double gmax = 0.0;
    for (double g : cz.g) gmax = std::max(gmax, std::abs(g));
    r.add_row(d, cz.total_length, cz.l1 > 0 ? cz.total_length * alpha / cz.l1 : 0.0,
              {static_cast<double>(cz.cubes.size()), gmax / alpha});
  }
  r.checks["properties_i_ii_iii"] = all;
  r.finalize();
  ctx.report(r);
}

void verify_besov(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto x = cfg.x.nodes();
  const auto f = gaussian(x, cfg.apply_center, cfg.apply_width);
  BesovOptions o;
  o.j_lo = cfg.j_lo;
  o.j_hi = cfg.j_hi;
  o.profile = cfg.profile;
  o.kernel = cfg.kernel_options();
  ctx.report(check_besov_multiplier(cfg.multiplier.build(), ctx.potential(), x, f, verify_number(cfg, "alpha", 0.0),
                                    verify_number(cfg, "p", 2.0), verify_number(cfg, "q", 2.0),
                                    verify_number(cfg, "besov_bound", 1.0 + 1e-3), o));
}

void verify_tails(Context& ctx) {
  const auto& cfg = ctx.cfg;
  KernelTailOptions o;
  o.s = verify_number(cfg, "s_tail", 1.0);
  o.slope_tol = verify_number(cfg, "slope_tol", 0.1);
  o.assert_slope = ctx.potential().is_zero();
  o.profile = cfg.profile;
  o.kernel = cfg.kernel_options();
  const int jI = static_cast<int>(verify_number(cfg, "j_I", 0));
  ctx.report(check_kernel_tail_L1(cfg.multiplier.build(), ctx.potential(), verify_number(cfg, "cube_center", 0.0), jI,
                                  cfg.j_lo, cfg.j_hi, o));
}

void stage_report(Context& ctx) {
  // Collects every report JSON already present in the output directory.
  std::vector<fs::path> found;
  for (const auto& e : fs::directory_iterator(ctx.cfg.output_dir)) {
    const auto p = e.path();
    if (p.extension() != ".json") continue;
    const auto n = p.filename().string();
    if (n == "manifest.json" || n == "summary.json") continue;
    found.push_back(p);
  }
  std::sort(found.begin(), found.end());
  json rows = json::array();
  for (const auto& p : found) {
    std::ifstream in(p);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception&) {
      continue;
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("pass")) continue;
    rows.push_back({{"id", j["id"]}, {"sup_ratio", j["sup_ratio"]}, {"slope", j["slope"]}, {"pass", j["pass"]}});
    if (!j["pass"].get<bool>()) ctx.out.status = 1;
  }
  write_json(ctx.path("summary.json"), rows);
  std::ofstream o(ctx.path("summary.csv"), std::ios::binary);
  o << std::setprecision(17) << "id,sup_ratio,slope,pass\r\n";
  for (const auto& r : rows) {
    auto cell = [](const json& v) { return v.is_null() ? std::string() : v.dump(); };
    o << r["id"].get<std::string>() << ',' << cell(r["sup_ratio"]) << ',' << cell(r["slope"]) << ','
      << (r["pass"].get<bool>() ? "true" : "false") << "\r\n";
  }
  ctx.reports = rows;
}

} // namespace

std::string error_json(ErrorCode code, const std::string& message) {
  json j;
  j["code"] = error_code_name(code);
  j["message"] = message;
  return j.dump();
}

RunOutcome run(const ExperimentConfig& cfg, const RunRequest& req) {
  RunOutcome out;
  set_default_jobs(cfg.jobs);
  Context ctx(cfg, out);
  const std::string& c = req.command;
  if (c == "scatter") ctx.stage("scatter", [&] { stage_scatter(ctx); });
  else if (c == "marchenko") ctx.stage("marchenko", [&] { stage_marchenko(ctx); });
  else if (c == "kernel") ctx.stage("kernel", [&] { stage_kernel(ctx); });
  else if (c == "apply") ctx.stage("apply", [&] { stage_apply(ctx); });
  else if (c == "hnorm") ctx.stage("hnorm", [&] { stage_hnorm(ctx); });
  else if (c == "report") ctx.stage("report", [&] { stage_report(ctx); });
  else if (c == "verify") {
    const std::string& k = req.check;
    ctx.stage("verify_" + k, [&] {
      if (k == "wl2") verify_wl2(ctx, req.s_values);
      else if (k == "decay") verify_decay(ctx);
      else if (k == "weak11") verify_weak11(ctx);
      else if (k == "cz") verify_cz(ctx);
      else if (k == "besov") verify_besov(ctx);
      else if (k == "tails") verify_tails(ctx);
      else fail(ErrorCode::invalid_argument, "unknown verify check '" + k + "'");
    });
  } else {
    fail(ErrorCode::invalid_argument, "unknown command '" + c + "'");
  }

  json m;
  m["tool"] = "scatspec";
  m["version"] = kScatspecVersion;
  m["command"] = req.check.empty() ? c : c + " " + req.check;
  if (!req.s_values.empty()) m["s"] = req.s_values;
  {
    Sha256 h;
    h.text(cfg.source_text);
    m["config_hash"] = h.hex();
  }
  m["config"] = cfg.source_text;
  json pot;
  pot["tag"] = cfg.potential.tag;
  json params = json::object();
  for (const auto& [k, v] : cfg.potential.params) params[k] = v;
  pot["params"] = params;
  if (c != "report" && c != "hnorm") {
    const auto& v = ctx.potential();
    pot["hash"] = v.hash();
    pot["l1"] = v.norms().l1;
    pot["l1_1"] = v.norms().l1_1;
    pot["l1_2"] = v.norms().l1_2;
  }
  m["potential"] = pot;
  const Multiplier mu = cfg.multiplier.build();
  m["multiplier"] = {{"describe", mu.describe()}, {"hash", mu.hash()}};
  m["window"] = {{"j_lo", cfg.j_lo}, {"j_hi", cfg.j_hi}, {"profile", profile_name(cfg.profile)}};
  m["seed"] = cfg.seed;
  m["stages"] = ctx.stages;
  auto files = out.files;
  m["outputs"] = files;
  m["reports"] = ctx.reports;
  bool all = true;
  for (const auto& r : ctx.reports) all = all && r["pass"].get<bool>();
  m["all_pass"] = all;
  write_json((fs::path(cfg.output_dir) / "manifest.json").string(), m);
  out.files.push_back("manifest.json");
  return out;
}

} // namespace scatspec
