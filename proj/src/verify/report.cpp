#include "scatspec/verify/report.hpp"

#include "scatspec/error.hpp"
#include "scatspec/grid.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>

namespace scatspec {

void EstimateReport::add_row(double idx, double val, double rat, const std::vector<double>& more) {
  index.push_back(idx);
  value.push_back(val);
  ratio.push_back(rat);
  if (extra.size() < more.size()) extra.resize(more.size());
  for (std::size_t i = 0; i < more.size(); ++i) extra[i].push_back(more[i]);
}

void EstimateReport::fit_log2_slope() {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < index.size(); ++i)
    if (value[i] > 0.0 && std::isfinite(value[i])) {
      x.push_back(index[i]);
      y.push_back(std::log2(value[i]));
    }
  if (x.size() < 2) return;
  const auto [s, c] = fit_line(x, y);
  slope = s;
  intercept = c;
}

void EstimateReport::finalize() {
  sup_ratio = 0.0;
  for (double r : ratio) sup_ratio = std::isfinite(r) ? std::max(sup_ratio, r) : INFINITY;
  bool ok = std::isfinite(sup_ratio);
  if (!std::isnan(ratio_bound)) ok = ok && sup_ratio <= ratio_bound;
  if (!std::isnan(claimed_slope)) {
    const bool slope_ok = slope_is_upper_bound ? slope <= claimed_slope + slope_tol
                                               : std::abs(slope - claimed_slope) <= slope_tol;
    ok = ok && std::isfinite(slope) && slope_ok;
    checks["slope"] = std::isfinite(slope) && slope_ok;
  }
  for (const auto& [name, v] : checks) ok = ok && v;
  pass = ok;
}

void write_report_csv(const EstimateReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << std::setprecision(17) << r.index_name << ",value,ratio";
  for (const auto& n : r.extra_names) out << ',' << n;
  out << "\r\n";
  for (std::size_t i = 0; i < r.index.size(); ++i) {
    out << r.index[i] << ',' << r.value[i] << ',' << r.ratio[i];
    for (std::size_t c = 0; c < r.extra.size(); ++c) out << ',' << (i < r.extra[c].size() ? r.extra[c][i] : NAN);
    out << "\r\n";
  }
}

std::string report_json(const EstimateReport& r) {
  auto num = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["sup_ratio"] = num(r.sup_ratio);
  j["slope"] = num(r.slope);
  j["pass"] = r.pass;
  j["claimed_slope"] = num(r.claimed_slope);
  j["slope_tol"] = num(r.slope_tol);
  j["ratio_bound"] = num(r.ratio_bound);
  j["rows"] = r.index.size();
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.checks) checks[k] = v;
  j["checks"] = checks;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [k, v] : r.metrics) metrics[k] = num(v);
  j["metrics"] = metrics;
  return j.dump(2);
}

void write_report_json(const EstimateReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::io_error, "cannot write " + path);
  out << report_json(r) << "\n";
}

} // namespace scatspec
