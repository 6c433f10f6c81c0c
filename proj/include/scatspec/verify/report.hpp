#pragma once
//! Ratio tables and verdicts shared by every estimate check.

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace scatspec {

struct EstimateReport {
  std::string id;
  std::string index_name = "j";
  std::vector<double> index;
  std::vector<double> value;
  std::vector<double> ratio;
  std::vector<std::string> extra_names;
  std::vector<std::vector<double>> extra;  ///< one column per name

  double slope = NAN;
  double intercept = NAN;
  double claimed_slope = NAN;
  double slope_tol = NAN;
  bool slope_is_upper_bound = false;  ///< pass when slope ≤ claimed + tol
  double sup_ratio = 0.0;
  double ratio_bound = NAN;  ///< declared bound on sup_ratio, NaN for finiteness only
  std::map<std::string, bool> checks;
  std::map<std::string, double> metrics;
  bool pass = false;
  double runtime = 0.0;  ///< seconds; kept out of the deterministic outputs

  void add_row(double idx, double val, double rat, const std::vector<double>& more = {});
  //! Fits log2(value) against the index over rows with positive values.
  void fit_log2_slope();
  //! Computes sup_ratio and the verdict from the fields above.
  void finalize();
};

void write_report_csv(const EstimateReport& r, const std::string& path);
//! {id, sup_ratio, slope, pass, ...} as pretty-printed JSON text.
std::string report_json(const EstimateReport& r);
void write_report_json(const EstimateReport& r, const std::string& path);

} // namespace scatspec
