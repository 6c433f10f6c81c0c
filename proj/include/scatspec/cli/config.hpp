#pragma once
//! Experiment configuration: one INI file with sections.
//!
//!   [potential]  tag, x_min, x_max, step, plus closed-form parameters
//!   [grids]      k_min k_max k_step, x_min x_max x_step, y_min y_max y_step
//!   [window]     j_lo, j_hi, profile
//!   [multiplier] tag plus parameters; tag = custom takes energies/values lists
//!   [tolerances] jost, scattering, marchenko
//!   [kernel]     block, j, j_cut, points_per_period, part
//!   [apply]      center, width of the Gaussian test function
//!   [verify]     per-check settings
//!   [output]     dir
//!   [cache]      policy (off | read | readwrite), dir
//!   [run]        seed, jobs

#include "scatspec/dyadic.hpp"
#include "scatspec/kernel.hpp"
#include "scatspec/multiplier.hpp"
#include "scatspec/potential.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace scatspec {

struct RangeSpec {
  double lo = 0.0, hi = 0.0, step = 0.0;
  std::vector<double> nodes() const;
};

enum class CachePolicy { off, read, readwrite };

struct PotentialSpec {
  std::string tag = "free";
  std::map<std::string, double> params;
  double x_min = -10.0, x_max = 10.0, step = 1.0 / 256.0;
  Potential build() const;
};

struct MultiplierSpec {
  std::string tag = "identity";
  std::map<std::string, double> params;
  std::vector<double> energies;  ///< custom only
  std::vector<double> values;
  Multiplier build() const;
};

struct ExperimentConfig {
  PotentialSpec potential;
  RangeSpec k{0.25, 8.0, 0.25};
  RangeSpec x{-4.0, 4.0, 0.0625};
  RangeSpec y{-4.0, 4.0, 0.0625};
  int j_lo = -4, j_hi = 6;
  BumpProfile profile = BumpProfile::exponential;
  MultiplierSpec multiplier;
  double tol_jost = 1e-10, tol_scattering = 1e-8, tol_marchenko = 1e-10;
  BlockKind block = BlockKind::phi;
  int block_j = 0, block_j_cut = 0;
  double points_per_period = 8.0;
  KernelPart part = KernelPart::ac;
  double apply_center = 0.0, apply_width = 1.0;
  std::map<std::string, std::string> verify;  ///< raw [verify] keys
  std::string output_dir = "out";
  CachePolicy cache = CachePolicy::readwrite;
  std::string cache_dir = ".scatspec-cache";
  std::uint64_t seed = 1;
  unsigned jobs = 0;
  std::string source_text;  ///< the file as read, echoed into the manifest

  KernelOptions kernel_options() const;
  JostOptions jost_options() const;
};

//! Parses and validates; failures raise bad_config (bad_multiplier for multiplier tags).
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);
void validate(const ExperimentConfig& cfg);

std::string cache_policy_name(CachePolicy p);
BlockKind parse_block_kind(const std::string& s);
std::string block_kind_name(BlockKind k);

//! Typed access to [verify] keys with defaults.
double verify_number(const ExperimentConfig& cfg, const std::string& key, double fallback);
std::vector<double> verify_list(const ExperimentConfig& cfg, const std::string& key, std::vector<double> fallback);

} // namespace scatspec
