#pragma once

#include <cstdint>
#include <istream>
#include <string>

#include "foldcast/errors.hpp"

namespace foldcast {

/// Flat key = value run configuration. Unknown keys are hard errors so
/// typos in sweep scripts fail fast.
struct RunConfig {
  std::uint64_t seed = 42;
  std::string pipeline = "polar-log-movmean";  // or "all"
  std::string out_dir = "out";

  // Training-set protocol.
  int n_per_class = 2000;
  double train_c1 = 0.5;
  int resample_len = 1024;
  double movmean_fraction = 0.05;

  // Optimizer.
  int batch_size = 32;
  int max_epochs = 50;
  double learning_rate = 1e-3;
  double val_fraction = 0.2;

  // Evaluation grids. The nonlinear-damping grid is in fractions of the
  // fold value; the others are absolute parameter ranges.
  double eval_c1 = 0.1;
  double nld_grid_lo = 0.05, nld_grid_hi = 1.5;
  int nld_grid_count = 61;
  double mob_grid_lo = 1.55, mob_grid_hi = 2.75;
  int mob_grid_count = 31;
  double vdp_grid_lo = 0.01, vdp_grid_hi = 0.09;
  int vdp_grid_count = 31;
  double pnp_grid_lo = 0.55, pnp_grid_hi = 0.93;
  int pnp_grid_count = 31;
  int ics_per_value = 10;

  bool smoke = false;

  static RunConfig parse(std::istream& in);
  static RunConfig from_file(const std::string& path);

  /// Shrink everything for a fast plumbing check.
  void apply_smoke();

  void validate() const;

  /// Canonical key = value rendering (fixed key order) used for content
  /// hashing of cache cells.
  std::string canonical() const;
};

/// FNV-1a hash of the canonical config plus a cell identifier; names the
/// cache directory of one train/evaluate cell.
std::uint64_t cell_hash(const RunConfig& config, const std::string& cell_id);

}  // namespace foldcast
