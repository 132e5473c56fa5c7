#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "foldcast/preprocess.hpp"
#include "foldcast/systems.hpp"

namespace foldcast {

enum class ClassLabel : std::uint8_t { Far = 0, Close = 1, After = 2 };

const char* label_name(ClassLabel label);

enum class DrawDistribution : std::uint8_t { TruncatedNormal = 0, Uniform = 1 };

/// How training / test populations are drawn. Class bands are fractions of
/// the fold value on the branch-free side (mirrored for direction -1).
struct SamplingPlan {
  SystemKind system = SystemKind::NonlinearDamping;
  SystemParams params = NldParams{};
  int n_per_class = 2000;
  double far_lo = 0.10, far_hi = 0.50;
  double close_lo = 0.90, close_hi = 0.995;
  double after_lo = 1.01, after_hi = 1.50;
  std::vector<std::pair<double, double>> ic_ranges = {{0.7, 2.0}, {0.7, 2.0}};
  DrawDistribution distribution = DrawDistribution::TruncatedNormal;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Sample {
  std::vector<float> channel;
  ClassLabel label = ClassLabel::Far;
  SystemKind system = SystemKind::NonlinearDamping;
  double bifurcation_param = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> initial_state;
};

struct Dataset {
  std::vector<Sample> samples;
  PipelineSpec pipeline;
  SamplingPlan plan;
  double fold_value = 0.0;  // set at generation; not serialized
};

enum class LabelMode {
  Strict,  // training bands; the gaps raise OutOfBands
  Grid,    // test grids: after/not-after split plus the close band
};

ClassLabel label_of(double param, double fold_value, int direction,
                    const SamplingPlan& plan,
                    LabelMode mode = LabelMode::Strict);

/// Draw the per-class training population: parameter from the class band,
/// IC from the plan box, integrate, preprocess, label. Fully determined by
/// plan.seed via per-sample derived streams.
Dataset sample_training_set(const SamplingPlan& plan,
                            const PipelineSpec& pipeline);

/// Uniform-IC population over an explicit parameter grid, using each
/// system's test IC box (the van der Pol grid enforces x2(0) = x1(0) and
/// x2'(0) = 0). Labels use LabelMode::Grid.
Dataset sample_test_grid(SystemKind system, const SystemParams& params,
                         const std::vector<double>& param_values,
                         int n_per_param, const PipelineSpec& pipeline,
                         std::uint64_t seed);

/// Paper test IC box for a system, in state order.
std::vector<std::pair<double, double>> test_ic_box(SystemKind system);

/// Stratified-by-class random split into (train, validation).
std::pair<Dataset, Dataset> split(const Dataset& ds, double val_fraction,
                                  std::uint64_t seed);

// On-disk format: little-endian, magic "FBDS", version u16 = 1,
// pipeline-kind u8, resample_len u32, n_samples u32; then per sample:
// label u8, system-kind u8, parameter f64, seed u64, ic-count u8,
// ICs f64 x count, channel f32 x resample_len.
void write_dataset(const Dataset& ds, const std::string& path);
Dataset read_dataset(const std::string& path);

/// Companion manifest CSV: index, system, label, parameter, fold_value,
/// seed.
void write_manifest(const Dataset& ds, const std::string& path);

}  // namespace foldcast
