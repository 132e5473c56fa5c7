#pragma once

#include <string>
#include <vector>

#include "foldcast/config.hpp"
#include "foldcast/dataset.hpp"
#include "foldcast/eval.hpp"
#include "foldcast/nn.hpp"

namespace foldcast {

/// Pipeline spec derived from a run config.
PipelineSpec make_pipeline_spec(const RunConfig& config, PipelineKind kind,
                                int coord_pair = 0);

/// Training-set protocol: nonlinear-damping system at the configured c1.
SamplingPlan make_training_plan(const RunConfig& config);

/// Parameter grid for one evaluation system.
std::vector<double> make_grid_values(const RunConfig& config,
                                     SystemKind system);

/// Generate the training dataset for one pipeline (deterministic in the
/// config seed).
Dataset build_training_dataset(const RunConfig& config, PipelineKind kind);

struct TrainedPipeline {
  nn::NetParams<float> params;
  std::vector<nn::EpochStats> history;
  double final_val_accuracy = 0.0;
};

/// Split + train with the config's optimizer settings. `seed_offset`
/// perturbs only the network/optimizer seed, not the dataset.
TrainedPipeline train_on_dataset(const RunConfig& config, const Dataset& full,
                                 std::uint64_t seed_offset = 0);

struct SystemEvaluation {
  SystemKind system;
  std::vector<PredictionDiagram> per_coord;
  PredictionDiagram pooled;
  double accuracy = 0.0;
  Verdict verdict = Verdict::Wrong;
};

/// Build the test grid(s) for one system (one diagram per coordinate
/// pair), classify, pool, and compute accuracy + verdict.
SystemEvaluation evaluate_system(const RunConfig& config,
                                 const nn::NetParams<float>& params,
                                 PipelineKind pipeline, SystemKind system);

/// Train (or load from the cache cell) + evaluate a full pipeline row:
/// nonlinear-damping accuracy at eval_c1 plus the three extrapolation
/// verdicts. Artifacts land under out_dir/cells/<hash>/.
struct PipelineRow {
  PipelineKind pipeline;
  double nld_accuracy = 0.0;
  SystemEvaluation mob, vdp, pnp;
};

PipelineRow run_pipeline_row(const RunConfig& config, PipelineKind kind);

/// Cache directory for one cell; created on demand.
std::string cell_dir(const RunConfig& config, const std::string& cell_id);

/// Train with caching: reuse an existing checkpoint under the cell
/// directory when present.
TrainedPipeline train_cached(const RunConfig& config, PipelineKind kind,
                             std::uint64_t seed_offset = 0);

}  // namespace foldcast
