#include "foldcast/pipeline_runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "foldcast/rng.hpp"

namespace foldcast {

namespace fs = std::filesystem;

PipelineSpec make_pipeline_spec(const RunConfig& config, PipelineKind kind,
                                int coord_pair) {
  PipelineSpec spec;
  spec.kind = kind;
  spec.resample_len = config.resample_len;
  spec.movmean_fraction = config.movmean_fraction;
  spec.coord_pair = coord_pair;
  return spec;
}

SamplingPlan make_training_plan(const RunConfig& config) {
  SamplingPlan plan;
  plan.system = SystemKind::NonlinearDamping;
  plan.params = NldParams{config.train_c1};
  plan.n_per_class = config.n_per_class;
  plan.seed = derive_seed(config.seed, 101);
  return plan;
}

std::vector<double> make_grid_values(const RunConfig& config,
                                     SystemKind system) {
  double lo = 0.0, hi = 0.0;
  int count = 0;
  bool fractional = false;
  switch (system) {
    case SystemKind::NonlinearDamping:
      lo = config.nld_grid_lo;
      hi = config.nld_grid_hi;
      count = config.nld_grid_count;
      fractional = true;  // fractions of the fold at eval_c1
      break;
    case SystemKind::MassOnBelt:
      lo = config.mob_grid_lo;
      hi = config.mob_grid_hi;
      count = config.mob_grid_count;
      break;
    case SystemKind::VdpDuffing:
      lo = config.vdp_grid_lo;
      hi = config.vdp_grid_hi;
      count = config.vdp_grid_count;
      break;
    case SystemKind::PitchPlunge:
      lo = config.pnp_grid_lo;
      hi = config.pnp_grid_hi;
      count = config.pnp_grid_count;
      break;
  }
  std::vector<double> values(count);
  const double fold =
      fractional ? 40.0 * config.eval_c1 / 9.0 : 1.0;
  for (int i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
    values[i] = fold * (lo + (hi - lo) * t);
  }
  return values;
}

Dataset build_training_dataset(const RunConfig& config, PipelineKind kind) {
  return sample_training_set(make_training_plan(config),
                             make_pipeline_spec(config, kind));
}

TrainedPipeline train_on_dataset(const RunConfig& config, const Dataset& full,
                                 std::uint64_t seed_offset) {
  nn::TrainConfig tc;
  tc.batch_size = config.batch_size;
  tc.max_epochs = config.max_epochs;
  tc.learning_rate = config.learning_rate;
  tc.val_fraction = config.val_fraction;
  tc.seed = derive_seed(config.seed, 201 + seed_offset);

  const auto [train_ds, val_ds] =
      split(full, config.val_fraction, derive_seed(config.seed, 301));
  auto result = nn::train(train_ds, val_ds, tc);

  TrainedPipeline out;
  out.params = std::move(result.params);
  out.history = std::move(result.history);
  out.final_val_accuracy =
      out.history.empty() ? 0.0 : out.history.back().val_accuracy;
  return out;
}

SystemEvaluation evaluate_system(const RunConfig& config,
                                 const nn::NetParams<float>& params,
                                 PipelineKind pipeline, SystemKind system) {
  SystemParams sys_params;
  switch (system) {
    case SystemKind::NonlinearDamping:
      sys_params = NldParams{config.eval_c1};
      break;
    case SystemKind::MassOnBelt:
      sys_params = MobParams{};
      break;
    case SystemKind::VdpDuffing:
      sys_params = VdpParams{};
      break;
    case SystemKind::PitchPlunge:
      sys_params = PnpParams{};
      break;
  }

  const auto values = make_grid_values(config, system);
  const int n_pairs = (system == SystemKind::VdpDuffing ||
                       system == SystemKind::PitchPlunge)
                          ? 2
                          : 1;

  SystemEvaluation eval;
  eval.system = system;
  for (int pair = 0; pair < n_pairs; ++pair) {
    const auto spec = make_pipeline_spec(config, pipeline, pair);
    // Same seed across pairs: identical trajectories, different channels.
    const auto ds = sample_test_grid(
        system, sys_params, values, config.ics_per_value, spec,
        derive_seed(config.seed, 401 + static_cast<int>(system)));
    eval.per_coord.push_back(build_diagram(params, ds));
  }
  eval.pooled = merge_diagrams(eval.per_coord);
  eval.accuracy = diagram_accuracy(eval.pooled);
  eval.verdict = classify_verdict(eval.pooled);
  return eval;
}

std::string cell_dir(const RunConfig& config, const std::string& cell_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(cell_hash(config, cell_id)));
  const fs::path dir =
      fs::path(config.out_dir) / "cells" / (cell_id + "-" + buf);
  fs::create_directories(dir);
  return dir.string();
}

namespace {

double last_val_accuracy_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) return 0.0;
  std::string line, last;
  std::getline(in, line);  // header
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  const auto pos = last.rfind(',');
  if (pos == std::string::npos) return 0.0;
  return std::stod(last.substr(pos + 1));
}

}  // namespace

TrainedPipeline train_cached(const RunConfig& config, PipelineKind kind,
                             std::uint64_t seed_offset) {
  const std::string cell_id = std::string("train-") + pipeline_name(kind) +
                              "-s" + std::to_string(seed_offset);
  const fs::path dir = cell_dir(config, cell_id);
  const fs::path ckpt = dir / "checkpoint.fbnn";
  const fs::path hist = dir / "history.csv";

  if (fs::exists(ckpt)) {
    TrainedPipeline out;
    out.params = nn::load_checkpoint(ckpt.string());
    out.final_val_accuracy = last_val_accuracy_from_csv(hist.string());
    return out;
  }

  auto full = build_training_dataset(config, kind);
  auto trained = train_on_dataset(config, full, seed_offset);
  nn::save_checkpoint(trained.params, ckpt.string());
  nn::write_history_csv(trained.history, hist.string());
  return trained;
}

PipelineRow run_pipeline_row(const RunConfig& config, PipelineKind kind) {
  auto trained = train_cached(config, kind);

  PipelineRow row;
  row.pipeline = kind;

  const auto nld = evaluate_system(config, trained.params, kind,
                                   SystemKind::NonlinearDamping);
  row.nld_accuracy = nld.accuracy;
  row.mob =
      evaluate_system(config, trained.params, kind, SystemKind::MassOnBelt);
  row.vdp =
      evaluate_system(config, trained.params, kind, SystemKind::VdpDuffing);
  row.pnp =
      evaluate_system(config, trained.params, kind, SystemKind::PitchPlunge);

  // Per-cell artifacts.
  const fs::path dir =
      cell_dir(config, std::string("eval-") + pipeline_name(kind));
  const auto dump = [&](const SystemEvaluation& eval) {
    for (std::size_t i = 0; i < eval.per_coord.size(); ++i) {
      const std::string stem = std::string(system_name(eval.system)) +
                               "-coord" + std::to_string(i);
      write_diagram_csv(eval.per_coord[i], (dir / (stem + ".csv")).string());
      emit_scatter_svg(eval.per_coord[i], (dir / (stem + ".svg")).string());
    }
  };
  dump(nld);
  dump(row.mob);
  dump(row.vdp);
  dump(row.pnp);
  return row;
}

}  // namespace foldcast
