// Command-line driver: generate / train / evaluate / reproduce-table.
//
// Exit codes: 0 success, 2 usage or config error, 3 I/O or generation
// error, 4 numeric anomaly during training, 5 evaluation precondition.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "foldcast/config.hpp"
#include "foldcast/dataset.hpp"
#include "foldcast/eval.hpp"
#include "foldcast/nn.hpp"
#include "foldcast/pipeline_runner.hpp"

namespace fs = std::filesystem;
using namespace foldcast;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumeric = 4;
constexpr int kExitEval = 5;

struct CommonFlags {
  std::string config_path;
  std::string seed_text;  // flag beats FOLD_SEED beats config
  std::string out_dir;
  std::string pipeline;
  bool smoke = false;
};

void add_common(CLI::App& cmd, CommonFlags& flags) {
  cmd.add_option("--config", flags.config_path, "Run configuration file");
  cmd.add_option("--seed", flags.seed_text, "Master seed override");
  cmd.add_option("--out", flags.out_dir, "Output directory override");
  cmd.add_option("--pipeline", flags.pipeline,
                 "Normalization pipeline (or 'all')");
  cmd.add_flag("--smoke", flags.smoke, "Shrink sizes for a plumbing check");
}

RunConfig effective_config(const CommonFlags& flags) {
  RunConfig cfg = flags.config_path.empty()
                      ? RunConfig{}
                      : RunConfig::from_file(flags.config_path);
  if (const char* env = std::getenv("FOLD_SEED"); env && *env)
    cfg.seed = std::stoull(env);
  if (!flags.seed_text.empty()) cfg.seed = std::stoull(flags.seed_text);
  if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
  if (!flags.pipeline.empty()) cfg.pipeline = flags.pipeline;
  if (flags.smoke) cfg.apply_smoke();
  cfg.validate();
  return cfg;
}

PipelineKind single_pipeline(const RunConfig& cfg) {
  if (cfg.pipeline == "all")
    throw ConfigError("this command needs one concrete pipeline, not 'all'");
  return pipeline_from_name(cfg.pipeline);
}

std::string default_dataset_path(const RunConfig& cfg) {
  return (fs::path(cfg.out_dir) / ("dataset-" + cfg.pipeline + ".fbds"))
      .string();
}

int cmd_generate(const CommonFlags& flags) {
  const RunConfig cfg = effective_config(flags);
  const PipelineKind kind = single_pipeline(cfg);
  fs::create_directories(cfg.out_dir);

  const Dataset ds = build_training_dataset(cfg, kind);
  const std::string path = default_dataset_path(cfg);
  write_dataset(ds, path);
  write_manifest(ds, path + ".manifest.csv");

  std::size_t per_class[3] = {0, 0, 0};
  for (const auto& s : ds.samples) ++per_class[static_cast<int>(s.label)];
  std::printf("wrote %s (%zu samples: far %zu, close %zu, after %zu)\n",
              path.c_str(), ds.samples.size(), per_class[0], per_class[1],
              per_class[2]);
  return 0;
}

int cmd_train(const CommonFlags& flags, const std::string& data_path) {
  const RunConfig cfg = effective_config(flags);
  single_pipeline(cfg);  // validates
  fs::create_directories(cfg.out_dir);

  const std::string path =
      data_path.empty() ? default_dataset_path(cfg) : data_path;
  const Dataset full = read_dataset(path);

  const TrainedPipeline trained = train_on_dataset(cfg, full);
  const fs::path ckpt = fs::path(cfg.out_dir) / "checkpoint.fbnn";
  nn::save_checkpoint(trained.params, ckpt.string());
  nn::write_history_csv(trained.history,
                        (fs::path(cfg.out_dir) / "history.csv").string());
  std::printf("wrote %s; final validation accuracy %.2f%%\n",
              ckpt.string().c_str(), 100.0 * trained.final_val_accuracy);
  return 0;
}

int cmd_evaluate(const CommonFlags& flags, const std::string& checkpoint_path,
                 const std::string& system_text) {
  const RunConfig cfg = effective_config(flags);
  const PipelineKind kind = single_pipeline(cfg);
  const SystemKind system = system_from_name(system_text);
  fs::create_directories(cfg.out_dir);

  const std::string ckpt =
      checkpoint_path.empty()
          ? (fs::path(cfg.out_dir) / "checkpoint.fbnn").string()
          : checkpoint_path;
  const nn::NetParams<float> params = nn::load_checkpoint(ckpt);

  SystemEvaluation eval;
  try {
    eval = evaluate_system(cfg, params, kind, system);
  } catch (const MissingClass& e) {
    std::fprintf(stderr, "evaluation precondition: %s\n", e.what());
    return kExitEval;
  }
  for (std::size_t i = 0; i < eval.per_coord.size(); ++i) {
    const std::string stem =
        (fs::path(cfg.out_dir) /
         (std::string("diagram-") + system_name(system) + "-coord" +
          std::to_string(i)))
            .string();
    write_diagram_csv(eval.per_coord[i], stem + ".csv");
    emit_scatter_svg(eval.per_coord[i], stem + ".svg");
  }
  std::printf("%s / %s: accuracy %.2f%%, verdict %s\n", cfg.pipeline.c_str(),
              system_name(system), 100.0 * eval.accuracy,
              verdict_name(eval.verdict));
  return 0;
}

int cmd_reproduce_table(const CommonFlags& flags) {
  const RunConfig cfg = effective_config(flags);
  fs::create_directories(cfg.out_dir);

  const auto start = std::chrono::steady_clock::now();
  SummaryTable table;
  for (int i = 0; i < 5; ++i) {
    const auto kind = static_cast<PipelineKind>(i);
    std::printf("[%d/5] %s\n", i + 1, pipeline_name(kind));
    std::fflush(stdout);
    const PipelineRow row = run_pipeline_row(cfg, kind);
    table.set_accuracy(kind, row.nld_accuracy);
    table.set_verdict(kind, SystemKind::MassOnBelt, row.mob.verdict);
    table.set_verdict(kind, SystemKind::VdpDuffing, row.vdp.verdict);
    table.set_verdict(kind, SystemKind::PitchPlunge, row.pnp.verdict);
  }

  const std::string text = table.to_text();
  std::ofstream((fs::path(cfg.out_dir) / "summary.csv").string())
      << table.to_csv();
  std::ofstream((fs::path(cfg.out_dir) / "summary.txt").string()) << text;
  std::fputs(text.c_str(), stdout);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  std::printf("wall clock: %lld s\n", static_cast<long long>(secs));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fold-bifurcation forecasting pipeline"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string data_path, checkpoint_path, system_text;

  auto* generate =
      app.add_subcommand("generate", "Sample and persist the training set");
  add_common(*generate, flags);

  auto* train = app.add_subcommand("train", "Train a classifier on a dataset");
  add_common(*train, flags);
  train->add_option("--data", data_path, "Dataset file (.fbds)");

  auto* evaluate =
      app.add_subcommand("evaluate", "Evaluate a checkpoint on one system");
  add_common(*evaluate, flags);
  evaluate->add_option("--checkpoint", checkpoint_path, "Checkpoint (.fbnn)");
  evaluate->add_option("--system", system_text, "Target system")->required();

  auto* reproduce = app.add_subcommand(
      "reproduce-table", "Full 5-pipeline training + 4-system evaluation");
  add_common(*reproduce, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(flags);
    if (train->parsed()) return cmd_train(flags, data_path);
    if (evaluate->parsed())
      return cmd_evaluate(flags, checkpoint_path, system_text);
    return cmd_reproduce_table(flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const UnsupportedParams& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "numeric anomaly: %s\n", e.what());
    return kExitNumeric;
  } catch (const MissingClass& e) {
    std::fprintf(stderr, "evaluation precondition: %s\n", e.what());
    return kExitEval;
  } catch (const IoError& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return kExitIo;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  }
}
