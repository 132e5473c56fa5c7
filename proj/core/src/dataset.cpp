#include "foldcast/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "foldcast/rng.hpp"

namespace foldcast {

namespace {

constexpr char kMagic[4] = {'F', 'B', 'D', 'S'};
constexpr std::uint16_t kVersion = 1;
constexpr double kDt = 0.01;

double draw_in_band(Rng& rng, double lo, double hi, DrawDistribution dist) {
  if (dist == DrawDistribution::Uniform) return rng.uniform(lo, hi);
  if (lo == hi) return lo;
  return rng.truncated_normal(0.5 * (lo + hi), (hi - lo) / 4.0, lo, hi);
}

/// Map a band fraction g (on the branch-free side scale) to a parameter
/// value: for direction +1 this is g * fold; for -1 it is mirrored across
/// the fold.
double param_from_fraction(double g, double fold, int direction) {
  return fold * (1.0 + direction * (g - 1.0));
}

}  // namespace

const char* label_name(ClassLabel label) {
  switch (label) {
    case ClassLabel::Far:
      return "far";
    case ClassLabel::Close:
      return "close";
    case ClassLabel::After:
      return "after";
  }
  return "?";
}

void SamplingPlan::validate() const {
  if (n_per_class < 1) throw ConfigError("n_per_class must be >= 1");
  const bool ordered = far_lo < far_hi && far_hi <= close_lo &&
                       close_lo < close_hi && close_hi <= after_lo &&
                       after_lo < after_hi;
  if (!ordered) throw ConfigError("class bands must be ordered and disjoint");
  for (const auto& [lo, hi] : ic_ranges)
    if (lo > hi) throw ConfigError("IC range inverted");
}

ClassLabel label_of(double param, double fold_value, int direction,
                    const SamplingPlan& plan, LabelMode mode) {
  if (!(fold_value > 0.0)) throw UnsupportedParams("fold_value must be > 0");
  const double g = 1.0 + direction * (param - fold_value) / fold_value;
  if (mode == LabelMode::Grid) {
    if (g > 1.0) return ClassLabel::After;
    if (g >= plan.close_lo) return ClassLabel::Close;
    return ClassLabel::Far;
  }
  if (g >= plan.after_lo && g <= plan.after_hi) return ClassLabel::After;
  if (g >= plan.close_lo && g <= plan.close_hi) return ClassLabel::Close;
  if (g >= plan.far_lo && g <= plan.far_hi) return ClassLabel::Far;
  throw OutOfBands("parameter falls outside the training class bands");
}

Dataset sample_training_set(const SamplingPlan& plan,
                            const PipelineSpec& pipeline) {
  plan.validate();
  pipeline.validate();

  const double fold = reference_fold(plan.system, plan.params);
  const int direction =
      SystemModel::make(plan.system, plan.params, fold).direction;

  Dataset ds;
  ds.pipeline = pipeline;
  ds.plan = plan;
  ds.fold_value = fold;
  ds.samples.reserve(3 * static_cast<std::size_t>(plan.n_per_class));

  const std::pair<double, double> bands[3] = {
      {plan.far_lo, plan.far_hi},
      {plan.close_lo, plan.close_hi},
      {plan.after_lo, plan.after_hi},
  };

  std::uint64_t index = 0;
  for (int cls = 0; cls < 3; ++cls) {
    for (int i = 0; i < plan.n_per_class; ++i, ++index) {
      const std::uint64_t sample_seed = derive_seed(plan.seed, index);
      Rng rng(sample_seed);
      const double g =
          draw_in_band(rng, bands[cls].first, bands[cls].second,
                       plan.distribution);
      const double param = param_from_fraction(g, fold, direction);

      std::vector<double> ic(plan.ic_ranges.size());
      for (std::size_t j = 0; j < ic.size(); ++j)
        ic[j] = draw_in_band(rng, plan.ic_ranges[j].first,
                             plan.ic_ranges[j].second, plan.distribution);

      try {
        const auto model = SystemModel::make(plan.system, plan.params, param);
        auto traj = integrate(model, ic, kDt, StopRule::for_model(model));
        traj.meta.seed = sample_seed;
        const auto ch = apply_pipeline(traj, pipeline);

        Sample s;
        s.channel.assign(ch.values.begin(), ch.values.end());
        s.label = label_of(param, fold, direction, plan, LabelMode::Strict);
        s.system = plan.system;
        s.bifurcation_param = param;
        s.seed = sample_seed;
        s.initial_state = ic;
        ds.samples.push_back(std::move(s));
      } catch (const Error& e) {
        throw Error("sample " + std::to_string(index) + ": " + e.what());
      }
    }
  }
  return ds;
}

std::vector<std::pair<double, double>> test_ic_box(SystemKind system) {
  switch (system) {
    case SystemKind::NonlinearDamping:
      return {{0.7, 2.0}, {0.7, 2.0}};
    case SystemKind::MassOnBelt:
      return {{2.0, 3.0}, {1.0, 2.0}};
    case SystemKind::VdpDuffing:
      // x2(0) = x1(0) and x2'(0) = 0 are enforced by the sampler.
      return {{1.0, 2.0}, {0.0, 0.0}, {1.0, 2.0}, {0.0, 0.0}};
    case SystemKind::PitchPlunge:
      return {{0.002, 0.01}, {0.1, 0.3}, {0.002, 0.005}, {0.1, 0.3}};
  }
  return {};
}

Dataset sample_test_grid(SystemKind system, const SystemParams& params,
                         const std::vector<double>& param_values,
                         int n_per_param, const PipelineSpec& pipeline,
                         std::uint64_t seed) {
  if (param_values.empty())
    throw ConfigError("sample_test_grid: empty parameter grid");
  if (n_per_param < 1) throw ConfigError("n_per_param must be >= 1");
  pipeline.validate();

  const double fold = reference_fold(system, params);
  SamplingPlan plan;
  plan.system = system;
  plan.params = params;
  plan.seed = seed;
  plan.ic_ranges = test_ic_box(system);
  plan.distribution = DrawDistribution::Uniform;
  plan.n_per_class = 1;

  const int direction = SystemModel::make(system, params, fold).direction;

  Dataset ds;
  ds.pipeline = pipeline;
  ds.plan = plan;
  ds.fold_value = fold;
  ds.samples.reserve(param_values.size() * n_per_param);

  std::uint64_t index = 0;
  for (double param : param_values) {
    for (int i = 0; i < n_per_param; ++i, ++index) {
      const std::uint64_t sample_seed = derive_seed(seed, index);
      Rng rng(sample_seed);

      std::vector<double> ic(plan.ic_ranges.size());
      for (std::size_t j = 0; j < ic.size(); ++j)
        ic[j] = rng.uniform(plan.ic_ranges[j].first, plan.ic_ranges[j].second);
      if (system == SystemKind::VdpDuffing) {
        ic[1] = ic[0];  // absorber starts with the primary mass
        ic[3] = 0.0;
      }

      try {
        const auto model = SystemModel::make(system, params, param);
        auto traj = integrate(model, ic, kDt, StopRule::for_model(model));
        traj.meta.seed = sample_seed;
        const auto ch = apply_pipeline(traj, pipeline);

        Sample s;
        s.channel.assign(ch.values.begin(), ch.values.end());
        s.label = label_of(param, fold, direction, plan, LabelMode::Grid);
        s.system = system;
        s.bifurcation_param = param;
        s.seed = sample_seed;
        s.initial_state = ic;
        ds.samples.push_back(std::move(s));
      } catch (const Error& e) {
        throw Error("grid sample " + std::to_string(index) + ": " + e.what());
      }
    }
  }
  return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double val_fraction,
                                  std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0))
    throw ConfigError("val_fraction must be in (0, 1)");

  std::vector<std::size_t> by_class[3];
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    by_class[static_cast<int>(ds.samples[i].label)].push_back(i);

  Rng rng(seed);
  std::vector<bool> in_val(ds.samples.size(), false);
  for (auto& idx : by_class) {
    for (std::size_t i = idx.size(); i > 1; --i)
      std::swap(idx[i - 1], idx[rng.below(i)]);
    const std::size_t n_val = static_cast<std::size_t>(
        std::llround(val_fraction * static_cast<double>(idx.size())));
    for (std::size_t i = 0; i < n_val; ++i) in_val[idx[i]] = true;
  }

  Dataset train, val;
  train.pipeline = val.pipeline = ds.pipeline;
  train.plan = val.plan = ds.plan;
  train.fold_value = val.fold_value = ds.fold_value;
  for (std::size_t i = 0; i < ds.samples.size(); ++i)
    (in_val[i] ? val : train).samples.push_back(ds.samples[i]);
  return {std::move(train), std::move(val)};
}

// Serialization -------------------------------------------------------------

namespace {

template <typename T>
void put(std::ostream& os, T value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  T value;
  is.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!is) throw Truncated("dataset file truncated");
  return value;
}

}  // namespace

void write_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);

  os.write(kMagic, 4);
  put<std::uint16_t>(os, kVersion);
  put<std::uint8_t>(os, static_cast<std::uint8_t>(ds.pipeline.kind));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(ds.pipeline.resample_len));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(ds.samples.size()));

  for (const auto& s : ds.samples) {
    if (static_cast<int>(s.channel.size()) != ds.pipeline.resample_len)
      throw IoError("sample channel length does not match resample_len");
    put<std::uint8_t>(os, static_cast<std::uint8_t>(s.label));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(s.system));
    put<double>(os, s.bifurcation_param);
    put<std::uint64_t>(os, s.seed);
    put<std::uint8_t>(os, static_cast<std::uint8_t>(s.initial_state.size()));
    for (double v : s.initial_state) put<double>(os, v);
    os.write(reinterpret_cast<const char*>(s.channel.data()),
             static_cast<std::streamsize>(s.channel.size() * sizeof(float)));
  }
  if (!os) throw IoError("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);

  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw BadMagic("not a dataset file: " + path);
  const auto version = get<std::uint16_t>(is);
  if (version != kVersion)
    throw VersionMismatch("unsupported dataset version " +
                          std::to_string(version));

  Dataset ds;
  const auto kind = get<std::uint8_t>(is);
  if (kind > 4) throw IoError("corrupt pipeline kind");
  ds.pipeline.kind = static_cast<PipelineKind>(kind);
  ds.pipeline.resample_len = static_cast<int>(get<std::uint32_t>(is));
  const auto n = get<std::uint32_t>(is);

  ds.samples.resize(n);
  for (auto& s : ds.samples) {
    const auto label = get<std::uint8_t>(is);
    if (label > 2) throw IoError("corrupt class label");
    s.label = static_cast<ClassLabel>(label);
    const auto system = get<std::uint8_t>(is);
    if (system > 3) throw IoError("corrupt system kind");
    s.system = static_cast<SystemKind>(system);
    s.bifurcation_param = get<double>(is);
    s.seed = get<std::uint64_t>(is);
    const auto ic_count = get<std::uint8_t>(is);
    s.initial_state.resize(ic_count);
    for (auto& v : s.initial_state) v = get<double>(is);
    s.channel.resize(ds.pipeline.resample_len);
    is.read(reinterpret_cast<char*>(s.channel.data()),
            static_cast<std::streamsize>(s.channel.size() * sizeof(float)));
    if (!is) throw Truncated("dataset file truncated");
  }
  return ds;
}

void write_manifest(const Dataset& ds, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "index,system,label,parameter,fold_value,seed\n";
  char buf[64];
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    const auto& s = ds.samples[i];
    os << i << ',' << system_name(s.system) << ',' << label_name(s.label)
       << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", s.bifurcation_param);
    os << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.17g", ds.fold_value);
    os << buf << ',' << s.seed << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace foldcast
