#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "foldcast/errors.hpp"
#include "foldcast/systems.hpp"

namespace foldcast {

enum class PipelineKind : std::uint8_t {
  MinMax = 0,
  Polar = 1,
  PolarMovMean = 2,
  PolarLog = 3,
  PolarLogMovMean = 4,
};

const char* pipeline_name(PipelineKind kind);
PipelineKind pipeline_from_name(const std::string& name);

/// Which normalization to apply and on which coordinate pair.
struct PipelineSpec {
  PipelineKind kind = PipelineKind::PolarLogMovMean;
  int resample_len = 1024;
  double movmean_fraction = 0.05;
  double log_floor = 6.144212353328210e-6;  // e^-12
  int coord_pair = 0;

  void validate() const;
};

/// Fixed-length scalar channel fed to the network.
struct Channel {
  std::vector<double> values;
  PipelineSpec spec;
  TrajectoryMeta meta;
};

/// rho_i = sqrt(q_i^2 + qdot_i^2). Throws LengthMismatch.
std::vector<double> to_polar(const std::vector<double>& q,
                             const std::vector<double>& qdot);

/// Affine map sending min -> -1 and max -> +1. Throws ConstantSignal.
std::vector<double> minmax_scale(const std::vector<double>& s);

/// s / max(s). Throws ZeroSignal if max <= 0.
std::vector<double> unit_max_scale(const std::vector<double>& s);

/// Pointwise ln(max(value, floor)).
std::vector<double> log_scale(const std::vector<double>& s, double floor);

/// Centered moving average with window max(1, round(fraction * length)),
/// truncated symmetrically at the boundaries.
std::vector<double> moving_mean(const std::vector<double>& s, double fraction);

/// Linear interpolation onto n uniformly spaced points over the original
/// index range; endpoints preserved exactly.
std::vector<double> resample(const std::vector<double>& s, int n);

/// Full pipeline composition for one trajectory.
Channel apply_pipeline(const Trajectory& traj, const PipelineSpec& spec);

}  // namespace foldcast
