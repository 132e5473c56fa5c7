#include "foldcast/preprocess.hpp"

#include <algorithm>
#include <cmath>

namespace foldcast {

const char* pipeline_name(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::MinMax:
      return "minmax";
    case PipelineKind::Polar:
      return "polar";
    case PipelineKind::PolarMovMean:
      return "polar-movmean";
    case PipelineKind::PolarLog:
      return "polar-log";
    case PipelineKind::PolarLogMovMean:
      return "polar-log-movmean";
  }
  return "?";
}

PipelineKind pipeline_from_name(const std::string& name) {
  if (name == "minmax") return PipelineKind::MinMax;
  if (name == "polar") return PipelineKind::Polar;
  if (name == "polar-movmean") return PipelineKind::PolarMovMean;
  if (name == "polar-log") return PipelineKind::PolarLog;
  if (name == "polar-log-movmean") return PipelineKind::PolarLogMovMean;
  throw ConfigError("unknown pipeline name: " + name);
}

void PipelineSpec::validate() const {
  if (resample_len < 32) throw ConfigError("resample_len must be >= 32");
  if (!(movmean_fraction > 0.0 && movmean_fraction < 0.5))
    throw ConfigError("movmean_fraction must be in (0, 0.5)");
  if (!(log_floor > 0.0 && log_floor < 1.0))
    throw ConfigError("log_floor must be in (0, 1)");
}

std::vector<double> to_polar(const std::vector<double>& q,
                             const std::vector<double>& qdot) {
  if (q.size() != qdot.size())
    throw LengthMismatch("to_polar: position/velocity length mismatch");
  std::vector<double> rho(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    rho[i] = std::hypot(q[i], qdot[i]);
  return rho;
}

std::vector<double> minmax_scale(const std::vector<double>& s) {
  const auto [lo_it, hi_it] = std::minmax_element(s.begin(), s.end());
  const double lo = *lo_it, hi = *hi_it;
  if (hi == lo) throw ConstantSignal("minmax_scale: constant signal");
  std::vector<double> out(s.size());
  const double scale = 2.0 / (hi - lo);
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = (s[i] - lo) * scale - 1.0;
  return out;
}

std::vector<double> unit_max_scale(const std::vector<double>& s) {
  const double hi = *std::max_element(s.begin(), s.end());
  if (!(hi > 0.0)) throw ZeroSignal("unit_max_scale: non-positive maximum");
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] / hi;
  return out;
}

std::vector<double> log_scale(const std::vector<double>& s, double floor) {
  std::vector<double> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    out[i] = std::log(std::max(s[i], floor));
  return out;
}

std::vector<double> moving_mean(const std::vector<double>& s,
                                double fraction) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(s.size());
  const std::ptrdiff_t w = std::max<std::ptrdiff_t>(
      1, static_cast<std::ptrdiff_t>(std::llround(fraction * n)));
  const std::ptrdiff_t left = (w - 1) / 2;
  const std::ptrdiff_t right = w / 2;
  std::vector<double> out(s.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t lo = i - left;
    std::ptrdiff_t hi = i + right;
    if (lo < 0 || hi > n - 1) {
      // Truncate symmetrically at the boundaries.
      const std::ptrdiff_t h = std::min(i, n - 1 - i);
      lo = i - h;
      hi = i + h;
    }
    double acc = 0.0;
    for (std::ptrdiff_t j = lo; j <= hi; ++j) acc += s[j];
    out[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return out;
}

std::vector<double> resample(const std::vector<double>& s, int n) {
  const std::size_t m = s.size();
  if (m < 2 || n < 2) throw LengthMismatch("resample: need lengths >= 2");
  std::vector<double> out(n);
  out[0] = s.front();
  out[n - 1] = s.back();
  const double step = static_cast<double>(m - 1) / (n - 1);
  for (int i = 1; i + 1 < n; ++i) {
    const double pos = i * step;
    const std::size_t j = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(j);
    out[i] = s[j] * (1.0 - frac) + s[j + 1] * frac;
  }
  return out;
}

Channel apply_pipeline(const Trajectory& traj, const PipelineSpec& spec) {
  spec.validate();
  if (spec.coord_pair < 0 ||
      spec.coord_pair >= static_cast<int>(traj.coord_pairs.size()))
    throw DimensionMismatch("apply_pipeline: coord_pair out of range");

  const auto [qi, vi] = traj.coord_pairs[spec.coord_pair];
  const auto q = traj.column(qi);

  std::vector<double> values;
  switch (spec.kind) {
    case PipelineKind::MinMax:
      values = resample(minmax_scale(q), spec.resample_len);
      break;
    case PipelineKind::Polar:
      values = resample(unit_max_scale(to_polar(q, traj.column(vi))),
                        spec.resample_len);
      break;
    case PipelineKind::PolarMovMean:
      values = moving_mean(
          resample(unit_max_scale(to_polar(q, traj.column(vi))),
                   spec.resample_len),
          spec.movmean_fraction);
      break;
    case PipelineKind::PolarLog:
      values = resample(
          log_scale(unit_max_scale(to_polar(q, traj.column(vi))),
                    spec.log_floor),
          spec.resample_len);
      break;
    case PipelineKind::PolarLogMovMean:
      values = moving_mean(
          resample(log_scale(unit_max_scale(to_polar(q, traj.column(vi))),
                             spec.log_floor),
                   spec.resample_len),
          spec.movmean_fraction);
      break;
  }

  Channel ch;
  ch.values = std::move(values);
  ch.spec = spec;
  ch.meta = traj.meta;
  return ch;
}

}  // namespace foldcast
