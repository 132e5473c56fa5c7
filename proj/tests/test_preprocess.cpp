#include <doctest.h>

#include <cmath>
#include <vector>

#include "foldcast/preprocess.hpp"
#include "foldcast/rng.hpp"
#include "foldcast/systems.hpp"

using namespace foldcast;

namespace {

/// Damped oscillation with the frequency-matched velocity channel
/// qdot / omega, so the phase-space orbit is a near-circle and the polar
/// radius tracks the envelope for any omega.
Trajectory synthetic_oscillation(double zeta, double omega, double t_end,
                                 double dt = 0.01) {
  Trajectory t;
  t.dt = dt;
  t.n_state = 2;
  t.coord_pairs = {{0, 1}};
  const int n = static_cast<int>(t_end / dt) + 1;
  t.states.reserve(2 * n);
  for (int i = 0; i < n; ++i) {
    const double tt = i * dt;
    const double e = std::exp(-zeta * tt);
    t.states.push_back(e * std::cos(omega * tt));
    t.states.push_back(e *
                       (-(zeta / omega) * std::cos(omega * tt) -
                        std::sin(omega * tt)));
  }
  return t;
}

}  // namespace

TEST_CASE("to_polar") {
  CHECK(to_polar({3, 3}, {4, 4}) == std::vector<double>{5, 5});
  CHECK(to_polar({0, 0}, {0, 0}) == std::vector<double>{0, 0});
  const std::vector<double> q{1.0, std::cos(0.7)}, qd{0.0, -std::sin(0.7)};
  for (double r : to_polar(q, qd)) CHECK(r == doctest::Approx(1.0));
  CHECK_THROWS_AS(to_polar({1, 2}, {1}), LengthMismatch);
}

TEST_CASE("minmax_scale") {
  const auto out = minmax_scale({0, 1, 2});
  CHECK(out[0] == doctest::Approx(-1.0));
  CHECK(out[1] == doctest::Approx(0.0));
  CHECK(out[2] == doctest::Approx(1.0));
  CHECK(minmax_scale({-5, 5}) == std::vector<double>{-1, 1});
  CHECK_THROWS_AS(minmax_scale({2, 2, 2}), ConstantSignal);

  // Idempotence on random signals.
  Rng rng(7);
  for (int c = 0; c < 100; ++c) {
    std::vector<double> s(37);
    for (auto& v : s) v = rng.uniform(-4.0, 9.0);
    const auto once = minmax_scale(s);
    const auto twice = minmax_scale(once);
    for (std::size_t i = 0; i < s.size(); ++i)
      CHECK(twice[i] == doctest::Approx(once[i]).epsilon(1e-12));
  }
}

TEST_CASE("unit_max_scale and log_scale") {
  const auto out = unit_max_scale({0, 2, 4});
  CHECK(out == std::vector<double>{0, 0.5, 1});
  CHECK(unit_max_scale({1, 1, 1}) == std::vector<double>{1, 1, 1});
  CHECK_THROWS_AS(unit_max_scale({0.0, 0.0}), ZeroSignal);

  const double floor = std::exp(-12.0);
  const auto logs = log_scale({1.0, 0.0, std::exp(-5.0)}, floor);
  CHECK(logs[0] == doctest::Approx(0.0));
  CHECK(logs[1] == doctest::Approx(-12.0));
  CHECK(logs[2] == doctest::Approx(-5.0));
}

TEST_CASE("moving_mean") {
  const auto c = moving_mean({3, 3, 3, 3, 3}, 0.4);
  CHECK(c == std::vector<double>{3, 3, 3, 3, 3});

  // n = 7, fraction 3/7: window 3, truncated at both ends.
  const auto b = moving_mean({0, 0, 0, 1, 0, 0, 0}, 3.0 / 7.0);
  const std::vector<double> expect{0, 0, 1.0 / 3, 1.0 / 3, 1.0 / 3, 0, 0};
  for (std::size_t i = 0; i < expect.size(); ++i)
    CHECK(b[i] == doctest::Approx(expect[i]));

  // Alternating signal, even window: interior cancels.
  std::vector<double> alt(10);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = (i % 2) ? -1.0 : 1.0;
  const auto m = moving_mean(alt, 0.4);  // window 4
  for (std::size_t i = 2; i + 2 < m.size(); ++i)
    CHECK(m[i] == doctest::Approx(0.0));
}

TEST_CASE("resample") {
  const auto up = resample({0, 1}, 3);
  CHECK(up == std::vector<double>{0, 0.5, 1});

  const std::vector<double> s{0.3, -1.2, 4.4, 0.0, 2.5};
  CHECK(resample(s, 5) == s);

  const auto ramp = resample({0, 1, 2, 3, 4, 5}, 11);
  for (int i = 0; i < 11; ++i)
    CHECK(ramp[i] == doctest::Approx(0.5 * i));
}

TEST_CASE("apply_pipeline: polar-log slope equals the decay rate") {
  const auto model = SystemModel::nld(0.0, 0.5);  // linear, zeta = 0.25
  StopRule stop;
  stop.max_time = 30.0;
  const auto traj = integrate(model, {1.0, 0.0}, 0.01, stop);

  PipelineSpec spec;
  spec.kind = PipelineKind::PolarLog;
  const auto ch = apply_pipeline(traj, spec);
  REQUIRE(static_cast<int>(ch.values.size()) == spec.resample_len);

  // Least-squares slope over the first three quarters (before the floor),
  // in units of simulation time.
  const double t_total = (traj.n_steps() - 1) * traj.dt;
  const int n_fit = 3 * spec.resample_len / 4;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n_fit; ++i) {
    const double t = t_total * i / (spec.resample_len - 1);
    sx += t;
    sy += ch.values[i];
    sxx += t * t;
    sxy += t * ch.values[i];
  }
  const double slope = (n_fit * sxy - sx * sy) / (n_fit * sxx - sx * sx);
  CHECK(slope == doctest::Approx(-0.25).epsilon(0.05));
}

TEST_CASE("apply_pipeline: after-fold channel plateaus above zero") {
  const double c3_star = 40.0 * 0.5 / 9.0;
  const auto model = SystemModel::nld(1.3 * c3_star, 0.5);
  const auto traj = integrate(model, {2.0, 2.0}, 0.01,
                              StopRule::for_model(model));
  PipelineSpec spec;
  spec.kind = PipelineKind::Polar;
  const auto ch = apply_pipeline(traj, spec);
  for (std::size_t i = ch.values.size() - 100; i < ch.values.size(); ++i)
    CHECK(ch.values[i] > 0.1);
}

TEST_CASE("apply_pipeline: close-to-fold settles later than far") {
  const double c3_star = 40.0 * 0.5 / 9.0;
  PipelineSpec spec;
  spec.kind = PipelineKind::Polar;
  const auto settle_index = [&](double frac) {
    const auto model = SystemModel::nld(frac * c3_star, 0.5);
    const auto traj = integrate(model, {2.0, 2.0}, 0.01,
                                StopRule::for_model(model));
    const auto ch = apply_pipeline(traj, spec);
    // First index where the normalized amplitude drops below 1%, scaled
    // back to simulation time.
    const double t_total = (traj.n_steps() - 1) * traj.dt;
    for (std::size_t i = 0; i < ch.values.size(); ++i)
      if (ch.values[i] < 0.01)
        return t_total * static_cast<double>(i) / (ch.values.size() - 1);
    return t_total;
  };
  CHECK(settle_index(0.97) > 2.0 * settle_index(0.3));
}

TEST_CASE("polar pipelines are scale invariant") {
  const auto model = SystemModel::nld(1.0, 0.5);
  StopRule stop;
  stop.max_time = 60.0;
  const auto traj = integrate(model, {1.3, 0.4}, 0.01, stop);

  Rng rng(11);
  for (PipelineKind kind :
       {PipelineKind::Polar, PipelineKind::PolarMovMean, PipelineKind::PolarLog,
        PipelineKind::PolarLogMovMean}) {
    PipelineSpec spec;
    spec.kind = kind;
    const auto base = apply_pipeline(traj, spec);
    for (int c = 0; c < 5; ++c) {
      const double k = std::exp(rng.uniform(-3.0, 3.0));
      Trajectory scaled = traj;
      for (auto& v : scaled.states) v *= k;
      const auto ch = apply_pipeline(scaled, spec);
      for (std::size_t i = 0; i < ch.values.size(); ++i)
        CHECK(std::abs(ch.values[i] - base.values[i]) <=
              1e-12 * std::max(1.0, std::abs(base.values[i])));
    }
  }
}

TEST_CASE("polar pipelines are frequency blind") {
  const auto a = synthetic_oscillation(0.02, 1.0, 100.0);
  const auto b = synthetic_oscillation(0.02, 3.0, 100.0);
  PipelineSpec spec;
  spec.kind = PipelineKind::Polar;
  const auto ca = apply_pipeline(a, spec);
  const auto cb = apply_pipeline(b, spec);
  double rms = 0.0;
  for (std::size_t i = 0; i < ca.values.size(); ++i) {
    const double d = ca.values[i] - cb.values[i];
    rms += d * d;
  }
  rms = std::sqrt(rms / static_cast<double>(ca.values.size()));
  CHECK(rms < 0.02);
}

TEST_CASE("apply_pipeline: determinism and bad coord_pair") {
  const auto model = SystemModel::nld(1.0, 0.5);
  StopRule stop;
  stop.max_time = 40.0;
  const auto traj = integrate(model, {1.0, 1.0}, 0.01, stop);
  PipelineSpec spec;
  CHECK(apply_pipeline(traj, spec).values ==
        apply_pipeline(traj, spec).values);
  spec.coord_pair = 1;
  CHECK_THROWS_AS(apply_pipeline(traj, spec), DimensionMismatch);
}

TEST_CASE("pipeline names round-trip") {
  for (int i = 0; i < 5; ++i) {
    const auto kind = static_cast<PipelineKind>(i);
    CHECK(pipeline_from_name(pipeline_name(kind)) == kind);
  }
  CHECK_THROWS_AS(pipeline_from_name("nope"), ConfigError);
}
