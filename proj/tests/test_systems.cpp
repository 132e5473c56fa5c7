#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "foldcast/systems.hpp"

using namespace foldcast;

namespace {

double polar_amp(const Trajectory& t, std::size_t step) {
  const auto [qi, vi] = t.coord_pairs[0];
  return std::hypot(t.at(step, qi), t.at(step, vi));
}

}  // namespace

TEST_CASE("rhs_nld matches hand evaluation") {
  auto r = rhs_nld({1.0, 0.0}, 0.5, 2.0);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == doctest::Approx(-1.0));

  r = rhs_nld({0.0, 1.0}, 0.5, 2.0);
  CHECK(r[0] == 1.0);
  CHECK(r[1] == doctest::Approx(-0.5));  // (1 - v^2) kills the c3 term

  r = rhs_nld({0.0, 0.5}, 0.1, 0.4444);
  CHECK(r[0] == 0.5);
  // -c1 v + c3 v^3 (1 - v^2) = -0.05 + 0.4444 * 0.125 * 0.75
  CHECK(r[1] == doctest::Approx(-0.0083375).epsilon(1e-10));
}

TEST_CASE("friction law: asymptote, static limit, midpoint, sign") {
  CHECK(friction_coefficient(1e9, 1.0, 0.5, 0.5) == doctest::Approx(0.5));
  CHECK(friction_coefficient(1e-12, 1.0, 0.5, 0.5) == doctest::Approx(1.0));
  CHECK(friction_coefficient(0.5, 1.0, 0.5, 0.5) ==
        doctest::Approx(0.5 + 0.5 * std::exp(-1.0)));
  CHECK(friction_coefficient(-0.5, 1.0, 0.5, 0.5) ==
        doctest::Approx(-(0.5 + 0.5 * std::exp(-1.0))));
}

TEST_CASE("rhs_mob_slip: forcing and equilibrium") {
  const MobParams p;
  auto r = rhs_mob_slip({0.0, 0.0}, 2.0, p);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == doctest::Approx(0.5 + 0.5 * std::exp(-4.0)));

  const double x_eq = friction_coefficient(2.0, p.mu_s, p.mu_d, p.v0);
  r = rhs_mob_slip({x_eq, 0.0}, 2.0, p);
  CHECK(r[1] == doctest::Approx(0.0).epsilon(1e-15));

  r = rhs_mob_slip({0.7, 0.0}, 2.0, p);
  CHECK(r[1] == doctest::Approx(x_eq - 0.7));
}

TEST_CASE("step_mob: stick kinematics and cone exit") {
  const MobParams p;
  const double v = 2.0;

  std::array<double, 2> s{0.0, v};
  const auto phase = step_mob(s, v, 0.01, p);
  CHECK(phase == MobPhase::Stick);
  CHECK(s[0] == doctest::Approx(v * 0.01));
  CHECK(s[1] == v);

  std::array<double, 2> s2{p.mu_s + 0.1, v};
  CHECK(step_mob(s2, v, 0.01, p) == MobPhase::Slip);
}

TEST_CASE("step_mob: before-fold run decays to the slip equilibrium") {
  const MobParams p;
  const double v = 2.5;
  std::array<double, 2> s{2.5, 1.5};
  for (int i = 0; i < 200000; ++i) step_mob(s, v, 0.01, p);
  const double x_eq = friction_coefficient(v, p.mu_s, p.mu_d, p.v0);
  CHECK(x_eq == doctest::Approx(0.503369).epsilon(1e-4));
  CHECK(s[0] == doctest::Approx(x_eq).epsilon(1e-4));
  CHECK(std::abs(s[1]) < 1e-3);
}

TEST_CASE("stick consistency during the after-fold limit cycle") {
  const MobParams p;
  const double v = 1.7;  // below v* = 1.83: stick-slip oscillation persists
  const double eps = 1e-6 * std::max(1.0, v);
  std::array<double, 2> s{2.5, 1.5};
  int stick_steps = 0;
  for (int i = 0; i < 50000; ++i) {
    const auto phase = step_mob(s, v, 0.01, p);
    if (phase == MobPhase::Stick) {
      ++stick_steps;
      CHECK(std::abs(s[1] - v) <= eps);
    }
  }
  CHECK(stick_steps > 50);  // the cycle alternates stick and slip
}

TEST_CASE("rhs_vdp: equilibrium and hand-evaluated acceleration") {
  const VdpParams p;
  auto r = rhs_vdp({0, 0, 0, 0}, 0.05, p);
  for (double v : r) CHECK(v == 0.0);

  // x1 = x2 = 1, rest: coupling terms cancel, accel1 = -1 - alpha.
  r = rhs_vdp({1, 1, 0, 0}, 0.05, p);
  CHECK(r[0] == 0.0);
  CHECK(r[1] == 0.0);
  CHECK(r[2] == doctest::Approx(-1.3));
  CHECK(r[3] == doctest::Approx(0.0));
}

TEST_CASE("rhs_pnp: equilibrium and quintic restoring term") {
  const PnpParams p;
  auto r = rhs_pnp({0, 0, 0, 0}, 0.9, p);
  for (double v : r) CHECK(v == 0.0);

  // Independent reassembly at (y=0, alpha=0.1, velocities 0), u = 0.9.
  const double u = 0.9, a = 0.1;
  const double b2 = p.xi_a3 * a * a * a + p.xi_a5 * std::pow(a, 5);
  CHECK(b2 == doctest::Approx(-8e-4));
  const double ra2 = p.r_alpha * p.r_alpha;
  const double f1 = -p.beta * u * u * a;
  const double f2 = -(ra2 - p.nu * u * u) * a - b2;
  const double det = ra2 - p.x_alpha * p.x_alpha;
  r = rhs_pnp({0, a, 0, 0}, u, p);
  CHECK(r[2] == doctest::Approx((ra2 * f1 - p.x_alpha * f2) / det));
  CHECK(r[3] == doctest::Approx((-p.x_alpha * f1 + f2) / det));
}

TEST_CASE("integrate: linear decay envelope") {
  // c3 = 0: linear oscillator with damping ratio c1/2 = 0.25.
  const auto model = SystemModel::nld(0.0, 0.5);
  StopRule stop;
  stop.max_time = 25.0;
  const auto traj = integrate(model, {1.0, 0.0}, 0.01, stop);
  REQUIRE(traj.n_steps() > 2000);
  CHECK(polar_amp(traj, 2000) ==
        doctest::Approx(std::exp(-5.0)).epsilon(0.05));
}

TEST_CASE("integrate: near-harmonic energy conservation") {
  // c1 must be positive; 1e-12 is dynamically negligible over 100 periods.
  const auto model = SystemModel::nld(0.0, 1e-12);
  StopRule stop;
  stop.max_time = 100.0 * 2.0 * 3.14159265358979323846;
  const auto traj = integrate(model, {1.0, 0.0}, 0.01, stop);
  double worst = 0.0;
  for (std::size_t i = 0; i < traj.n_steps(); ++i) {
    const double e = traj.at(i, 0) * traj.at(i, 0) +
                     traj.at(i, 1) * traj.at(i, 1);
    worst = std::max(worst, std::abs(e - 1.0));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("integrate: RK4 convergence order on the harmonic oscillator") {
  const auto model = SystemModel::nld(0.0, 1e-12);
  const double t_end = 10.0;
  std::vector<double> errs;
  for (double dt : {0.04, 0.02, 0.01}) {
    StopRule stop;
    stop.max_time = t_end;
    const auto traj = integrate(model, {1.0, 0.0}, dt, stop);
    const std::size_t last = traj.n_steps() - 1;
    const double t = static_cast<double>(last) * dt;
    errs.push_back(std::abs(traj.at(last, 0) - std::cos(t)));
  }
  const double slope1 = std::log2(errs[0] / errs[1]);
  const double slope2 = std::log2(errs[1] / errs[2]);
  CHECK(slope1 == doctest::Approx(4.0).epsilon(0.3 / 4.0));
  CHECK(slope2 == doctest::Approx(4.0).epsilon(0.3 / 4.0));
}

TEST_CASE("integrate: after-fold trajectory keeps a finite amplitude") {
  const double c3_star = 40.0 * 0.5 / 9.0;
  const auto model = SystemModel::nld(1.3 * c3_star, 0.5);
  const auto traj = integrate(model, {2.0, 2.0}, 0.01,
                              StopRule::for_model(model));
  CHECK(polar_amp(traj, traj.n_steps() - 1) > 0.1);
}

TEST_CASE("integrate: mass-on-belt states are equilibrium-shifted") {
  const auto model = SystemModel::mob(2.5);
  const auto traj = integrate(model, {2.5, 1.5}, 0.01,
                              StopRule::for_model(model));
  // Decayed trajectory ends at the shifted origin, not at x = mu(v).
  CHECK(polar_amp(traj, traj.n_steps() - 1) < 1e-3);
  // Early-stop fired well before max_time.
  CHECK(traj.n_steps() < 150000);
}

TEST_CASE("integrate: error paths") {
  const auto model = SystemModel::nld(1.0, 0.5);
  CHECK_THROWS_AS(integrate(model, {1.0}, 0.01, StopRule{}),
                  DimensionMismatch);
  CHECK_THROWS_AS(integrate(model, {1.0, 0.0}, -0.01, StopRule{}),
                  UnsupportedParams);
  // c3 < 0 with |v| > 1 gives positive velocity feedback: blow-up.
  const auto bad = SystemModel::nld(-1000.0, 0.5);
  CHECK_THROWS_AS(integrate(bad, {0.0, 2.0}, 0.01, StopRule{}),
                  DivergenceError);
}

TEST_CASE("integrate: determinism is bit-exact") {
  const auto model = SystemModel::mob(1.7);
  StopRule stop;
  stop.max_time = 100.0;
  const auto a = integrate(model, {2.5, 1.5}, 0.01, stop);
  const auto b = integrate(model, {2.5, 1.5}, 0.01, stop);
  REQUIRE(a.states.size() == b.states.size());
  CHECK(a.states == b.states);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(SystemModel::nld(1.0, 0.0), UnsupportedParams);
  MobParams mob_bad;
  mob_bad.mu_d = 1.5;  // mu_d > mu_s
  CHECK_THROWS_AS(SystemModel::mob(2.0, mob_bad), UnsupportedParams);
  PnpParams pnp_bad;
  pnp_bad.x_alpha = 0.6;  // singular mass matrix
  CHECK_THROWS_AS(SystemModel::pnp(0.8, pnp_bad), UnsupportedParams);
  CHECK(system_from_name("mob") == SystemKind::MassOnBelt);
  CHECK_THROWS_AS(system_from_name("bogus"), ConfigError);
}

TEST_CASE("reference_fold values and guards") {
  CHECK(reference_fold(SystemKind::NonlinearDamping, NldParams{0.5}) ==
        doctest::Approx(2.22222).epsilon(1e-4));
  CHECK(reference_fold(SystemKind::NonlinearDamping, NldParams{0.1}) ==
        doctest::Approx(0.44444).epsilon(1e-4));
  CHECK(reference_fold(SystemKind::MassOnBelt, MobParams{}) == 1.83);
  CHECK(reference_fold(SystemKind::VdpDuffing, VdpParams{}) == 0.062);
  CHECK(reference_fold(SystemKind::PitchPlunge, PnpParams{}) == 0.911);
  MobParams off_default;
  off_default.v0 = 0.6;
  CHECK_THROWS_AS(reference_fold(SystemKind::MassOnBelt, off_default),
                  UnsupportedParams);
}

TEST_CASE("locate_fold_numeric agrees with references") {
  const double nld = locate_fold_numeric(SystemKind::NonlinearDamping,
                                         NldParams{0.5}, {1.5, 3.0}, 0.01);
  CHECK(nld == doctest::Approx(40.0 * 0.5 / 9.0).epsilon(0.01));

  const double mob = locate_fold_numeric(SystemKind::MassOnBelt, MobParams{},
                                         {1.5, 2.2}, 0.01);
  CHECK(mob == doctest::Approx(1.83).epsilon(0.022));

  CHECK_THROWS_AS(locate_fold_numeric(SystemKind::NonlinearDamping,
                                      NldParams{0.5}, {2.5, 3.0}, 0.01),
                  NoSignChange);
}
