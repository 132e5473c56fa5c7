#include "foldcast/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>

namespace foldcast {

namespace {

constexpr double kDivergenceGuard = 1e6;
constexpr double kStickTolRel = 1e-6;
constexpr double kEventTimeTol = 1e-9;

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

bool params_are_default(const MobParams& p) {
  MobParams d;
  return p.mu_s == d.mu_s && p.mu_d == d.mu_d && p.v0 == d.v0 &&
         p.zeta == d.zeta;
}
bool params_are_default(const VdpParams& p) {
  VdpParams d;
  return p.r == d.r && p.gamma == d.gamma && p.mu2 == d.mu2 &&
         p.alpha == d.alpha;
}
bool params_are_default(const PnpParams& p) {
  PnpParams d;
  return p.x_alpha == d.x_alpha && p.r_alpha == d.r_alpha && p.beta == d.beta &&
         p.nu == d.nu && p.omega == d.omega && p.zeta_alpha == d.zeta_alpha &&
         p.zeta_h == d.zeta_h && p.xi_a3 == d.xi_a3 && p.xi_a5 == d.xi_a5;
}

}  // namespace

const char* system_name(SystemKind kind) {
  switch (kind) {
    case SystemKind::NonlinearDamping:
      return "nld";
    case SystemKind::MassOnBelt:
      return "mob";
    case SystemKind::VdpDuffing:
      return "vdp";
    case SystemKind::PitchPlunge:
      return "pnp";
  }
  return "?";
}

SystemKind system_from_name(const std::string& name) {
  if (name == "nld") return SystemKind::NonlinearDamping;
  if (name == "mob") return SystemKind::MassOnBelt;
  if (name == "vdp") return SystemKind::VdpDuffing;
  if (name == "pnp") return SystemKind::PitchPlunge;
  throw ConfigError("unknown system name: " + name);
}

SystemModel SystemModel::nld(double c3, double c1) {
  SystemModel m;
  m.kind = SystemKind::NonlinearDamping;
  m.params = NldParams{c1};
  m.bifurcation_param = c3;
  m.direction = +1;
  m.validate();
  return m;
}

SystemModel SystemModel::mob(double v, MobParams p) {
  SystemModel m;
  m.kind = SystemKind::MassOnBelt;
  m.params = p;
  m.bifurcation_param = v;
  m.direction = -1;
  m.validate();
  return m;
}

SystemModel SystemModel::vdp(double mu1, VdpParams p) {
  SystemModel m;
  m.kind = SystemKind::VdpDuffing;
  m.params = p;
  m.bifurcation_param = mu1;
  m.direction = +1;
  m.validate();
  return m;
}

SystemModel SystemModel::pnp(double u, PnpParams p) {
  SystemModel m;
  m.kind = SystemKind::PitchPlunge;
  m.params = p;
  m.bifurcation_param = u;
  m.direction = +1;
  m.validate();
  return m;
}

SystemModel SystemModel::make(SystemKind kind, const SystemParams& params,
                              double bifurcation_param) {
  switch (kind) {
    case SystemKind::NonlinearDamping:
      return nld(bifurcation_param, std::get<NldParams>(params).c1);
    case SystemKind::MassOnBelt:
      return mob(bifurcation_param, std::get<MobParams>(params));
    case SystemKind::VdpDuffing:
      return vdp(bifurcation_param, std::get<VdpParams>(params));
    case SystemKind::PitchPlunge:
      return pnp(bifurcation_param, std::get<PnpParams>(params));
  }
  throw UnsupportedParams("unknown system kind");
}

int SystemModel::state_dim() const {
  switch (kind) {
    case SystemKind::NonlinearDamping:
    case SystemKind::MassOnBelt:
      return 2;
    case SystemKind::VdpDuffing:
    case SystemKind::PitchPlunge:
      return 4;
  }
  return 0;
}

std::vector<std::pair<int, int>> SystemModel::coord_pairs() const {
  if (state_dim() == 2) return {{0, 1}};
  return {{0, 2}, {1, 3}};
}

std::vector<double> SystemModel::equilibrium() const {
  std::vector<double> eq(state_dim(), 0.0);
  if (kind == SystemKind::MassOnBelt) {
    const auto& p = std::get<MobParams>(params);
    eq[0] =
        friction_coefficient(bifurcation_param, p.mu_s, p.mu_d, p.v0);
  }
  return eq;
}

void SystemModel::validate() const {
  switch (kind) {
    case SystemKind::NonlinearDamping: {
      const auto& p = std::get<NldParams>(params);
      if (!(p.c1 > 0.0)) throw UnsupportedParams("nld requires c1 > 0");
      break;
    }
    case SystemKind::MassOnBelt: {
      const auto& p = std::get<MobParams>(params);
      if (!(p.mu_s > p.mu_d && p.mu_d > 0.0 && p.v0 > 0.0 && p.zeta >= 0.0))
        throw UnsupportedParams("mob requires mu_s > mu_d > 0, v0 > 0, zeta >= 0");
      break;
    }
    case SystemKind::VdpDuffing: {
      const auto& p = std::get<VdpParams>(params);
      if (!(p.r > 0.0 && p.gamma > 0.0))
        throw UnsupportedParams("vdp requires r > 0 and gamma > 0");
      break;
    }
    case SystemKind::PitchPlunge: {
      const auto& p = std::get<PnpParams>(params);
      if (!(p.r_alpha * p.r_alpha - p.x_alpha * p.x_alpha > 0.0))
        throw UnsupportedParams("pnp mass matrix must be positive definite");
      break;
    }
  }
}

StopRule StopRule::for_model(const SystemModel& model) {
  double zeta_eff = 0.02;
  switch (model.kind) {
    case SystemKind::NonlinearDamping:
      zeta_eff = std::get<NldParams>(model.params).c1 / 2.0;
      break;
    case SystemKind::MassOnBelt:
      zeta_eff = std::get<MobParams>(model.params).zeta;
      break;
    case SystemKind::VdpDuffing:
    case SystemKind::PitchPlunge:
      zeta_eff = 0.02;  // weakly damped; rely on the hard cap
      break;
  }
  StopRule rule;
  rule.max_time = std::min(100.0 / zeta_eff, 5000.0);
  return rule;
}

std::vector<double> Trajectory::column(int component) const {
  std::vector<double> out(n_steps());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(i, component);
  return out;
}

// Vector fields -------------------------------------------------------------

std::array<double, 2> rhs_nld(const std::array<double, 2>& s, double c1,
                              double c3) {
  const double x = s[0], xd = s[1];
  return {xd, -x - c1 * xd + c3 * xd * xd * xd * (1.0 - xd * xd)};
}

double friction_coefficient(double v_rel, double mu_s, double mu_d,
                            double v0) {
  return (mu_d + (mu_s - mu_d) * std::exp(-std::abs(v_rel) / v0)) *
         sgn(v_rel);
}

std::array<double, 2> rhs_mob_slip(const std::array<double, 2>& s, double v,
                                   const MobParams& p) {
  const double x = s[0], xd = s[1];
  const double ff = friction_coefficient(v - xd, p.mu_s, p.mu_d, p.v0);
  return {xd, -2.0 * p.zeta * xd - x + ff};
}

std::array<double, 4> rhs_vdp(const std::array<double, 4>& s, double mu1,
                              const VdpParams& p) {
  // State ordering (x1, x2, x1', x2').
  const double x1 = s[0], x2 = s[1], v1 = s[2], v2 = s[3];
  const double g2r = p.gamma * p.gamma * p.r;
  const double cm = 2.0 * p.gamma * p.mu2 * p.r;
  // C(1,1) is -2 mu1 + 2 gamma mu2 r: the van der Pol negative damping
  // plus the absorber damper, which enters the first row with a positive
  // sign (damper between the two masses). With this sign the fold sits at
  // mu1 = 0.062 for the default parameters.
  const double f1 = -((-2.0 * mu1 + cm) * v1 - cm * v2) -
                    ((1.0 + g2r) * x1 - g2r * x2) -
                    (p.alpha * x1 * x1 * x1 + 2.0 * mu1 * x1 * x1 * v1);
  const double f2 = -(-cm * v1 + cm * v2) - (-g2r * x1 + g2r * x2);
  return {v1, v2, f1, f2 / p.r};
}

std::array<double, 4> rhs_pnp(const std::array<double, 4>& s, double u,
                              const PnpParams& p) {
  // State ordering (y, alpha, y', alpha').
  const double y = s[0], a = s[1], yd = s[2], ad = s[3];
  const double ra2 = p.r_alpha * p.r_alpha;
  // Generalized forces -C x' - K x - b.
  const double f1 = -((p.zeta_h + p.beta * u) * yd) -
                    (p.omega * p.omega * y + p.beta * u * u * a);
  const double a2 = a * a;
  const double f2 = -(-p.nu * u * yd + p.zeta_alpha * ad) -
                    ((ra2 - p.nu * u * u) * a) -
                    (p.xi_a3 * a2 * a + p.xi_a5 * a2 * a2 * a);
  const double det = ra2 - p.x_alpha * p.x_alpha;
  return {yd, ad, (ra2 * f1 - p.x_alpha * f2) / det,
          (-p.x_alpha * f1 + f2) / det};
}

// Stick-slip stepping -------------------------------------------------------

namespace {

template <std::size_t N, typename F>
std::array<double, N> rk4_step(const std::array<double, N>& s, double h,
                               const F& rhs) {
  const auto k1 = rhs(s);
  std::array<double, N> tmp;
  for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * h * k1[i];
  const auto k2 = rhs(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + 0.5 * h * k2[i];
  const auto k3 = rhs(tmp);
  for (std::size_t i = 0; i < N; ++i) tmp[i] = s[i] + h * k3[i];
  const auto k4 = rhs(tmp);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i)
    out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

bool in_stick_cone(double x, double v, const MobParams& p) {
  return std::abs(x + 2.0 * p.zeta * v) <= p.mu_s;
}

}  // namespace

MobPhase step_mob(std::array<double, 2>& s, double v, double dt,
                  const MobParams& p) {
  const double eps = kStickTolRel * std::max(1.0, std::abs(v));
  const auto slip_rhs = [&](const std::array<double, 2>& q) {
    return rhs_mob_slip(q, v, p);
  };

  double remaining = dt;
  MobPhase phase = MobPhase::Slip;
  int guard = 0;
  while (remaining > 0.0 && ++guard < 64) {
    const bool sticking =
        std::abs(v - s[1]) <= eps && in_stick_cone(s[0], v, p);
    if (sticking) {
      phase = MobPhase::Stick;
      s[1] = v;
      if (v == 0.0) break;  // mass at rest inside the cone
      // x drifts with the belt toward the cone boundary.
      const double x_exit = (v > 0.0 ? p.mu_s : -p.mu_s) - 2.0 * p.zeta * v;
      const double t_exit = (x_exit - s[0]) / v;
      if (t_exit >= remaining) {
        s[0] += v * remaining;
        remaining = 0.0;
        break;
      }
      s[0] = x_exit;
      remaining -= std::max(t_exit, 0.0);
      // Cone exited: spring now beats static friction, so the mass lags
      // the belt and slip resumes with v_rel on the boundary side.
      s[1] = v - sgn(v) * 2.0 * eps;
      phase = MobPhase::Slip;
      continue;
    }

    phase = MobPhase::Slip;
    const double g0 = v - s[1];
    auto trial = rk4_step(s, remaining, slip_rhs);
    const double g1 = v - trial[1];
    if (g0 * g1 > 0.0 || std::abs(g0) <= eps) {
      s = trial;
      remaining = 0.0;
      break;
    }
    // v_rel crossed zero inside the step: bisect the crossing time.
    double lo = 0.0, hi = remaining;
    while (hi - lo > kEventTimeTol) {
      const double mid = 0.5 * (lo + hi);
      const auto q = rk4_step(s, mid, slip_rhs);
      if (g0 * (v - q[1]) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    s = rk4_step(s, hi, slip_rhs);
    remaining -= hi;
    s[1] = v;  // land on the switching surface
    if (!in_stick_cone(s[0], v, p)) {
      // Crossing without capture: slip continues on the other side.
      const double excess = s[0] + 2.0 * p.zeta * v;
      s[1] = v - sgn(excess) * 2.0 * eps;
    }
  }
  return phase;
}

// Integration ---------------------------------------------------------------

Trajectory integrate(const SystemModel& model, const std::vector<double>& ic,
                     double dt, const StopRule& stop) {
  model.validate();
  if (!(dt > 0.0)) throw UnsupportedParams("dt must be positive");
  const int dim = model.state_dim();
  if (static_cast<int>(ic.size()) != dim)
    throw DimensionMismatch("initial condition dimension mismatch");
  for (double v : ic)
    if (!std::isfinite(v)) throw UnsupportedParams("non-finite initial condition");

  const auto eq = model.equilibrium();
  const auto pairs = model.coord_pairs();

  Trajectory traj;
  traj.dt = dt;
  traj.n_state = dim;
  traj.coord_pairs = pairs;
  traj.meta.kind = model.kind;
  traj.meta.bifurcation_param = model.bifurcation_param;
  traj.meta.initial_state = ic;

  const std::size_t max_steps =
      static_cast<std::size_t>(std::ceil(stop.max_time / dt));
  traj.states.reserve((max_steps + 1) * dim);

  const auto record = [&](const double* s) {
    for (int i = 0; i < dim; ++i) traj.states.push_back(s[i] - eq[i]);
  };

  const auto shifted_amp = [&](const double* s) {
    const auto [qi, vi] = pairs[0];
    return std::hypot(s[qi] - eq[qi], s[vi] - eq[vi]);
  };

  std::vector<double> state = ic;
  record(state.data());

  const double amp0 = shifted_amp(state.data());
  const double amp_floor = stop.amplitude_floor_ratio * amp0;
  double time_below = -1.0;  // <0: currently above the floor

  for (std::size_t step = 0; step < max_steps; ++step) {
    switch (model.kind) {
      case SystemKind::NonlinearDamping: {
        const auto& p = std::get<NldParams>(model.params);
        std::array<double, 2> s{state[0], state[1]};
        s = rk4_step(s, dt, [&](const std::array<double, 2>& q) {
          return rhs_nld(q, p.c1, model.bifurcation_param);
        });
        state[0] = s[0];
        state[1] = s[1];
        break;
      }
      case SystemKind::MassOnBelt: {
        const auto& p = std::get<MobParams>(model.params);
        std::array<double, 2> s{state[0], state[1]};
        step_mob(s, model.bifurcation_param, dt, p);
        state[0] = s[0];
        state[1] = s[1];
        break;
      }
      case SystemKind::VdpDuffing: {
        const auto& p = std::get<VdpParams>(model.params);
        std::array<double, 4> s{state[0], state[1], state[2], state[3]};
        s = rk4_step(s, dt, [&](const std::array<double, 4>& q) {
          return rhs_vdp(q, model.bifurcation_param, p);
        });
        for (int i = 0; i < 4; ++i) state[i] = s[i];
        break;
      }
      case SystemKind::PitchPlunge: {
        const auto& p = std::get<PnpParams>(model.params);
        std::array<double, 4> s{state[0], state[1], state[2], state[3]};
        s = rk4_step(s, dt, [&](const std::array<double, 4>& q) {
          return rhs_pnp(q, model.bifurcation_param, p);
        });
        for (int i = 0; i < 4; ++i) state[i] = s[i];
        break;
      }
    }

    for (double v : state) {
      if (!std::isfinite(v) || std::abs(v) > kDivergenceGuard)
        throw DivergenceError("trajectory diverged (check parameters and IC)");
    }
    record(state.data());

    if (amp0 > 0.0) {
      if (shifted_amp(state.data()) < amp_floor) {
        if (time_below < 0.0) time_below = 0.0;
        time_below += dt;
        if (time_below >= stop.settle_window) break;
      } else {
        time_below = -1.0;
      }
    }
  }
  return traj;
}

// Fold locations ------------------------------------------------------------

double reference_fold(SystemKind kind, const SystemParams& params) {
  switch (kind) {
    case SystemKind::NonlinearDamping:
      return 40.0 * std::get<NldParams>(params).c1 / 9.0;
    case SystemKind::MassOnBelt:
      if (!params_are_default(std::get<MobParams>(params)))
        throw UnsupportedParams("mob fold known only for default parameters");
      return 1.83;
    case SystemKind::VdpDuffing:
      if (!params_are_default(std::get<VdpParams>(params)))
        throw UnsupportedParams("vdp fold known only for default parameters");
      return 0.062;
    case SystemKind::PitchPlunge:
      if (!params_are_default(std::get<PnpParams>(params)))
        throw UnsupportedParams("pnp fold known only for default parameters");
      return 0.911;
  }
  throw UnsupportedParams("unknown system kind");
}

namespace {

std::vector<double> probe_ic(SystemKind kind) {
  switch (kind) {
    case SystemKind::NonlinearDamping:
      return {2.0, 2.0};
    case SystemKind::MassOnBelt:
      return {2.5, 1.5};
    case SystemKind::VdpDuffing:
      return {1.5, 1.5, 1.5, 0.0};
    case SystemKind::PitchPlunge:
      return {0.006, 0.2, 0.0035, 0.2};
  }
  return {};
}

/// True when a large-IC trajectory ends on a non-trivial steady state.
bool settles_nontrivially(SystemKind kind, const SystemParams& params,
                          double value) {
  const auto model = SystemModel::make(kind, params, value);
  const auto stop = StopRule::for_model(model);
  const auto traj = integrate(model, probe_ic(kind), 0.01, stop);
  const auto [qi, vi] = traj.coord_pairs[0];
  const std::size_t n = traj.n_steps();
  const std::size_t tail =
      std::min(n, static_cast<std::size_t>(stop.settle_window / traj.dt) + 1);
  double amp = 0.0;
  for (std::size_t i = n - tail; i < n; ++i)
    amp = std::max(amp, std::hypot(traj.at(i, qi), traj.at(i, vi)));
  return amp > 1e-3;
}

}  // namespace

double locate_fold_numeric(SystemKind kind, const SystemParams& params,
                           std::pair<double, double> bracket, double tol) {
  if (!(tol > 0.0)) throw UnsupportedParams("tol must be positive");
  double lo = bracket.first, hi = bracket.second;
  bool p_lo = settles_nontrivially(kind, params, lo);
  bool p_hi = settles_nontrivially(kind, params, hi);
  if (p_lo == p_hi)
    throw NoSignChange("bracket does not straddle the fold");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (settles_nontrivially(kind, params, mid) == p_lo)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace foldcast
