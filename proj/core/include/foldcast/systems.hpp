#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "foldcast/errors.hpp"

namespace foldcast {

enum class SystemKind : std::uint8_t {
  NonlinearDamping = 0,
  MassOnBelt = 1,
  VdpDuffing = 2,
  PitchPlunge = 3,
};

const char* system_name(SystemKind kind);
SystemKind system_from_name(const std::string& name);

/// Oscillator with cubic/quintic nonlinear damping.
struct NldParams {
  double c1 = 0.5;
};

/// Mass on a moving belt with exponentially decaying kinetic friction.
struct MobParams {
  double mu_s = 1.0;
  double mu_d = 0.5;
  double v0 = 0.5;
  double zeta = 0.05;
};

/// Van der Pol-Duffing oscillator with an attached vibration absorber.
struct VdpParams {
  double r = 0.05;
  double gamma = 0.97;
  double mu2 = 0.12;
  double alpha = 0.3;
};

/// Pitch-and-plunge wing section with cubic/quintic pitch stiffness.
struct PnpParams {
  double x_alpha = 0.2;
  double r_alpha = 0.5;
  double beta = 0.2;
  double nu = 0.08;
  double omega = 0.5;
  double zeta_alpha = 0.01;
  double zeta_h = 0.01;
  double xi_a3 = -1.0;
  double xi_a5 = 20.0;
};

using SystemParams = std::variant<NldParams, MobParams, VdpParams, PnpParams>;

/// One of the four systems at a fixed value of its swept parameter.
///
/// `direction` tells on which side of the fold the periodic branches live:
/// +1 means they exist for parameter values above the fold (nonlinear
/// damping, van der Pol-Duffing, pitch-and-plunge), -1 below it
/// (mass-on-belt, where decreasing belt speed crosses the fold).
struct SystemModel {
  SystemKind kind = SystemKind::NonlinearDamping;
  SystemParams params = NldParams{};
  double bifurcation_param = 0.0;
  int direction = +1;

  static SystemModel nld(double c3, double c1 = 0.5);
  static SystemModel mob(double v, MobParams p = {});
  static SystemModel vdp(double mu1, VdpParams p = {});
  static SystemModel pnp(double u, PnpParams p = {});

  static SystemModel make(SystemKind kind, const SystemParams& params,
                          double bifurcation_param);

  int state_dim() const;
  std::vector<std::pair<int, int>> coord_pairs() const;

  /// Steady equilibrium in raw coordinates. Nonzero only for the
  /// mass-on-belt system, where the spring balances kinetic friction at
  /// x = mu(v). Recorded trajectories are shifted by this offset so the
  /// polar amplitude measures distance from the equilibrium.
  std::vector<double> equilibrium() const;

  /// Throws UnsupportedParams / DimensionMismatch on invalid parameters.
  void validate() const;
};

/// Trajectory termination policy.
struct StopRule {
  double max_time = 400.0;
  double amplitude_floor_ratio = 4.5399929762484854e-5;  // e^-10
  double settle_window = 20.0;

  /// Default rule for a model: max_time = 100 / zeta_eff, capped at 5000,
  /// with zeta_eff the linearized decay scale of the system.
  static StopRule for_model(const SystemModel& model);
};

struct TrajectoryMeta {
  SystemKind kind = SystemKind::NonlinearDamping;
  double bifurcation_param = 0.0;
  std::vector<double> initial_state;
  std::uint64_t seed = 0;
};

/// Uniformly sampled state history. `states` is row-major
/// (n_steps x n_state); row 0 is the initial condition.
struct Trajectory {
  double dt = 0.0;
  int n_state = 0;
  std::vector<double> states;
  std::vector<std::pair<int, int>> coord_pairs;
  TrajectoryMeta meta;

  std::size_t n_steps() const { return n_state ? states.size() / n_state : 0; }
  double at(std::size_t step, int component) const {
    return states[step * n_state + component];
  }
  std::vector<double> column(int component) const;
};

enum class MobPhase { Slip, Stick };

// Vector fields -------------------------------------------------------------

std::array<double, 2> rhs_nld(const std::array<double, 2>& s, double c1,
                              double c3);

double friction_coefficient(double v_rel, double mu_s, double mu_d, double v0);

std::array<double, 2> rhs_mob_slip(const std::array<double, 2>& s, double v,
                                   const MobParams& p);

/// One dt step of the belt system with Filippov stick-slip switching.
/// Switching events are resolved by bisection in time; during stick the
/// mass moves with the belt until the static-friction cone is exited.
MobPhase step_mob(std::array<double, 2>& s, double v, double dt,
                  const MobParams& p);

std::array<double, 4> rhs_vdp(const std::array<double, 4>& s, double mu1,
                              const VdpParams& p);

std::array<double, 4> rhs_pnp(const std::array<double, 4>& s, double u,
                              const PnpParams& p);

// Integration ---------------------------------------------------------------

/// Fixed-step RK4 (mass-on-belt delegates to step_mob). States are recorded
/// shifted by the model equilibrium. Stops at max_time, or earlier once the
/// polar amplitude of the first coordinate pair has stayed below
/// amplitude_floor_ratio times its initial value for settle_window.
/// Throws DivergenceError if any state magnitude exceeds 1e6.
Trajectory integrate(const SystemModel& model, const std::vector<double>& ic,
                     double dt, const StopRule& stop);

// Fold locations ------------------------------------------------------------

/// Reference fold value: 40 c1 / 9 for the nonlinear-damping system
/// (analytic), stored constants 1.83 / 0.062 / 0.911 for the others
/// (default parameters only).
double reference_fold(SystemKind kind, const SystemParams& params);

/// Locate the fold by bisection on the predicate "a large-IC trajectory
/// settles onto a non-trivial steady state". Independent of
/// reference_fold.
double locate_fold_numeric(SystemKind kind, const SystemParams& params,
                           std::pair<double, double> bracket, double tol);

}  // namespace foldcast
