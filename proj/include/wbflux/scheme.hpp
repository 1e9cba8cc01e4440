#ifndef WBFLUX_SCHEME_HPP
#define WBFLUX_SCHEME_HPP

#include <span>
#include <utility>
#include <vector>

#include "wbflux/flux.hpp"
#include "wbflux/grid.hpp"
#include "wbflux/model.hpp"

namespace wbflux {

enum class SchemeKind { well_balanced, standard };
enum class DtMode { explicit_dt, paper_bound, adaptive };

/// Time-step policy. explicit_dt replays a fixed step; paper_bound derives the
/// step from the theoretical envelope; adaptive uses the current solution range
/// with a safety factor.
struct StepPolicy {
  DtMode mode = DtMode::adaptive;
  double dt = 0.0;          // explicit_dt mode
  double cfl_target = 1.0;  // paper_bound mode, <= 1
  double safety = 0.9;      // adaptive mode, in (0, 1]
  double dt_max = 1e9;      // cap when the local wave speed vanishes

  static StepPolicy explicit_dt_policy(double dt);
  static StepPolicy paper_bound_policy(double cfl_target = 1.0);
  static StepPolicy adaptive_policy(double safety = 0.9, double dt_max = 1e9);
};

/// Theoretical L-infinity envelope of the numerical solution:
/// C^dx_T = M e^{2T||b'|| ||z'||} + dx (||z'||/inf D') e^{4T||b'|| ||z'||}
///        + |b(0)| e^{2T(||b'||+1) ||z'||}.
struct BoundEnvelope {
  double m = 0.0;       // data bound M
  double c_dx_T = 0.0;  // envelope radius
  double k_lo() const { return -c_dx_T; }
  double k_hi() const { return c_dx_T; }
};

BoundEnvelope compute_bound_envelope(const Problem& problem, double dx, const Topography& topo);

/// Equilibrium-reconstructed neighbor values for cell j:
/// D(u_{j-1,+}) = D(u_{j-1}) + z_{j-1} - z_j and
/// D(u_{j+1,-}) = D(u_{j+1}) + z_{j+1} - z_j.
/// Identity-D models use the closed form u +- dz.
std::pair<double, double> reconstruct_interface_states(const FluxModel& model,
                                                       const Topography& topo,
                                                       const SolverState& state, long j);

/// One well-balanced update
/// u_j <- u_j - (dt/dx) (g(u_j, u_{j+1,-}) - g(u_{j-1,+}, u_j)).
/// Ghost values and times are carried over; the driver refreshes them.
SolverState well_balanced_step(const FluxModel& model, const Topography& topo,
                               const SplitFlux& split, const SolverState& state, double dt,
                               double dx, double blowup_limit = 0.0);

/// One source-splitting update
/// u_j <- u_j - (dt/dx) (g(u_j, u_{j+1}) - g(u_{j-1}, u_j)) - dt z'_j b(u_j).
SolverState standard_step(const FluxModel& model, const Topography& topo,
                          const SplitFlux& split, const SolverState& state, double dt,
                          double dx, double blowup_limit = 0.0);

/// The time step the policy selects for the current state.
double choose_dt(const StepPolicy& policy, const BoundEnvelope& envelope,
                 const FluxModel& model, double dx, const SolverState& state,
                 const Topography& topo);

struct RunOptions {
  bool keep_history = false;     // retain every time level (N_T * |J| reals)
  double blowup_factor = 10.0;   // abort when |u| > factor * C^dx_T
};

struct RunResult {
  Problem problem;
  Discretization disc;
  StepPolicy policy;
  SchemeKind kind = SchemeKind::well_balanced;
  Topography topo;  // discrete topography used by the run
  BoundEnvelope envelope;

  SolverState final_state;
  std::vector<std::pair<double, SolverState>> snapshots;
  long step_count = 0;
  long truncated_steps = 0;  // steps clipped below the policy dt (horizon/snapshots)
  double wall_time_s = 0.0;
  double max_abs_seen = 0.0;
  std::vector<double> max_abs_trajectory;  // per time level, starting at n = 0
  bool cfl_paper_ok = true;     // lambda Lip_{K^dx_T}(f) <= 1 held at every step
  bool cfl_observed_ok = true;  // lambda Lip over the observed range held

  bool has_history = false;
  std::vector<SolverState> history;  // time levels 0..N_T (has_history only)
};

/// Integrate the chosen scheme to the problem horizon, recording snapshots at
/// the requested times. Deterministic for fixed inputs. Throws StateBlowup.
RunResult run(const Problem& problem, const Discretization& disc, const StepPolicy& policy,
              SchemeKind kind, std::span<const double> snapshot_times = {},
              const RunOptions& options = {});

}  // namespace wbflux

#endif
