#include "wbflux/scheme.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wbflux/errors.hpp"

namespace wbflux {

StepPolicy StepPolicy::explicit_dt_policy(double dt) {
  if (!(dt > 0.0)) throw ConfigError("StepPolicy: explicit dt must be > 0");
  StepPolicy p;
  p.mode = DtMode::explicit_dt;
  p.dt = dt;
  return p;
}

StepPolicy StepPolicy::paper_bound_policy(double cfl_target) {
  if (!(cfl_target > 0.0 && cfl_target <= 1.0))
    throw ConfigError("StepPolicy: cfl_target must be in (0, 1]");
  StepPolicy p;
  p.mode = DtMode::paper_bound;
  p.cfl_target = cfl_target;
  return p;
}

StepPolicy StepPolicy::adaptive_policy(double safety, double dt_max) {
  if (!(safety > 0.0 && safety <= 1.0))
    throw ConfigError("StepPolicy: safety must be in (0, 1]");
  StepPolicy p;
  p.mode = DtMode::adaptive;
  p.safety = safety;
  p.dt_max = dt_max;
  return p;
}

BoundEnvelope compute_bound_envelope(const Problem& problem, double dx, const Topography& topo) {
  BoundEnvelope env;
  env.m = problem.data_sup();
  const double bp = problem.model.b_prime_sup;
  const double zs = topo.sup_slope;
  const double t = problem.horizon;
  const double b0 = std::abs(problem.model.b(0.0));
  env.c_dx_T = env.m * std::exp(2.0 * t * bp * zs) +
               dx * (zs / problem.model.d_prime_lower_bound) * std::exp(4.0 * t * bp * zs) +
               b0 * std::exp(2.0 * t * (bp + 1.0) * zs);
  return env;
}

std::pair<double, double> reconstruct_interface_states(const FluxModel& model,
                                                       const Topography& topo,
                                                       const SolverState& state, long j) {
  const double zj = topo.value(j);
  const double um = state.value(j - 1);
  const double up = state.value(j + 1);
  const double dzl = topo.value(j - 1) - zj;
  const double dzr = topo.value(j + 1) - zj;
  if (model.d_identity) return {um + dzl, up + dzr};
  const double ul = (dzl == 0.0) ? um : invert_D(model, evaluate_D(model, um) + dzl);
  const double ur = (dzr == 0.0) ? up : invert_D(model, evaluate_D(model, up) + dzr);
  return {ul, ur};
}

namespace {

void check_blowup(const std::vector<double>& u, double limit, long step_index) {
  if (limit <= 0.0) return;
  for (double v : u) {
    if (!(std::abs(v) <= limit))
      throw StateBlowup("scheme: |u| = " + std::to_string(v) + " exceeded " +
                            std::to_string(limit) + " (CFL misconfiguration?)",
                        step_index, v);
  }
}

void wb_kernel(const FluxModel& model, const Topography& topo, const SplitFlux& split,
               const SolverState& s, double lambda, std::vector<double>& out) {
  const long n = static_cast<long>(s.interior.size());
  if (model.d_identity) {
    for (long j = 0; j < n; ++j) {
      const double uj = s.interior[static_cast<size_t>(j)];
      const double zj = topo.value(j);
      const double ul = s.value(j - 1) + (topo.value(j - 1) - zj);
      const double ur = s.value(j + 1) + (topo.value(j + 1) - zj);
      out[static_cast<size_t>(j)] = uj - lambda * (split.flux(uj, ur) - split.flux(ul, uj));
    }
  } else {
    for (long j = 0; j < n; ++j) {
      const double uj = s.interior[static_cast<size_t>(j)];
      const auto [ul, ur] = reconstruct_interface_states(model, topo, s, j);
      out[static_cast<size_t>(j)] = uj - lambda * (split.flux(uj, ur) - split.flux(ul, uj));
    }
  }
}

// z'_j: precomputed from interface values when a profile is available, else
// centered differences of the cell values.
double source_slope(const Topography& topo, long j, double dx) {
  if (!topo.source_slopes.empty()) return topo.source_slopes[static_cast<size_t>(j)];
  return (topo.value(j + 1) - topo.value(j - 1)) / (2.0 * dx);
}

void standard_kernel(const FluxModel& model, const Topography& topo, const SplitFlux& split,
                     const SolverState& s, double dt, double dx, std::vector<double>& out) {
  const long n = static_cast<long>(s.interior.size());
  const double lambda = dt / dx;
  for (long j = 0; j < n; ++j) {
    const double uj = s.interior[static_cast<size_t>(j)];
    const double div = split.flux(uj, s.value(j + 1)) - split.flux(s.value(j - 1), uj);
    out[static_cast<size_t>(j)] = uj - lambda * div - dt * source_slope(topo, j, dx) * model.b(uj);
  }
}

}  // namespace

SolverState well_balanced_step(const FluxModel& model, const Topography& topo,
                               const SplitFlux& split, const SolverState& state, double dt,
                               double dx, double blowup_limit) {
  SolverState next = state;
  wb_kernel(model, topo, split, state, dt / dx, next.interior);
  check_blowup(next.interior, blowup_limit, state.time_index);
  next.time_index = state.time_index + 1;
  next.time = state.time + dt;
  return next;
}

SolverState standard_step(const FluxModel& model, const Topography& topo,
                          const SplitFlux& split, const SolverState& state, double dt,
                          double dx, double blowup_limit) {
  SolverState next = state;
  standard_kernel(model, topo, split, state, dt, dx, next.interior);
  check_blowup(next.interior, blowup_limit, state.time_index);
  next.time_index = state.time_index + 1;
  next.time = state.time + dt;
  return next;
}

namespace {

// Range actually entering the flux: cell values, ghosts, and the
// equilibrium-reconstructed interface states.
double active_range(const FluxModel& model, const Topography& topo, const SolverState& state) {
  double c = state.max_abs();
  const long n = static_cast<long>(state.interior.size());
  for (long j = 0; j < n; ++j) {
    const auto [ul, ur] = reconstruct_interface_states(model, topo, state, j);
    c = std::max(c, std::max(std::abs(ul), std::abs(ur)));
  }
  return c;
}

}  // namespace

double choose_dt(const StepPolicy& policy, const BoundEnvelope& envelope, const FluxModel& model,
                 double dx, const SolverState& state, const Topography& topo) {
  switch (policy.mode) {
    case DtMode::explicit_dt:
      return policy.dt;
    case DtMode::paper_bound: {
      const double lip = lipschitz_on(model, envelope.c_dx_T);
      if (lip <= 0.0) return policy.dt_max;
      return std::min(policy.cfl_target * dx / lip, policy.dt_max);
    }
    case DtMode::adaptive:
    default: {
      const double lip = lipschitz_on(model, active_range(model, topo, state));
      if (lip <= 0.0) return policy.dt_max;
      return std::min(policy.safety * dx / lip, policy.dt_max);
    }
  }
}

RunResult run(const Problem& problem, const Discretization& disc, const StepPolicy& policy,
              SchemeKind kind, std::span<const double> snapshot_times,
              const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  problem.validate();

  RunResult r;
  r.problem = problem;
  r.disc = disc;
  r.policy = policy;
  r.kind = kind;
  r.topo = project_topography(problem.topo, disc);
  r.envelope = compute_bound_envelope(problem, disc.dx, r.topo);

  const SplitFlux split = make_split_flux(problem.model);
  const double t_end = problem.horizon;
  const double t_tol = 1e-12 * std::max(1.0, t_end);
  const double blowup_limit = options.blowup_factor * r.envelope.c_dx_T;
  const double lip_paper = lipschitz_on(problem.model, r.envelope.c_dx_T);

  std::vector<double> targets(snapshot_times.begin(), snapshot_times.end());
  std::sort(targets.begin(), targets.end());
  size_t next_target = 0;

  SolverState state = project_initial(problem, disc);
  std::vector<double> buffer(state.interior.size());
  r.max_abs_trajectory.push_back(state.max_abs());
  r.max_abs_seen = r.max_abs_trajectory.back();

  auto record_snapshots = [&](const SolverState& s) {
    while (next_target < targets.size() && targets[next_target] <= s.time + t_tol) {
      r.snapshots.emplace_back(targets[next_target], s);
      ++next_target;
    }
  };
  record_snapshots(state);

  // Reconstruction can shift a neighbor value by at most |dz| / inf D'
  // (mean value theorem on D), which bounds the observed flux range cheaply.
  double dz_shift = 0.0;
  for (long j = -1; j < disc.n_cells; ++j)
    dz_shift = std::max(dz_shift, std::abs(r.topo.value(j + 1) - r.topo.value(j)));
  dz_shift /= problem.model.d_prime_lower_bound;

  // Cached Lipschitz bound over the observed range; re-evaluated on growth.
  double lip_obs_range = -1.0, lip_obs = 0.0;

  while (t_end - state.time > t_tol) {
    double dt = choose_dt(policy, r.envelope, problem.model, disc.dx, state, r.topo);
    const double policy_dt = dt;
    dt = std::min(dt, t_end - state.time);
    if (next_target < targets.size())
      dt = std::min(dt, std::max(targets[next_target] - state.time, t_tol));
    if (!(dt > 0.0)) throw ConfigError("run: non-positive time step");
    if (dt < policy_dt * (1.0 - 1e-12)) ++r.truncated_steps;

    // Ghost values for this step: time averages over [t, t + dt].
    std::tie(state.ghost_left, state.ghost_right) = boundary_averages(problem, state.time, dt);

    const double lambda = dt / disc.dx;
    if (lambda * lip_paper > 1.0 + 1e-12) r.cfl_paper_ok = false;
    const double obs_range = r.max_abs_trajectory.back() + dz_shift;
    if (obs_range > lip_obs_range) {
      lip_obs_range = obs_range * 1.01;
      lip_obs = lipschitz_on(problem.model, lip_obs_range);
    }
    if (lambda * lip_obs > 1.0 + 1e-12) r.cfl_observed_ok = false;

    if (options.keep_history) r.history.push_back(state);

    if (kind == SchemeKind::well_balanced)
      wb_kernel(problem.model, r.topo, split, state, lambda, buffer);
    else
      standard_kernel(problem.model, r.topo, split, state, dt, disc.dx, buffer);
    check_blowup(buffer, blowup_limit, r.step_count);

    state.interior.swap(buffer);
    state.time += dt;
    state.time_index += 1;
    ++r.step_count;

    const double m = state.max_abs();
    r.max_abs_trajectory.push_back(m);
    r.max_abs_seen = std::max(r.max_abs_seen, m);
    record_snapshots(state);
  }

  if (options.keep_history) {
    r.history.push_back(state);
    r.has_history = true;
  }
  r.final_state = std::move(state);
  r.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return r;
}

}  // namespace wbflux
