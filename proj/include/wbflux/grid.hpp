#ifndef WBFLUX_GRID_HPP
#define WBFLUX_GRID_HPP

#include <optional>
#include <utility>
#include <vector>

#include "wbflux/model.hpp"

namespace wbflux {

/// Uniform cell decomposition of Omega = ]x_l, x_r[ with |Omega| / dx integral.
/// Interior cells are indexed j = 0 .. n_cells-1 (j_l = 0, j_r = n_cells-1).
struct Discretization {
  double x_l = 0.0;
  double x_r = 1.0;
  double dx = 1.0;
  long n_cells = 1;
  long j_l = 0;
  long j_r = 0;
  std::optional<double> dt;  // set in explicit time-step mode

  double center(long j) const { return x_l + (static_cast<double>(j - j_l) + 0.5) * dx; }
  double left_face(long j) const { return x_l + static_cast<double>(j - j_l) * dx; }
  double right_face(long j) const { return x_l + static_cast<double>(j - j_l + 1) * dx; }

  /// Rejects |Omega|/dx off an integer by more than 1e-9 relative.
  static Discretization uniform(double x_l, double x_r, double dx,
                                std::optional<double> dt = {});
  static Discretization with_cells(double x_l, double x_r, long n_cells,
                                   std::optional<double> dt = {});
};

/// Cell values u^n_j at one time level plus the ghost/boundary trace values.
struct SolverState {
  long time_index = 0;
  double time = 0.0;
  std::vector<double> interior;  // u^n_j over J
  double ghost_left = 0.0;       // u^n_l
  double ghost_right = 0.0;      // u^n_r

  /// u^n_j for any j, with ghost values outside the window.
  double value(long j) const {
    if (j < 0) return ghost_left;
    if (j >= static_cast<long>(interior.size())) return ghost_right;
    return interior[static_cast<size_t>(j)];
  }
  double max_abs() const;
};

/// Cell averages of u_0 by fixed 5-point Gauss per cell (split at declared
/// breakpoints of the initial data). Ghost values from the window [0, dt]
/// when disc.dt is set, else the point values at t = 0.
SolverState project_initial(const Problem& problem, const Discretization& disc);

/// Time averages of (u_l, u_r) over [t0, t0 + dt] by 5-point Gauss.
std::pair<double, double> boundary_averages(const Problem& problem, double t0, double dt);
/// Window [n dt, (n+1) dt].
std::pair<double, double> boundary_averages(const Problem& problem, long n, double dt);

/// Discrete topography: z_j cell averages (jump cells split at the declared
/// abscissas), constant ghost extension, and per-cell z'_j from one-sided
/// interface values for the standard scheme.
Topography project_topography(const Topography& proto, const Discretization& disc);
Topography project_topography(const RealFn& z, const Discretization& disc,
                              std::vector<double> jumps = {},
                              std::optional<double> sup_slope = {});

}  // namespace wbflux

#endif
