#ifndef WBFLUX_ANALYSIS_HPP
#define WBFLUX_ANALYSIS_HPP

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wbflux/grid.hpp"

namespace wbflux {

/// One convergence-table row. numerical_error is the L1 distance to the
/// projection of the exact solution; l1_error is the distance to the exact
/// solution itself.
struct ErrorReport {
  double dx = 0.0;
  double dt = 0.0;
  double l1_error = 0.0;
  double numerical_error = 0.0;
  double wall_time_s = 0.0;
  std::optional<double> eoc;  // vs the previous (coarser) row
};

/// sum_j int_{C_j} |u_j - exact(x)| dx; one sign change per cell is located by
/// bisection and the cell split there so each Gauss panel sees a smooth,
/// single-signed integrand. Cells are also split at the declared breakpoints.
double l1_error_vs_exact(const SolverState& state, const RealFn& exact,
                         const Discretization& disc, std::span<const double> breakpoints = {});

/// dx * sum_j |u_j - (1/dx) int_{C_j} exact|.
double l1_error_vs_projection(const SolverState& state, const RealFn& exact,
                              const Discretization& disc,
                              std::span<const double> breakpoints = {});

/// Exact L1 distance of two piecewise-constant states where one grid is an
/// integer refinement of the other (any argument order).
double l1_distance_states(const SolverState& a, const Discretization& da,
                          const SolverState& b, const Discretization& db);

/// EOC between consecutive rows: log(e_i / e_{i+1}) / log(dx_i / dx_{i+1}),
/// attached to the finer row. Rows must be sorted by decreasing dx.
void attach_eoc(std::vector<ErrorReport>& rows);

/// CSV with the exact column order dx,dt,l1_error,num_error,eoc,wall_time_s.
std::string error_reports_csv(std::span<const ErrorReport> rows);

/// Locale-independent formatting helpers shared by the CSV writers.
std::string format_double(double v, const char* fmt = "%.17g");

}  // namespace wbflux

#endif
