#include "wbflux/grid.hpp"

#include <algorithm>
#include <cmath>

#include "wbflux/errors.hpp"

namespace wbflux {

Discretization Discretization::uniform(double x_l, double x_r, double dx,
                                       std::optional<double> dt) {
  if (!(x_r > x_l)) throw ConfigError("grid: requires x_l < x_r");
  if (!(dx > 0.0)) throw ConfigError("grid: requires dx > 0");
  const double ratio = (x_r - x_l) / dx;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("grid: (x_r - x_l)/dx = " + std::to_string(ratio) +
                      " deviates from an integer");
  Discretization d;
  d.x_l = x_l;
  d.x_r = x_r;
  d.dx = dx;
  d.n_cells = static_cast<long>(rounded);
  d.j_l = 0;
  d.j_r = d.n_cells - 1;
  d.dt = dt;
  return d;
}

Discretization Discretization::with_cells(double x_l, double x_r, long n_cells,
                                          std::optional<double> dt) {
  if (n_cells < 1) throw ConfigError("grid: requires n_cells >= 1");
  return uniform(x_l, x_r, (x_r - x_l) / static_cast<double>(n_cells), dt);
}

double SolverState::max_abs() const {
  double m = std::max(std::abs(ghost_left), std::abs(ghost_right));
  for (double u : interior) m = std::max(m, std::abs(u));
  return m;
}

SolverState project_initial(const Problem& problem, const Discretization& disc) {
  SolverState s;
  s.interior.resize(static_cast<size_t>(disc.n_cells));
  for (long j = 0; j < disc.n_cells; ++j) {
    s.interior[static_cast<size_t>(j)] = interval_average(
        problem.initial, disc.left_face(j), disc.right_face(j), problem.initial_breakpoints);
    if (!std::isfinite(s.interior[static_cast<size_t>(j)]))
      throw QuadratureFailure("project_initial: non-finite cell average");
  }
  const double dt = disc.dt.value_or(0.0);
  std::tie(s.ghost_left, s.ghost_right) = boundary_averages(problem, 0.0, dt);
  return s;
}

std::pair<double, double> boundary_averages(const Problem& problem, double t0, double dt) {
  const double t1 = t0 + dt;
  return {interval_average(problem.left_bc, t0, t1),
          interval_average(problem.right_bc, t0, t1)};
}

std::pair<double, double> boundary_averages(const Problem& problem, long n, double dt) {
  return boundary_averages(problem, static_cast<double>(n) * dt, dt);
}

namespace {

// One-sided point value of z at a face: if x coincides with a declared jump,
// nudge into the requested side so piecewise profiles evaluate their limit.
double face_value(const RealFn& z, double x, double dx,
                  const std::vector<double>& jumps, int side) {
  for (double a : jumps) {
    if (std::abs(x - a) <= 1e-9 * std::max(1.0, std::abs(a)))
      return z(x + side * 1e-7 * dx);
  }
  return z(x);
}

}  // namespace

Topography project_topography(const Topography& proto, const Discretization& disc) {
  if (!proto.z) {
    if (static_cast<long>(proto.cell_values.size()) != disc.n_cells)
      throw ConfigError("project_topography: tabulated topography has wrong cell count");
    return proto;
  }
  Topography t = proto;
  if (t.sup_slope == 0.0 && !t.nonconforming) {
    // ||z'||_inf estimated by sampled difference quotients.
    const long ns = 1 << 12;
    const double h = (disc.x_r - disc.x_l) / static_cast<double>(ns);
    double sup = 0.0;
    for (long i = 0; i < ns; ++i) {
      const double a = disc.x_l + h * static_cast<double>(i);
      sup = std::max(sup, std::abs(proto.z(a + h) - proto.z(a)) / h);
    }
    t.sup_slope = sup;
  }
  t.cell_values.resize(static_cast<size_t>(disc.n_cells));
  std::vector<double> breaks = proto.breakpoints;
  breaks.insert(breaks.end(), proto.jumps.begin(), proto.jumps.end());
  for (long j = 0; j < disc.n_cells; ++j) {
    t.cell_values[static_cast<size_t>(j)] =
        interval_average(proto.z, disc.left_face(j), disc.right_face(j), breaks);
  }
  // z'_j = (z(x_{j+1/2}) - z(x_{j-1/2})) / dx, the cell average of z' where z
  // is conforming; at declared jumps each cell uses its one-sided limit.
  t.source_slopes.resize(static_cast<size_t>(disc.n_cells));
  for (long j = 0; j < disc.n_cells; ++j) {
    const double zl = face_value(proto.z, disc.left_face(j), disc.dx, proto.jumps, +1);
    const double zr = face_value(proto.z, disc.right_face(j), disc.dx, proto.jumps, -1);
    t.source_slopes[static_cast<size_t>(j)] = (zr - zl) / disc.dx;
  }
  return t;
}

Topography project_topography(const RealFn& z, const Discretization& disc,
                              std::vector<double> jumps, std::optional<double> sup_slope) {
  Topography proto;
  proto.z = z;
  proto.jumps = jumps;
  proto.breakpoints = std::move(jumps);
  proto.nonconforming = !proto.jumps.empty();
  if (sup_slope) proto.sup_slope = *sup_slope;
  else if (proto.nonconforming)
    throw ConfigError("project_topography: discontinuous z requires a declared sup_slope");
  return project_topography(proto, disc);
}

}  // namespace wbflux
