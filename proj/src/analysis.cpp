#include "wbflux/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "wbflux/errors.hpp"

namespace wbflux {

namespace {

// Integral of |c - exact| over [a, b], assuming at most one sign change of the
// difference inside; locates it by bisection and splits there.
double abs_gap_integral(double c, const RealFn& exact, double a, double b) {
  auto diff = [&](double x) { return c - exact(x); };
  auto abs_diff = [&](double x) { return std::abs(c - exact(x)); };
  const double da = diff(a + 1e-14 * (b - a));
  const double db = diff(b - 1e-14 * (b - a));
  if (da == 0.0 || db == 0.0 || std::signbit(da) == std::signbit(db))
    return gauss5(abs_diff, a, b);
  const double m = bisect(diff, a, b, 1e-13 * (b - a));
  return gauss5(abs_diff, a, m) + gauss5(abs_diff, m, b);
}

}  // namespace

double l1_error_vs_exact(const SolverState& state, const RealFn& exact,
                         const Discretization& disc, std::span<const double> breakpoints) {
  double acc = 0.0;
  for (long j = 0; j < disc.n_cells; ++j) {
    const double uj = state.interior[static_cast<size_t>(j)];
    const double a = disc.left_face(j);
    const double b = disc.right_face(j);
    // Split first at declared breakpoints of the exact solution.
    std::vector<double> pts;
    for (double p : breakpoints)
      if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    double lo = a;
    for (double p : pts) {
      acc += abs_gap_integral(uj, exact, lo, p);
      lo = p;
    }
    acc += abs_gap_integral(uj, exact, lo, b);
  }
  return acc;
}

double l1_error_vs_projection(const SolverState& state, const RealFn& exact,
                              const Discretization& disc,
                              std::span<const double> breakpoints) {
  double acc = 0.0;
  for (long j = 0; j < disc.n_cells; ++j) {
    const double avg =
        interval_average(exact, disc.left_face(j), disc.right_face(j), breakpoints);
    acc += std::abs(state.interior[static_cast<size_t>(j)] - avg);
  }
  return disc.dx * acc;
}

double l1_distance_states(const SolverState& a, const Discretization& da,
                          const SolverState& b, const Discretization& db) {
  if (std::abs(da.x_l - db.x_l) > 1e-12 || std::abs(da.x_r - db.x_r) > 1e-12)
    throw IncompatibleGrids("l1_distance_states: domains differ");
  const SolverState& coarse = (da.n_cells <= db.n_cells) ? a : b;
  const SolverState& fine = (da.n_cells <= db.n_cells) ? b : a;
  const Discretization& dc = (da.n_cells <= db.n_cells) ? da : db;
  const Discretization& df = (da.n_cells <= db.n_cells) ? db : da;
  if (df.n_cells % dc.n_cells != 0)
    throw IncompatibleGrids("l1_distance_states: fine grid is not an integer refinement");
  const long ratio = df.n_cells / dc.n_cells;
  double acc = 0.0;
  for (long j = 0; j < dc.n_cells; ++j) {
    const double cj = coarse.interior[static_cast<size_t>(j)];
    for (long i = 0; i < ratio; ++i)
      acc += std::abs(cj - fine.interior[static_cast<size_t>(j * ratio + i)]);
  }
  return df.dx * acc;
}

void attach_eoc(std::vector<ErrorReport>& rows) {
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].eoc.reset();
      continue;
    }
    const double e0 = rows[i - 1].l1_error;
    const double e1 = rows[i].l1_error;
    const double h0 = rows[i - 1].dx;
    const double h1 = rows[i].dx;
    if (e0 > 0.0 && e1 > 0.0 && h0 != h1)
      rows[i].eoc = std::log(e0 / e1) / std::log(h0 / h1);
    else if (e0 == e1)
      rows[i].eoc = 0.0;
    else
      rows[i].eoc.reset();
  }
}

std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string error_reports_csv(std::span<const ErrorReport> rows) {
  std::string out = "dx,dt,l1_error,num_error,eoc,wall_time_s\n";
  for (const auto& r : rows) {
    out += format_double(r.dx, "%.10g");
    out += ',';
    out += format_double(r.dt, "%.10g");
    out += ',';
    out += format_double(r.l1_error, "%.10e");
    out += ',';
    out += format_double(r.numerical_error, "%.10e");
    out += ',';
    if (r.eoc) out += format_double(*r.eoc, "%.6g");
    out += ',';
    out += format_double(r.wall_time_s, "%.4f");
    out += '\n';
  }
  return out;
}

}  // namespace wbflux
