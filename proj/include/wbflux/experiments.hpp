#ifndef WBFLUX_EXPERIMENTS_HPP
#define WBFLUX_EXPERIMENTS_HPP

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wbflux/analysis.hpp"
#include "wbflux/scheme.hpp"

namespace wbflux {

enum class PresetId { tc1_equilibrium, tc2_riemann, tc3_zero, tc4_discontinuous_z };

/// One row of a reference convergence table: grid, replayed time step, and the
/// published error values (NaN when the table has no such column).
struct TableRow {
  double dx = 0.0;
  double dt = 0.0;
  double ref_l1 = std::numeric_limits<double>::quiet_NaN();
  double ref_num = std::numeric_limits<double>::quiet_NaN();
};

/// Relative/absolute acceptance bands for comparing a computed row against the
/// published values. rel <= 0 or abs < 0 means the column is not checked.
struct RowTolerance {
  double rel_l1 = -1.0;
  double rel_num = -1.0;
  double abs_num = -1.0;
};

struct TestCasePreset {
  PresetId id;
  std::string name;
  std::string description;
  Problem problem;
  std::vector<TableRow> wb_rows;   // well-balanced table
  std::vector<TableRow> std_rows;  // source-splitting table
  std::vector<double> snapshot_times;
  RealFn exact;  // empty when no closed-form solution exists
  std::vector<double> exact_breakpoints;
  std::optional<std::pair<SchemeKind, long>> reference_spec;  // scheme + cells
  int default_cells = 40;
};

TestCasePreset preset(PresetId id);
std::optional<PresetId> preset_from_name(const std::string& name);
std::vector<TestCasePreset> all_presets();

/// Named elevation profiles selectable from the configuration.
Topography topography_by_name(const std::string& name);

RowTolerance tolerance_for(PresetId id, SchemeKind scheme);

struct TableOptions {
  bool paper_dt = false;   // replay the row's published dt; else adaptive
  bool expensive = false;  // include rows beyond the desk-scale gate
  std::vector<int> rows;   // 1-based selection; empty = all
  std::optional<double> tolerance;  // override the relative tolerances
  int threads = 0;         // 0 = WBFLUX_THREADS env or hardware count
  double adaptive_safety = 0.9;
};

struct RowOutcome {
  TableRow row;
  ErrorReport report;
  bool ran = false;
  bool gated = false;  // present but beyond the desk-scale gate
  bool l1_ok = true;
  bool num_ok = true;
};

/// Runs the preset's table for the chosen scheme, computes both error columns
/// per row, and checks them against the published values. Independent rows
/// run in parallel worker slots; results keep row order.
std::vector<RowOutcome> run_table(const TestCasePreset& preset, SchemeKind scheme,
                                  const TableOptions& options);

std::vector<ErrorReport> outcome_reports(const std::vector<RowOutcome>& outcomes);

/// Reference solution on a fine grid per the preset's reference_spec, cached
/// on disk by a content hash of its configuration (pass an empty cache_dir to
/// skip caching).
std::pair<SolverState, Discretization> reference_solution(const TestCasePreset& preset,
                                                          long n_cells,
                                                          const std::string& cache_dir);

}  // namespace wbflux

#endif
