#ifndef WBFLUX_MODEL_HPP
#define WBFLUX_MODEL_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wbflux/numerics.hpp"

namespace wbflux {

/// Structural shape of f', used to pick closed forms for the split flux.
enum class SplitForm {
  generic,           // split integrals via the cached quadrature table
  convex_zero_min,   // f convex with f'(0) = 0: g(u,v) = f(u+) + f(v-) - f(0)
  positive_speed,    // f' >= 0 everywhere: pure upwind g(u,v) = f(u)
};

struct DCache;  // memoized anchors for the quadrature-based equilibrium map

/// The conservation law: flux f, its derivative, source coefficient b, and the
/// equilibrium map D(s) = int_0^s f'/b. Immutable after construction.
struct FluxModel {
  std::string name = "custom";
  RealFn f;
  RealFn df;
  RealFn b;

  std::optional<RealFn> d_eval;     // closed-form D
  std::optional<RealFn> d_inverse;  // closed-form D^{-1}
  double d_prime_lower_bound = 1.0; // inf_R D' (must be > 0)
  double b_prime_sup = 0.0;         // ||b'||_inf, used by the boundedness envelope
  bool d_identity = false;          // enables the u +- dz reconstruction fast path

  SplitForm split_form = SplitForm::generic;

  // Interior critical points of f' inside which |f'| may peak; when set,
  // lipschitz_on uses endpoints + these instead of dense sampling.
  std::optional<std::vector<double>> df_extrema;

  std::shared_ptr<DCache> d_cache;  // lazily built, internally synchronized
};

FluxModel burgers_hopf_model();
FluxModel linear_advection_model();

/// Fresh memo for a quadrature-backed equilibrium map (models without d_eval).
std::shared_ptr<DCache> make_d_cache();

/// Self-check of the structural assumptions: f/df consistency by finite
/// differences, D' >= lower bound on samples, and (for quadrature-backed D)
/// the inverse roundtrip. Throws AssumptionViolation on failure.
void validate_model(const FluxModel& model, double range = 5.0);

/// D(s) = int_0^s f'(xi)/b(xi) dxi. Closed form when supplied, otherwise
/// adaptive quadrature with memoized anchor points.
double evaluate_D(const FluxModel& model, double s);

/// The unique s with D(s) = y, to |D(s)-y| <= 1e-12. Safeguarded Newton with a
/// bisection fallback on the bracket |s| <= |y| / inf D'.
double invert_D(const FluxModel& model, double y);

/// sup |f'| over [-c, c]; closed form via declared extrema when available,
/// else dense sampling (2^12 intervals) with a 1.01 safety factor.
double lipschitz_on(const FluxModel& model, double c);

/// Elevation profile z together with its per-cell discrete values z_j.
/// Ghost cells carry the constant extension z_{j_l} / z_{j_r}.
struct Topography {
  RealFn z;                        // may be empty when built from raw cell values
  std::vector<double> cell_values; // z_j for j in J
  double sup_slope = 0.0;          // ||z'||_inf, or a user-declared surrogate
  bool nonconforming = false;      // true when z is declared discontinuous
  std::vector<double> jumps;       // declared jump abscissas
  std::vector<double> breakpoints; // quadrature split points (kinks and jumps)
  std::vector<double> source_slopes; // z'_j for the standard scheme, per cell

  /// z_j with constant ghost extension for j outside [0, n).
  double value(long j) const {
    if (cell_values.empty()) return 0.0;
    if (j < 0) j = 0;
    const long n = static_cast<long>(cell_values.size());
    if (j >= n) j = n - 1;
    return cell_values[static_cast<size_t>(j)];
  }

  static Topography from_cell_values(std::vector<double> values, double sup_slope = 0.0);
};

/// The initial boundary value problem: model, topography, domain, horizon,
/// initial data, and inflow boundary data.
struct Problem {
  FluxModel model;
  Topography topo;
  double x_l = 0.0;
  double x_r = 1.0;
  double horizon = 1.0;  // T
  RealFn initial;        // u_0(x)
  RealFn left_bc;        // u_l(t)
  RealFn right_bc;       // u_r(t)
  std::vector<double> initial_breakpoints;  // declared kinks/jumps of u_0

  /// M = max of sup|u_0|, sup|u_l|, sup|u_r| (sampled).
  double data_sup() const;

  /// Throws AssumptionViolation / ConfigError on inconsistent data.
  void validate() const;
};

}  // namespace wbflux

#endif
