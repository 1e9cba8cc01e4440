#ifndef WBFLUX_ENTROPY_HPP
#define WBFLUX_ENTROPY_HPP

#include <functional>
#include <optional>
#include <vector>

#include "wbflux/grid.hpp"
#include "wbflux/model.hpp"

namespace wbflux {

struct SplitFlux;
struct RunResult;

enum class PairSign { plus, minus };

/// A convex entropy eta with matching flux q (q' = eta' f'). Anchored pairs
/// additionally satisfy eta(w) = eta'(w) = q(w) = 0; they are the boundary
/// entropy pairs the scheme diagnostics are built on.
struct EntropyPair {
  enum class Kind { smooth, semi_kruzkov, smoothed };

  RealFn eta;
  RealFn eta_prime;
  RealFn q;
  std::optional<double> anchor;
  Kind kind = Kind::smooth;
  PairSign sign = PairSign::plus;
  double k = 0.0;
  double delta = 0.0;
  std::vector<double> breakpoints;  // eta' kinks/knots, used to split quadratures
};

/// eta(s) = (s - w)^2 / 2 anchored at w, with q by quadrature from the anchor.
EntropyPair smooth_quadratic_pair(const FluxModel& model, double w);

/// eta_k^+-(s) = (s - k)^+- with q_k^+-(s) = sign^+-(s - k) (f(s) - f(k)).
/// eta' takes the one-sided value 0 at s = k, matching sign^+-(0).
EntropyPair semi_kruzkov_pair(const FluxModel& model, double k, PairSign sign);

/// C^2 regularization of the semi-Kruzkov pair: quartic blend on a delta-wide
/// knee, linear beyond, uniformly within delta of (s - k)^+-.
EntropyPair smoothed_boundary_pair(const FluxModel& model, double k, double delta,
                                   PairSign sign);

/// F(a, b) = sign(a - b) (f(a) - f(b)).
double kruzkov_flux_F(const FluxModel& model, double a, double b);

/// eta(H(u,v,w)) - eta(v) + lambda (G(v,w) - G(u,v)); <= 0 under the CFL
/// condition for C^2 pairs.
double cell_entropy_residual(const SplitFlux& split, const EntropyPair& pair,
                             double lambda, double u, double v, double w);

/// Smooth nonnegative space-time test function with phi(., T) = 0.
struct SpaceTimeTestFunction {
  std::function<double(double, double)> value;
  std::function<double(double, double)> dt;
  std::function<double(double, double)> dx;
};

/// C^2 bump psi((x-x0)/rx) * psi((t-t0)/rt) with psi(s) = (1-s^2)^3 on |s|<1;
/// choose t0, rt with t0 + rt <= T so phi(., T) = 0.
SpaceTimeTestFunction bump_test_function(double x0, double rx, double t0, double rt);

/// Discrete weak entropy residual of a retained-history run: space-time
/// quadrature of the entropy functional of the numerical solution, aligned
/// with its piecewise-constant structure (midpoint in cell, left endpoint in
/// time). Bounded below by -c dx for anchored pairs.
double weak_entropy_residual(const RunResult& run, const EntropyPair& pair,
                             const SpaceTimeTestFunction& phi);

/// L1 distance dx * sum |u_j - ref_j| on a shared grid.
double equilibrium_drift(const SolverState& state, const SolverState& reference, double dx);

}  // namespace wbflux

#endif
