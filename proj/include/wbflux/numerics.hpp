#ifndef WBFLUX_NUMERICS_HPP
#define WBFLUX_NUMERICS_HPP

#include <functional>
#include <span>
#include <vector>

namespace wbflux {

using RealFn = std::function<double(double)>;

/// Fixed 5-point Gauss-Legendre rule on [a, b]; exact for polynomials up to degree 9.
double gauss5(const RealFn& f, double a, double b);

/// gauss5 applied piecewise, splitting [a, b] at the given abscissas (only those
/// strictly inside the interval are used). Gauss nodes are interior, so declared
/// jumps are integrated one-sidedly without ever evaluating f at the jump itself.
double gauss5_split(const RealFn& f, double a, double b, std::span<const double> breaks);

/// Average of f over [a, b] via gauss5_split. Throws QuadratureFailure on non-finite f.
double interval_average(const RealFn& f, double a, double b, std::span<const double> breaks = {});

/// Adaptive Gauss-Kronrod integration of f over [a, b] (abs/rel target ~1e-12),
/// split at the given interior abscissas first.
double integrate_adaptive(const RealFn& f, double a, double b, std::span<const double> breaks = {});

/// Bisection for a root of f in [lo, hi]; requires a sign change. Returns the midpoint
/// of the final bracket with width <= xtol.
double bisect(const RealFn& f, double lo, double hi, double xtol, int max_iter = 200);

/// Sampled supremum of |f| over [a, b] (n+1 equispaced points including endpoints).
double sampled_sup(const RealFn& f, double a, double b, int n = 4096);

}  // namespace wbflux

#endif
