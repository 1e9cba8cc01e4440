#ifndef WBFLUX_FLUX_HPP
#define WBFLUX_FLUX_HPP

#include <algorithm>
#include <memory>

#include "wbflux/entropy.hpp"
#include "wbflux/model.hpp"

namespace wbflux {

struct SplitCache;  // lazily extended cumulative integrals of (f')^+ and (f')^-

/// Engquist-Osher building blocks: the split integrals of the positive and
/// negative parts of f'. Sign convention: (f')^+ = max(f', 0) and
/// (f')^- = max(-f', 0), both nonnegative, so that
/// fplus_int(u) - fminus_int(u) + f(0) = f(u).
struct SplitFlux {
  SplitForm form = SplitForm::generic;
  double f_at_zero = 0.0;
  RealFn f;
  RealFn df;
  std::shared_ptr<SplitCache> cache;  // generic path only

  double fplus_int(double u) const;   // int_0^u (f')^+
  double fminus_int(double v) const;  // int_0^v (f')^-
  double dfp(double s) const { return std::max(df(s), 0.0); }
  double dfm(double s) const { return std::max(-df(s), 0.0); }

  /// g(u, v), with closed forms for the declared flux shapes.
  double flux(double u, double v) const {
    switch (form) {
      case SplitForm::convex_zero_min:
        return f(std::max(u, 0.0)) + f(std::min(v, 0.0)) - f_at_zero;
      case SplitForm::positive_speed:
        return f(u);
      default:
        return fplus_int(u) - fminus_int(v) + f_at_zero;
    }
  }
};

SplitFlux make_split_flux(const FluxModel& model);

/// Engquist-Osher flux g(u, v) = int_0^u (f')^+ - int_0^v (f')^- + f(0).
double eo_flux(const SplitFlux& split, double u, double v);

/// Three-point scheme operator H(u, v, w) = v - lambda (g(v, w) - g(u, v)).
double scheme_operator_H(const SplitFlux& split, double lambda, double u, double v, double w);

/// Density h(u, v, w)(xi) with int_R h = H(u, v, w); pointwise a convex
/// combination of the signed indicators chi_u, chi_v, chi_w under the CFL
/// condition lambda |f'| <= 1 on their span.
double chi_density_h(const SplitFlux& split, double lambda, double u, double v, double w,
                     double xi);

/// Numerical entropy flux G(u, v) = int_0^u eta'(f')^+ - int_0^v eta'(f')^- + q(0),
/// by adaptive quadrature split at the pair's knots. Consistent: G(u, u) = q(u).
double entropy_flux_G(const SplitFlux& split, const EntropyPair& pair, double u, double v);

}  // namespace wbflux

#endif
