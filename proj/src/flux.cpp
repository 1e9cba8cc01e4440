#include "wbflux/flux.hpp"

#include <cmath>
#include <mutex>
#include <vector>

#include "wbflux/errors.hpp"

namespace wbflux {

namespace {
constexpr double kTableSpacing = 0.25;
}

// Cumulative integrals of (f')^+ and (f')^- at anchors k * kTableSpacing,
// extended lazily on both sides under a mutex.
struct SplitCache {
  std::mutex mutex;
  std::vector<double> plus_pos{0.0}, plus_neg{0.0};
  std::vector<double> minus_pos{0.0}, minus_neg{0.0};
};

namespace {

// Integrate part(f') over [a, b], splitting once at a sign change of f'
// (located by bisection) so each Gauss panel sees a smooth integrand.
// Segments are short (<= kTableSpacing), so one sign change per segment is
// the supported resolution.
double integrate_part(const RealFn& df, bool positive_part, double a, double b) {
  auto part = [&df, positive_part](double xi) {
    const double d = df(xi);
    return positive_part ? std::max(d, 0.0) : std::max(-d, 0.0);
  };
  const double da = df(a), db = df(b);
  if (da == 0.0 || db == 0.0 || std::signbit(da) == std::signbit(db))
    return gauss5(part, a, b);
  const double root = bisect(df, std::min(a, b), std::max(a, b), 1e-14 * std::max(1.0, std::abs(a) + std::abs(b)));
  return gauss5(part, a, std::clamp(root, std::min(a, b), std::max(a, b))) +
         gauss5(part, std::clamp(root, std::min(a, b), std::max(a, b)), b);
}

double table_eval(const SplitFlux& split, bool positive_part, double u) {
  if (!split.cache) throw AssumptionViolation("SplitFlux: generic form without cache");
  SplitCache& c = *split.cache;
  std::lock_guard<std::mutex> lock(c.mutex);
  std::vector<double>& cum = positive_part ? (u >= 0.0 ? c.plus_pos : c.plus_neg)
                                           : (u >= 0.0 ? c.minus_pos : c.minus_neg);
  const double dir = (u >= 0.0) ? 1.0 : -1.0;
  const size_t idx = static_cast<size_t>(std::floor(std::abs(u) / kTableSpacing));
  while (cum.size() <= idx) {
    const size_t i = cum.size();
    const double a = dir * kTableSpacing * static_cast<double>(i - 1);
    const double b = dir * kTableSpacing * static_cast<double>(i);
    cum.push_back(cum.back() + integrate_part(split.df, positive_part, a, b));
  }
  const double anchor = dir * kTableSpacing * static_cast<double>(idx);
  return cum[idx] + integrate_part(split.df, positive_part, anchor, u);
}

}  // namespace

double SplitFlux::fplus_int(double u) const {
  switch (form) {
    case SplitForm::convex_zero_min:
      return f(std::max(u, 0.0)) - f_at_zero;
    case SplitForm::positive_speed:
      return f(u) - f_at_zero;
    default:
      return table_eval(*this, true, u);
  }
}

double SplitFlux::fminus_int(double v) const {
  switch (form) {
    case SplitForm::convex_zero_min:
      return -(f(std::min(v, 0.0)) - f_at_zero);
    case SplitForm::positive_speed:
      return 0.0;
    default:
      return table_eval(*this, false, v);
  }
}

SplitFlux make_split_flux(const FluxModel& model) {
  SplitFlux s;
  s.form = model.split_form;
  s.f = model.f;
  s.df = model.df;
  s.f_at_zero = model.f(0.0);
  if (s.form == SplitForm::generic) s.cache = std::make_shared<SplitCache>();
  return s;
}

double eo_flux(const SplitFlux& split, double u, double v) { return split.flux(u, v); }

double scheme_operator_H(const SplitFlux& split, double lambda, double u, double v, double w) {
  return v - lambda * (split.flux(v, w) - split.flux(u, v));
}

namespace {

// Signed indicator: +1 on ]0, s[, -1 on ]s, 0[, 0 elsewhere.
inline double chi(double s, double xi) {
  if (xi > 0.0 && xi < s) return 1.0;
  if (xi < 0.0 && xi > s) return -1.0;
  return 0.0;
}

}  // namespace

double chi_density_h(const SplitFlux& split, double lambda, double u, double v, double w,
                     double xi) {
  const double d = split.df(xi);
  const double fp = std::max(d, 0.0);
  const double fm = std::max(-d, 0.0);
  // Convex combination (1 - lambda |f'|) chi_v + lambda (f')^+ chi_u
  // + lambda (f')^- chi_w; integrating in xi reproduces H(u, v, w).
  return (1.0 - lambda * (fp + fm)) * chi(v, xi) + lambda * fp * chi(u, xi) +
         lambda * fm * chi(w, xi);
}

double entropy_flux_G(const SplitFlux& split, const EntropyPair& pair, double u, double v) {
  auto plus_integrand = [&](double xi) { return pair.eta_prime(xi) * split.dfp(xi); };
  auto minus_integrand = [&](double xi) { return pair.eta_prime(xi) * split.dfm(xi); };
  const double a = integrate_adaptive(plus_integrand, 0.0, u, pair.breakpoints);
  const double b = integrate_adaptive(minus_integrand, 0.0, v, pair.breakpoints);
  return a - b + pair.q(0.0);
}

}  // namespace wbflux
