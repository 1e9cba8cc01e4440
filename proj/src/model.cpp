#include "wbflux/model.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "wbflux/errors.hpp"

namespace wbflux {

namespace {
constexpr double kRootTol = 1e-12;   // absolute residual on D(s) - y
constexpr int kNewtonCap = 50;       // Newton iterations before pure bisection
constexpr double kAnchorSpacing = 0.5;
}  // namespace

// Memoized anchors k * kAnchorSpacing with cumulative integrals of f'/b from 0.
struct DCache {
  std::mutex mutex;
  std::vector<double> pos{0.0};  // D(k * h) for k = 0, 1, ...
  std::vector<double> neg{0.0};  // D(-k * h)
};

std::shared_ptr<DCache> make_d_cache() { return std::make_shared<DCache>(); }

FluxModel burgers_hopf_model() {
  FluxModel m;
  m.name = "burgers_hopf";
  m.f = [](double u) { return 0.5 * u * u; };
  m.df = [](double u) { return u; };
  m.b = [](double u) { return u; };
  m.d_eval = [](double s) { return s; };
  m.d_inverse = [](double y) { return y; };
  m.d_prime_lower_bound = 1.0;
  m.b_prime_sup = 1.0;
  m.d_identity = true;
  m.split_form = SplitForm::convex_zero_min;
  m.df_extrema = std::vector<double>{};
  return m;
}

FluxModel linear_advection_model() {
  FluxModel m;
  m.name = "linear_advection";
  m.f = [](double u) { return u; };
  m.df = [](double) { return 1.0; };
  m.b = [](double) { return 1.0; };
  m.d_eval = [](double s) { return s; };
  m.d_inverse = [](double y) { return y; };
  m.d_prime_lower_bound = 1.0;
  m.b_prime_sup = 0.0;
  m.d_identity = true;
  m.split_form = SplitForm::positive_speed;
  m.df_extrema = std::vector<double>{};
  return m;
}

namespace {

double d_integrand(const FluxModel& model, double xi) {
  const double denom = model.b(xi);
  const double num = model.df(xi);
  const double v = num / denom;
  if (!std::isfinite(v))
    throw NonIntegrableSource("evaluate_D: f'/b is unbounded at xi = " + std::to_string(xi));
  return v;
}

// The generic path integrates f'/b directly, so b must not vanish or change
// sign on the segment; models with isolated zeros of b must supply d_eval.
void check_source_coefficient(const FluxModel& model, double a, double b) {
  bool saw_negative = false, saw_positive = false;
  for (int i = 0; i <= 8; ++i) {
    const double xi = a + (b - a) * i / 8.0;
    const double v = model.b(xi);
    if (!std::isfinite(v) || v == 0.0)
      throw NonIntegrableSource("evaluate_D: b vanishes near xi = " + std::to_string(xi));
    (v < 0.0 ? saw_negative : saw_positive) = true;
  }
  if (saw_negative && saw_positive)
    throw NonIntegrableSource("evaluate_D: b changes sign on [" + std::to_string(a) + ", " +
                              std::to_string(b) + "]");
}

// D at an anchor index (signed: k >= 0 means k * h, k < 0 means -|k| * h),
// extending the cumulative table as needed.
double anchor_value(const FluxModel& model, DCache& cache, long k) {
  auto integrand = [&model](double xi) { return d_integrand(model, xi); };
  std::vector<double>& cum = (k >= 0) ? cache.pos : cache.neg;
  const double dir = (k >= 0) ? 1.0 : -1.0;
  const size_t idx = static_cast<size_t>(std::labs(k));
  while (cum.size() <= idx) {
    const size_t i = cum.size();
    const double a = dir * kAnchorSpacing * static_cast<double>(i - 1);
    const double b = dir * kAnchorSpacing * static_cast<double>(i);
    check_source_coefficient(model, a, b);
    const double inc = integrate_adaptive(integrand, a, b);
    const double dprime = inc / (b - a);  // mean slope over the segment
    if (dprime <= 0.0)
      throw AssumptionViolation("evaluate_D: sampled D' <= 0 near " + std::to_string(b));
    cum.push_back(cum.back() + inc);
  }
  return cum[idx];
}

double evaluate_D_quadrature(const FluxModel& model, double s) {
  if (!model.d_cache)
    throw AssumptionViolation("evaluate_D: model has no closed form and no quadrature cache");
  DCache& cache = *model.d_cache;
  std::lock_guard<std::mutex> lock(cache.mutex);
  const long k = static_cast<long>(std::trunc(s / kAnchorSpacing));
  const double base = anchor_value(model, cache, k);
  const double a = kAnchorSpacing * static_cast<double>(k);
  check_source_coefficient(model, a, s);
  auto integrand = [&model](double xi) { return d_integrand(model, xi); };
  return base + integrate_adaptive(integrand, a, s);
}

}  // namespace

double evaluate_D(const FluxModel& model, double s) {
  if (model.d_identity) return s;
  if (model.d_eval) return (*model.d_eval)(s);
  if (s == 0.0) return 0.0;
  return evaluate_D_quadrature(model, s);
}

double invert_D(const FluxModel& model, double y) {
  if (model.d_identity) return y;
  if (model.d_inverse) return (*model.d_inverse)(y);

  const double m = model.d_prime_lower_bound;
  if (!(m > 0.0)) throw AssumptionViolation("invert_D: d_prime_lower_bound must be > 0");

  // |D(s)| >= m |s| gives the global bracket.
  double lo = -std::abs(y) / m - 1.0;
  double hi = std::abs(y) / m + 1.0;
  auto residual = [&](double s) { return evaluate_D(model, s) - y; };

  double flo = residual(lo);
  double fhi = residual(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw AssumptionViolation("invert_D: bracket does not enclose a root; D not onto?");

  double s = std::clamp(y / m, lo, hi);  // first guess from the growth bound
  double fs = residual(s);
  for (int it = 0; it < kNewtonCap; ++it) {
    if (std::abs(fs) <= kRootTol) return s;
    if (fs > 0.0) hi = s; else lo = s;
    const double slope = model.df(s) / model.b(s);
    double next = (std::isfinite(slope) && slope > 0.0) ? s - fs / slope
                                                        : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    s = next;
    fs = residual(s);
  }
  // Newton stalled; finish with bisection on the maintained bracket.
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fs) <= kRootTol) return s;
    if (fs > 0.0) hi = s; else lo = s;
    s = 0.5 * (lo + hi);
    fs = residual(s);
  }
  throw ConvergenceFailure("invert_D: residual " + std::to_string(fs) +
                           " after iteration cap (tolerance " + std::to_string(kRootTol) + ")");
}

double lipschitz_on(const FluxModel& model, double c) {
  if (c < 0.0) throw AssumptionViolation("lipschitz_on: negative radius");
  if (model.df_extrema) {
    double sup = std::max(std::abs(model.df(-c)), std::abs(model.df(c)));
    for (double x : *model.df_extrema)
      if (x >= -c && x <= c) sup = std::max(sup, std::abs(model.df(x)));
    return sup;
  }
  if (c == 0.0) return std::abs(model.df(0.0));
  // Dense sampling with a documented 1.01 safety factor.
  return 1.01 * sampled_sup(model.df, -c, c, 1 << 12);
}

void validate_model(const FluxModel& model, double range) {
  // f consistent with df: central differences at sampled points.
  for (int i = 0; i <= 32; ++i) {
    const double u = -range + 2.0 * range * i / 32.0;
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    const double fd = (model.f(u + h) - model.f(u - h)) / (2.0 * h);
    const double scale = std::max({1.0, std::abs(fd), std::abs(model.df(u))});
    if (std::abs(fd - model.df(u)) > 1e-4 * scale)
      throw AssumptionViolation("model: f and df disagree near u = " + std::to_string(u));
  }
  if (!(model.d_prime_lower_bound > 0.0))
    throw AssumptionViolation("model: d_prime_lower_bound must be positive");
  // D strictly increasing on samples.
  double prev = evaluate_D(model, -range);
  for (int i = 1; i <= 64; ++i) {
    const double s = -range + 2.0 * range * i / 64.0;
    const double cur = evaluate_D(model, s);
    if (!(cur > prev))
      throw AssumptionViolation("model: D not strictly increasing near s = " + std::to_string(s));
    prev = cur;
  }
  // Inverse roundtrip for the numerically constructed D.
  if (!model.d_identity && !model.d_inverse) {
    for (int i = 0; i <= 16; ++i) {
      const double s = -range + 2.0 * range * i / 16.0;
      const double y = evaluate_D(model, s);
      if (std::abs(evaluate_D(model, invert_D(model, y)) - y) > kRootTol * 10.0)
        throw AssumptionViolation("model: D inverse roundtrip failed at s = " + std::to_string(s));
    }
  }
}

Topography Topography::from_cell_values(std::vector<double> values, double sup_slope) {
  Topography t;
  t.cell_values = std::move(values);
  t.sup_slope = sup_slope;
  // source_slopes stays empty; the standard scheme falls back to centered
  // differences of the cell values when no profile function is available.
  return t;
}

double Problem::data_sup() const {
  double m = sampled_sup(initial, x_l, x_r);
  m = std::max(m, sampled_sup(left_bc, 0.0, horizon));
  m = std::max(m, sampled_sup(right_bc, 0.0, horizon));
  if (!std::isfinite(m)) throw AssumptionViolation("problem: unbounded data");
  return m;
}

void Problem::validate() const {
  if (!(x_l < x_r)) throw ConfigError("problem: requires x_l < x_r");
  if (!(horizon > 0.0)) throw ConfigError("problem: requires T > 0");
  (void)data_sup();  // throws on non-finite samples
}

}  // namespace wbflux
