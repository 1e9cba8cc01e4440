#include "wbflux/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "wbflux/errors.hpp"

namespace wbflux {

namespace {

constexpr double kGauss5Node[5] = {
    -0.9061798459386639928, -0.5384693101056830910, 0.0,
    0.5384693101056830910, 0.9061798459386639928};
constexpr double kGauss5Weight[5] = {
    0.2369268850561890875, 0.4786286704993664680, 0.5688888888888888889,
    0.4786286704993664680, 0.2369268850561890875};

// Interior breakpoints of [a, b], sorted, deduplicated.
std::vector<double> interior_breaks(double a, double b, std::span<const double> breaks) {
  std::vector<double> pts;
  for (double p : breaks)
    if (p > a && p < b) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

double gauss5(const RealFn& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += kGauss5Weight[i] * f(mid + half * kGauss5Node[i]);
  return half * sum;
}

double gauss5_split(const RealFn& f, double a, double b, std::span<const double> breaks) {
  if (a == b) return 0.0;
  const auto pts = interior_breaks(a, b, breaks);
  double sum = 0.0;
  double lo = a;
  for (double p : pts) {
    sum += gauss5(f, lo, p);
    lo = p;
  }
  sum += gauss5(f, lo, b);
  return sum;
}

double interval_average(const RealFn& f, double a, double b, std::span<const double> breaks) {
  if (a == b) {
    const double v = f(a);
    if (!std::isfinite(v)) throw QuadratureFailure("interval_average: non-finite data value");
    return v;
  }
  const double integral = gauss5_split(f, a, b, breaks);
  if (!std::isfinite(integral))
    throw QuadratureFailure("interval_average: non-finite quadrature result");
  return integral / (b - a);
}

double integrate_adaptive(const RealFn& f, double a, double b, std::span<const double> breaks) {
  if (a == b) return 0.0;
  const double sign = (a < b) ? 1.0 : -1.0;
  const double lo0 = std::min(a, b), hi0 = std::max(a, b);
  const auto pts = interior_breaks(lo0, hi0, breaks);

  auto piece = [&f](double lo, double hi) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, lo, hi, 15, 1e-12, &err);
    if (!std::isfinite(v)) throw QuadratureFailure("integrate_adaptive: non-finite integrand");
    return v;
  };

  double sum = 0.0;
  double lo = lo0;
  for (double p : pts) {
    sum += piece(lo, p);
    lo = p;
  }
  sum += piece(lo, hi0);
  return sign * sum;
}

double bisect(const RealFn& f, double lo, double hi, double xtol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (std::signbit(flo) == std::signbit(fhi))
    throw ConvergenceFailure("bisect: no sign change in bracket");
  for (int i = 0; i < max_iter && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double sampled_sup(const RealFn& f, double a, double b, int n) {
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / n;
    sup = std::max(sup, std::abs(f(x)));
  }
  return sup;
}

}  // namespace wbflux
