#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wbflux/entropy.hpp"
#include "wbflux/flux.hpp"

using namespace wbflux;

namespace {

// Burgers flux routed through the generic quadrature table instead of the
// closed form.
FluxModel burgers_generic() {
  FluxModel m = burgers_hopf_model();
  m.name = "burgers_generic";
  m.split_form = SplitForm::generic;
  return m;
}

FluxModel sine_flux_model() {
  FluxModel m;
  m.name = "sine";
  m.f = [](double u) { return std::sin(u); };
  m.df = [](double u) { return std::cos(u); };
  m.b = [](double) { return 1.0; };
  m.b_prime_sup = 0.0;
  return m;
}

// Trapezoid quadrature of g over [a, b] with n panels.
template <class G>
double trapezoid(const G& g, double a, double b, int n) {
  double acc = 0.5 * (g(a) + g(b));
  for (int i = 1; i < n; ++i) acc += g(a + (b - a) * i / n);
  return acc * (b - a) / n;
}

// Trapezoid split at the indicator jumps of h (at 0, u, v, w), n nodes total;
// each smooth piece is integrated with interior evaluation points only so the
// jumps never land on a node.
template <class G>
double trapezoid_split(const G& g, double a, double b, std::vector<double> breaks, int n) {
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double acc = 0.0;
  for (size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(breaks[i], a);
    const double hi = std::min(breaks[i + 1], b);
    if (hi <= lo) continue;
    const int panels = std::max(2, static_cast<int>(n * (hi - lo) / (b - a)));
    const double eps = (hi - lo) * 1e-9;
    acc += trapezoid(g, lo + eps, hi - eps, panels);
  }
  return acc;
}

}  // namespace

TEST_CASE("eo_flux closed forms for Burgers") {
  const SplitFlux split = make_split_flux(burgers_hopf_model());
  CHECK(eo_flux(split, 0.0, 0.0) == 0.0);
  CHECK(eo_flux(split, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(eo_flux(split, 1.0, -1.0) == doctest::Approx(1.0));
}

TEST_CASE("eo_flux is consistent: g(u, u) = f(u)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-4.0, 4.0);
  for (const FluxModel& m :
       {burgers_hopf_model(), linear_advection_model(), burgers_generic()}) {
    const SplitFlux split = make_split_flux(m);
    for (int i = 0; i < 1000; ++i) {
      const double u = dist(rng);
      CHECK(eo_flux(split, u, u) == doctest::Approx(m.f(u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("generic split table matches the Burgers closed form") {
  const SplitFlux generic = make_split_flux(burgers_generic());
  const SplitFlux closed = make_split_flux(burgers_hopf_model());
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (int i = 0; i < 300; ++i) {
    const double u = dist(rng), v = dist(rng);
    CHECK(eo_flux(generic, u, v) == doctest::Approx(eo_flux(closed, u, v)).epsilon(1e-10));
  }
}

TEST_CASE("split integrals: monotonicity and reconstruction for a sign-changing f'") {
  const SplitFlux split = make_split_flux(sine_flux_model());
  double prev_plus = split.fplus_int(-6.0);
  double prev_minus_neg = -split.fminus_int(-6.0);
  for (double u = -5.9; u <= 6.0; u += 0.1) {
    const double fp = split.fplus_int(u);
    CHECK(fp >= prev_plus - 1e-12);  // nondecreasing
    prev_plus = fp;
    const double fm = -split.fminus_int(u);
    CHECK(fm <= prev_minus_neg + 1e-12);  // -fminus_int nonincreasing
    prev_minus_neg = fm;
    CHECK(split.fplus_int(u) - split.fminus_int(u) + split.f_at_zero ==
          doctest::Approx(std::sin(u)).epsilon(1e-9));
  }
}

TEST_CASE("eo_flux is a monotone flux") {
  for (const FluxModel& m : {burgers_hopf_model(), sine_flux_model()}) {
    const SplitFlux split = make_split_flux(m);
    const double h = 1e-3;
    for (double u = -3.0; u <= 3.0; u += 0.37) {
      for (double v = -3.0; v <= 3.0; v += 0.41) {
        CHECK(eo_flux(split, u + h, v) >= eo_flux(split, u, v) - 1e-12);
        CHECK(eo_flux(split, u, v + h) <= eo_flux(split, u, v) + 1e-12);
      }
    }
  }
}

TEST_CASE("scheme operator H: fixed point and hand value") {
  const SplitFlux split = make_split_flux(burgers_hopf_model());
  CHECK(scheme_operator_H(split, 0.1, 1.0, 1.0, 1.0) == doctest::Approx(1.0));
  CHECK(scheme_operator_H(split, 0.1, 0.0, 1.0, 2.0) == doctest::Approx(0.95));
}

TEST_CASE("scheme operator H obeys the convex-hull bound under CFL") {
  const FluxModel model = burgers_hopf_model();
  const SplitFlux split = make_split_flux(model);
  std::mt19937_64 rng(17);
  const double c = 2.5;
  std::uniform_real_distribution<double> dist(-c, c);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lip = lipschitz_on(model, c);
  for (int i = 0; i < 10000; ++i) {
    const double u = dist(rng), v = dist(rng), w = dist(rng);
    const double lambda = unit(rng) / lip;
    const double hval = scheme_operator_H(split, lambda, u, v, w);
    CHECK(std::abs(hval) <=
          std::max({std::abs(u), std::abs(v), std::abs(w)}) + 1e-12);
  }
}

TEST_CASE("chi density h: support, bounds, and quadrature oracle") {
  const FluxModel model = burgers_hopf_model();
  const SplitFlux split = make_split_flux(model);
  std::mt19937_64 rng(23);
  const double c = 2.0;
  std::uniform_real_distribution<double> dist(-c, c);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lip = lipschitz_on(model, c);

  // vanishes outside the hull of {u, v, w, 0}
  CHECK(chi_density_h(split, 0.3, 1.0, 0.5, -0.5, 1.5) == 0.0);
  CHECK(chi_density_h(split, 0.3, 1.0, 0.5, -0.5, -1.5) == 0.0);

  for (int i = 0; i < 100; ++i) {
    const double u = dist(rng), v = dist(rng), w = dist(rng);
    const double lambda = unit(rng) / lip;
    // integral over xi reproduces H (trapezoid, 1e4 nodes, split at the jumps)
    const double integral = trapezoid_split(
        [&](double xi) { return chi_density_h(split, lambda, u, v, w, xi); },
        -c - 0.5, c + 0.5, {0.0, u, v, w}, 10000);
    CHECK(integral ==
          doctest::Approx(scheme_operator_H(split, lambda, u, v, w)).epsilon(1e-6));
    // pointwise convex-combination bounds
    for (int k = 0; k < 64; ++k) {
      const double xi = dist(rng);
      const double sgn = (xi > 0.0) ? 1.0 : (xi < 0.0 ? -1.0 : 0.0);
      const double val = sgn * chi_density_h(split, lambda, u, v, w, xi);
      CHECK(val >= -1e-12);
      CHECK(val <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("entropy flux G: hand values and consistency") {
  const FluxModel model = burgers_hopf_model();
  const SplitFlux split = make_split_flux(model);
  const EntropyPair pair = smooth_quadratic_pair(model, 0.0);  // eta = s^2/2, q = s^3/3
  CHECK(pair.q(1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(entropy_flux_G(split, pair, 1.0, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(entropy_flux_G(split, pair, 1.0, 1.0) == doctest::Approx(pair.q(1.0)).epsilon(1e-10));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double u = dist(rng), k = dist(rng), d = 0.01 + 0.3 * std::abs(dist(rng));
    for (const EntropyPair& p :
         {smooth_quadratic_pair(model, k),
          smoothed_boundary_pair(model, k, d, PairSign::plus),
          smoothed_boundary_pair(model, k, d, PairSign::minus)}) {
      CHECK(entropy_flux_G(split, p, u, u) == doctest::Approx(p.q(u)).epsilon(1e-10));
    }
  }
}

TEST_CASE("entropy flux G: anchored representation and boundary inequality") {
  const FluxModel model = burgers_hopf_model();
  const SplitFlux split = make_split_flux(model);
  std::mt19937_64 rng(29);
  const double c = 2.0;
  std::uniform_real_distribution<double> dist(-c, c);
  const double lip = lipschitz_on(model, c);
  for (int i = 0; i < 1000; ++i) {
    const double u = dist(rng), v = dist(rng), k = dist(rng);
    const double d = 0.01 + 0.2 * std::abs(dist(rng)) / c;
    const EntropyPair pair = smoothed_boundary_pair(model, k, d, (i % 2) ? PairSign::plus
                                                                         : PairSign::minus);
    const double g = entropy_flux_G(split, pair, u, v);
    // shifted representation: G(u,v) = int_w^u eta'(f')^+ - int_w^v eta'(f')^-
    // (split at the pair knots and at the kink of (f')^+- at 0)
    std::vector<double> breaks = pair.breakpoints;
    breaks.push_back(0.0);
    const double rep =
        integrate_adaptive([&](double xi) { return pair.eta_prime(xi) * split.dfp(xi); }, k, u,
                           breaks) -
        integrate_adaptive([&](double xi) { return pair.eta_prime(xi) * split.dfm(xi); }, k, v,
                           breaks);
    CHECK(g == doctest::Approx(rep).epsilon(1e-9));
    CHECK(g <= lip * pair.eta(u) + 1e-10);
    CHECK(g >= -lip * pair.eta(v) - 1e-10);
  }
}

TEST_CASE("Brenier inequality holds for the chi density") {
  const FluxModel model = burgers_hopf_model();
  const SplitFlux split = make_split_flux(model);
  std::mt19937_64 rng(31);
  const double c = 2.0;
  std::uniform_real_distribution<double> dist(-c, c);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lip = lipschitz_on(model, c);
  for (int i = 0; i < 50; ++i) {
    const double u = dist(rng), v = dist(rng), w = dist(rng), k = dist(rng);
    const double lambda = unit(rng) / lip;
    const EntropyPair pair = smooth_quadratic_pair(model, k);
    auto h = [&](double xi) { return chi_density_h(split, lambda, u, v, w, xi); };
    const std::vector<double> jumps = {0.0, u, v, w};
    const double integral = trapezoid_split(h, -c - 0.5, c + 0.5, jumps, 20000);
    const double rhs = trapezoid_split(
        [&](double xi) { return pair.eta_prime(xi) * h(xi); }, -c - 0.5, c + 0.5, jumps, 20000);
    CHECK(pair.eta(integral) - pair.eta(0.0) <= rhs + 1e-8);
  }
}

TEST_CASE("cell entropy inequality holds under CFL") {
  const FluxModel model = burgers_hopf_model();
  const SplitFlux split = make_split_flux(model);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double c = 0.5 + 2.0 * unit(rng);
    std::uniform_real_distribution<double> dist(-c, c);
    const double u = dist(rng), v = dist(rng), w = dist(rng), k = dist(rng);
    const double lambda = unit(rng) / lipschitz_on(model, c);
    const EntropyPair pair =
        (i % 2) ? smooth_quadratic_pair(model, k)
                : smoothed_boundary_pair(model, k, 1e-3 + 0.3 * unit(rng),
                                         (i % 4 == 0) ? PairSign::plus : PairSign::minus);
    CHECK(cell_entropy_residual(split, pair, lambda, u, v, w) <= 1e-10);
  }
}
