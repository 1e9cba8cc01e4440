#include <doctest.h>

#include <cmath>
#include <random>

#include "wbflux/errors.hpp"
#include "wbflux/model.hpp"

using namespace wbflux;

namespace {

// D(s) = s + s^3 supplied in closed form.
FluxModel cubic_closed_model() {
  FluxModel m;
  m.name = "cubic";
  m.f = [](double u) { return u + u * u * u; };
  m.df = [](double u) { return 1.0 + 3.0 * u * u; };
  m.b = [](double) { return 1.0; };
  m.d_eval = [](double s) { return s + s * s * s; };
  m.d_prime_lower_bound = 1.0;
  return m;
}

// Same equilibrium map, but built by quadrature of f'/b.
FluxModel cubic_quadrature_model() {
  FluxModel m = cubic_closed_model();
  m.d_eval.reset();
  m.d_inverse.reset();
  m.d_cache = make_d_cache();
  return m;
}

}  // namespace

TEST_CASE("evaluate_D: Burgers-Hopf equilibrium map is the identity") {
  const FluxModel m = burgers_hopf_model();
  CHECK(evaluate_D(m, 1.7) == doctest::Approx(1.7).epsilon(1e-15));
  CHECK(evaluate_D(m, 0.0) == 0.0);
}

TEST_CASE("evaluate_D: closed-form cubic") {
  const FluxModel m = cubic_closed_model();
  CHECK(evaluate_D(m, 1.1) == doctest::Approx(2.431).epsilon(1e-12));
  CHECK(evaluate_D(m, 0.0) == 0.0);
}

TEST_CASE("evaluate_D: quadrature path matches the closed form") {
  const FluxModel mq = cubic_quadrature_model();
  const FluxModel mc = cubic_closed_model();
  for (double s : {-3.7, -1.0, -0.2, 0.0, 0.3, 1.1, 2.9}) {
    CHECK(evaluate_D(mq, s) == doctest::Approx(evaluate_D(mc, s)).epsilon(1e-11));
  }
}

TEST_CASE("invert_D: identity and cubic against a bisection oracle") {
  CHECK(invert_D(burgers_hopf_model(), -0.3) == -0.3);

  // oracle: bisect s + s^3 = 2.3 on [0, 2]
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((mid + mid * mid * mid < 2.3) ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  CHECK(oracle == doctest::Approx(1.071124).epsilon(1e-5));
  CHECK(invert_D(cubic_closed_model(), 2.3) == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(invert_D(cubic_quadrature_model(), 2.3) == doctest::Approx(oracle).epsilon(1e-10));
}

TEST_CASE("invert_D then evaluate_D roundtrips") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  for (const FluxModel& m : {cubic_closed_model(), cubic_quadrature_model()}) {
    for (int i = 0; i < 1000; ++i) {
      const double s = dist(rng);
      const double y = evaluate_D(m, s);
      CHECK(std::abs(invert_D(m, y) - s) <= 1e-10);
    }
  }
}

TEST_CASE("D is strictly increasing with the declared margin") {
  const FluxModel m = cubic_quadrature_model();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    double s1 = dist(rng), s2 = dist(rng);
    if (s1 > s2) std::swap(s1, s2);
    if (s1 == s2) continue;
    CHECK(evaluate_D(m, s2) - evaluate_D(m, s1) >=
          m.d_prime_lower_bound * (s2 - s1) - 1e-9);
  }
}

TEST_CASE("lipschitz_on closed forms and sampling") {
  CHECK(lipschitz_on(burgers_hopf_model(), 2.0) == doctest::Approx(2.0));
  CHECK(lipschitz_on(burgers_hopf_model(), 0.0) == 0.0);
  CHECK(lipschitz_on(linear_advection_model(), 7.0) == doctest::Approx(1.0));

  // sampled path (no declared extrema): sup of |1 + 3u^2| on [-c, c]
  const FluxModel m = cubic_closed_model();
  const double lip = lipschitz_on(m, 2.0);
  CHECK(lip >= 13.0);         // true sup
  CHECK(lip <= 13.0 * 1.02);  // safety factor stays modest
}

TEST_CASE("lipschitz_on is monotone in the radius") {
  const FluxModel m = cubic_closed_model();
  double prev = 0.0;
  for (double c = 0.0; c <= 4.0; c += 0.25) {
    const double cur = lipschitz_on(m, c);
    CHECK(cur >= prev - 1e-12);
    prev = cur;
  }
}

TEST_CASE("evaluate_D rejects a non-increasing equilibrium map") {
  FluxModel m;
  m.f = [](double u) { return -u; };
  m.df = [](double) { return -1.0; };
  m.b = [](double) { return 1.0; };
  m.d_cache = make_d_cache();
  CHECK_THROWS_AS(evaluate_D(m, 0.6), AssumptionViolation);
}

TEST_CASE("evaluate_D rejects a source coefficient vanishing in range") {
  FluxModel m;
  m.f = [](double u) { return 0.5 * u * u; };
  m.df = [](double u) { return u; };
  m.b = [](double u) { return u; };  // b(0) = 0: requires a closed form instead
  m.d_cache = make_d_cache();
  CHECK_THROWS_AS(evaluate_D(m, 0.7), NonIntegrableSource);
}

TEST_CASE("validate_model accepts the builtin models and flags bad derivatives") {
  validate_model(burgers_hopf_model());
  validate_model(linear_advection_model());
  validate_model(cubic_quadrature_model(), 3.0);

  FluxModel bad = burgers_hopf_model();
  bad.df = [](double) { return 1.0; };  // inconsistent with f = u^2/2
  CHECK_THROWS_AS(validate_model(bad), AssumptionViolation);
}
