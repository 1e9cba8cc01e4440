#include "wbflux/entropy.hpp"

#include <cmath>

#include "wbflux/errors.hpp"
#include "wbflux/flux.hpp"
#include "wbflux/scheme.hpp"

namespace wbflux {

EntropyPair smooth_quadratic_pair(const FluxModel& model, double w) {
  EntropyPair p;
  p.kind = EntropyPair::Kind::smooth;
  p.anchor = w;
  p.k = w;
  p.eta = [w](double s) { return 0.5 * (s - w) * (s - w); };
  p.eta_prime = [w](double s) { return s - w; };
  const RealFn df = model.df;
  p.q = [w, df](double s) {
    return integrate_adaptive([w, &df](double xi) { return (xi - w) * df(xi); }, w, s);
  };
  return p;
}

EntropyPair semi_kruzkov_pair(const FluxModel& model, double k, PairSign sign) {
  EntropyPair p;
  p.kind = EntropyPair::Kind::semi_kruzkov;
  p.sign = sign;
  p.anchor = k;
  p.k = k;
  p.breakpoints = {k};
  const RealFn f = model.f;
  const double fk = model.f(k);
  if (sign == PairSign::plus) {
    p.eta = [k](double s) { return std::max(s - k, 0.0); };
    p.eta_prime = [k](double s) { return s > k ? 1.0 : 0.0; };  // sign^+(0) = 0
    p.q = [k, f, fk](double s) { return s > k ? f(s) - fk : 0.0; };
  } else {
    p.eta = [k](double s) { return std::max(k - s, 0.0); };
    p.eta_prime = [k](double s) { return s < k ? -1.0 : 0.0; };  // sign^-(0) = 0
    p.q = [k, f, fk](double s) { return s < k ? -(f(s) - fk) : 0.0; };
  }
  return p;
}

namespace {

// Quartic knee p(y) = -(1/2 d^3) y^4 + (1/d^2) y^3 on [0, d]; C^2 against the
// zero branch at 0 and the linear branch y - d/2 at d.
inline double knee(double y, double d) {
  const double y3 = y * y * y;
  return -0.5 * y3 * y / (d * d * d) + y3 / (d * d);
}
inline double knee_prime(double y, double d) {
  const double y2 = y * y;
  return -2.0 * y2 * y / (d * d * d) + 3.0 * y2 / (d * d);
}

}  // namespace

EntropyPair smoothed_boundary_pair(const FluxModel& model, double k, double delta,
                                   PairSign sign) {
  if (!(delta > 0.0)) throw ConfigError("smoothed_boundary_pair: delta must be > 0");
  EntropyPair p;
  p.kind = EntropyPair::Kind::smoothed;
  p.sign = sign;
  p.anchor = k;
  p.k = k;
  p.delta = delta;
  const double d = delta;
  if (sign == PairSign::plus) {
    p.breakpoints = {k, k + d};
    p.eta = [k, d](double x) {
      if (x <= k) return 0.0;
      if (x <= k + d) return knee(x - k, d);
      return (x - k) - 0.5 * d;
    };
    p.eta_prime = [k, d](double x) {
      if (x <= k) return 0.0;
      if (x <= k + d) return knee_prime(x - k, d);
      return 1.0;
    };
  } else {
    p.breakpoints = {k - d, k};
    p.eta = [k, d](double x) {
      if (x >= k) return 0.0;
      if (x >= k - d) return knee(k - x, d);
      return (k - x) - 0.5 * d;
    };
    p.eta_prime = [k, d](double x) {
      if (x >= k) return 0.0;
      if (x >= k - d) return -knee_prime(k - x, d);
      return -1.0;
    };
  }
  // q(x) = int_k^x eta' f', anchored so q(k) = 0.
  const RealFn eta_prime = p.eta_prime;
  const RealFn df = model.df;
  const std::vector<double> breaks = p.breakpoints;
  p.q = [k, eta_prime, df, breaks](double x) {
    return integrate_adaptive([&](double xi) { return eta_prime(xi) * df(xi); }, k, x, breaks);
  };
  return p;
}

double kruzkov_flux_F(const FluxModel& model, double a, double b) {
  const double s = (a > b) ? 1.0 : (a < b ? -1.0 : 0.0);
  return s * (model.f(a) - model.f(b));
}

double cell_entropy_residual(const SplitFlux& split, const EntropyPair& pair, double lambda,
                             double u, double v, double w) {
  const double h = scheme_operator_H(split, lambda, u, v, w);
  return pair.eta(h) - pair.eta(v) +
         lambda * (entropy_flux_G(split, pair, v, w) - entropy_flux_G(split, pair, u, v));
}

SpaceTimeTestFunction bump_test_function(double x0, double rx, double t0, double rt) {
  auto psi = [](double s) {
    const double a = 1.0 - s * s;
    return (std::abs(s) < 1.0) ? a * a * a : 0.0;
  };
  auto dpsi = [](double s) {
    const double a = 1.0 - s * s;
    return (std::abs(s) < 1.0) ? -6.0 * s * a * a : 0.0;
  };
  SpaceTimeTestFunction phi;
  phi.value = [=](double x, double t) { return psi((x - x0) / rx) * psi((t - t0) / rt); };
  phi.dt = [=](double x, double t) {
    return psi((x - x0) / rx) * dpsi((t - t0) / rt) / rt;
  };
  phi.dx = [=](double x, double t) {
    return dpsi((x - x0) / rx) / rx * psi((t - t0) / rt);
  };
  return phi;
}

double weak_entropy_residual(const RunResult& run, const EntropyPair& pair,
                             const SpaceTimeTestFunction& phi) {
  if (!run.has_history || run.history.size() < 1)
    throw HistoryUnavailable("weak_entropy_residual: run did not retain history");
  if (!pair.anchor)
    throw ConfigError("weak_entropy_residual: requires an anchored entropy pair");

  const Problem& prob = run.problem;
  const Discretization& disc = run.disc;
  const Topography& topo = run.topo;
  const long n = disc.n_cells;
  const double dx = disc.dx;

  // Lip over everything the functional sees.
  double c = std::max(run.max_abs_seen, std::abs(*pair.anchor));
  c = std::max(c, prob.data_sup());
  const double lip = lipschitz_on(prob.model, c);

  double acc = 0.0;

  // Interior terms: midpoint in cell, left endpoint in time, over every step.
  const size_t n_steps = run.history.size() - 1;
  for (size_t step = 0; step < n_steps; ++step) {
    const SolverState& s = run.history[step];
    const double dt = run.history[step + 1].time - s.time;
    const double t = s.time;
    double row = 0.0;
    for (long j = 0; j < n; ++j) {
      const double x = disc.center(j);
      const double uj = s.interior[static_cast<size_t>(j)];
      const double zp = topo.source_slopes.empty()
                            ? (topo.value(j + 1) - topo.value(j - 1)) / (2.0 * dx)
                            : topo.source_slopes[static_cast<size_t>(j)];
      row += pair.eta(uj) * phi.dt(x, t) + pair.q(uj) * phi.dx(x, t) -
             pair.eta_prime(uj) * prob.model.b(uj) * zp * phi.value(x, t);
    }
    acc += row * dx * dt;

    // Boundary terms Lip * int eta(u_r) phi(x_{j_r}, .) + eta(u_l) phi(x_{j_l}, .).
    const double xl = disc.center(disc.j_l);
    const double xr = disc.center(disc.j_r);
    acc += lip * gauss5(
                     [&](double tau) {
                       return pair.eta(prob.right_bc(tau)) * phi.value(xr, tau) +
                              pair.eta(prob.left_bc(tau)) * phi.value(xl, tau);
                     },
                     t, t + dt);
  }

  // Initial term int eta(u_0) phi(., 0).
  for (long j = 0; j < n; ++j) {
    acc += gauss5_split(
        [&](double x) { return pair.eta(prob.initial(x)) * phi.value(x, 0.0); },
        disc.left_face(j), disc.right_face(j), prob.initial_breakpoints);
  }
  return acc;
}

double equilibrium_drift(const SolverState& state, const SolverState& reference, double dx) {
  if (state.interior.size() != reference.interior.size())
    throw IncompatibleGrids("equilibrium_drift: states live on different grids");
  double acc = 0.0;
  for (size_t j = 0; j < state.interior.size(); ++j)
    acc += std::abs(state.interior[j] - reference.interior[j]);
  return dx * acc;
}

}  // namespace wbflux
