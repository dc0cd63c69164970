#include "pairing/bcs.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "pairing/errors.hpp"

namespace pairing {

namespace {

constexpr double kBandTop = 0.5;
constexpr double kNormalThreshold = 1e-14;

// Residuals F = (gap - 1/g, number - x) and their Jacobian with respect to
// (lambda, eta = ln Delta).
struct Evaluation {
  std::array<double, 2> f{};
  std::array<std::array<double, 2>, 2> jac{};
  double max_abs() const { return std::max(std::abs(f[0]), std::abs(f[1])); }
};

class BulkEquations {
 public:
  BulkEquations(double g, double x) : inv_g_(1.0 / g), x_(x) {}

  Evaluation operator()(double lambda, double delta) const {
    const double b = kBandTop - lambda;
    const double rb = std::hypot(delta, b);
    const double rl = std::hypot(delta, lambda);
    Evaluation e;
    e.f[0] = std::asinh(b / delta) + std::asinh(lambda / delta) - inv_g_;
    e.f[1] = 4.0 * (kBandTop - rb + rl) - x_;
    e.jac[0][0] = -1.0 / rb + 1.0 / rl;
    e.jac[0][1] = -b / rb - lambda / rl;
    e.jac[1][0] = 4.0 * (b / rb + lambda / rl);
    e.jac[1][1] = 4.0 * delta * delta * (1.0 / rl - 1.0 / rb);
    return e;
  }

  double lambda_bracket_low() const { return -1.0; }
  double lambda_bracket_high() const { return 1.5; }

 private:
  double inv_g_;
  double x_;
};

class DiscreteEquations {
 public:
  DiscreteEquations(std::span<const double> levels, double g, int omega, int n)
      : levels_(levels), inv_g_(1.0 / g), x_(static_cast<double>(n) / omega), weight_(0.5 / omega) {}

  Evaluation operator()(double lambda, double delta) const {
    long double gap = 0.0L;
    long double num = 0.0L;
    long double dg_dl = 0.0L;
    long double dg_dd = 0.0L;
    long double dn_dl = 0.0L;
    long double dn_dd = 0.0L;
    const long double d = delta;
    for (double eps : levels_) {
      const long double u = eps - lambda;
      const long double e = std::sqrt(u * u + d * d);
      const long double e3 = e * e * e;
      gap += 1.0L / e;
      num += 1.0L - u / e;
      dg_dl += u / e3;
      dg_dd += -d * d / e3;
      dn_dl += d * d / e3;
      dn_dd += u * d * d / e3;
    }
    Evaluation ev;
    ev.f[0] = static_cast<double>(weight_ * gap - inv_g_);
    ev.f[1] = static_cast<double>(4.0L * weight_ * num - x_);
    ev.jac[0][0] = static_cast<double>(weight_ * dg_dl);
    ev.jac[0][1] = static_cast<double>(weight_ * dg_dd);
    ev.jac[1][0] = static_cast<double>(4.0L * weight_ * dn_dl);
    ev.jac[1][1] = static_cast<double>(4.0L * weight_ * dn_dd);
    return ev;
  }

  double lambda_bracket_low() const { return *std::min_element(levels_.begin(), levels_.end()) - 1.0; }
  double lambda_bracket_high() const { return *std::max_element(levels_.begin(), levels_.end()) + 1.0; }

 private:
  std::span<const double> levels_;
  double inv_g_;
  double x_;
  double weight_;
};

struct Root {
  double lambda = 0.0;
  double delta = 0.0;
  Evaluation eval;
  int iterations = 0;
  bool converged = false;
  bool bisection = false;
  bool normal = false;
};

template <class Equations>
Root newton(const Equations& eq, double lambda, double delta, double tolerance, int max_iterations) {
  Root r;
  double eta = std::log(delta);
  Evaluation ev = eq(lambda, delta);
  for (int it = 0; it < max_iterations; ++it) {
    if (ev.max_abs() <= tolerance) {
      r.converged = true;
      break;
    }
    const double det = ev.jac[0][0] * ev.jac[1][1] - ev.jac[0][1] * ev.jac[1][0];
    if (!std::isfinite(det) || std::abs(det) < 1e-300) break;
    const double dl = (-ev.f[0] * ev.jac[1][1] + ev.f[1] * ev.jac[0][1]) / det;
    const double de = (-ev.f[1] * ev.jac[0][0] + ev.f[0] * ev.jac[1][0]) / det;
    double t = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 40; ++halving, t *= 0.5) {
      const double l2 = lambda + t * dl;
      const double e2 = eta + t * std::clamp(de, -5.0, 5.0);
      const Evaluation trial = eq(l2, std::exp(e2));
      if (std::isfinite(trial.max_abs()) && trial.max_abs() < ev.max_abs()) {
        lambda = l2;
        eta = e2;
        ev = trial;
        improved = true;
        break;
      }
    }
    ++r.iterations;
    if (!improved) break;
    if (std::exp(eta) < 1e-3 * kNormalThreshold) break;
  }
  r.lambda = lambda;
  r.delta = std::exp(eta);
  r.eval = ev;
  r.converged = r.converged || ev.max_abs() <= tolerance;
  return r;
}

// Number equation for lambda at fixed delta (monotone increasing in lambda).
template <class Equations>
double lambda_at(const Equations& eq, double delta) {
  double lo = eq.lambda_bracket_low();
  double hi = eq.lambda_bracket_high();
  while (eq(lo, delta).f[1] > 0.0) lo -= 2.0 * (hi - lo);
  while (eq(hi, delta).f[1] < 0.0) hi += 2.0 * (hi - lo);
  for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(lo));
       ++it) {
    const double mid = 0.5 * (lo + hi);
    (eq(mid, delta).f[1] < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Nested bisection: delta outer (gap residual decreasing), lambda inner.
template <class Equations>
Root bisection(const Equations& eq, double min_delta) {
  Root r;
  r.bisection = true;
  auto gap_at = [&](double delta) { return eq(lambda_at(eq, delta), delta).f[0]; };
  double lo = std::log(min_delta);
  if (gap_at(std::exp(lo)) <= 0.0) {
    r.normal = true;
    return r;
  }
  double hi = 0.0;
  while (gap_at(std::exp(hi)) > 0.0) hi += 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (gap_at(std::exp(mid)) > 0.0 ? lo : hi) = mid;
    ++r.iterations;
  }
  r.delta = std::exp(0.5 * (lo + hi));
  r.lambda = lambda_at(eq, r.delta);
  r.eval = eq(r.lambda, r.delta);
  return r;
}

// Newton from the initial guess, nested bisection if that fails. Solutions
// with delta below `min_delta` are treated as the normal phase.
template <class Equations>
Root solve(const Equations& eq, double lambda0, double delta0, double tolerance, double min_delta) {
  Root r = newton(eq, lambda0, std::max(delta0, 1e-300), tolerance, 100);
  if (r.converged && r.delta >= min_delta) return r;
  if (r.converged && min_delta <= kNormalThreshold) {
    r.normal = true;
    return r;
  }
  Root b = bisection(eq, min_delta);
  if (b.normal) return b;
  Root polished = newton(eq, b.lambda, b.delta, tolerance, 50);
  polished.iterations += b.iterations;
  polished.bisection = true;
  if (!polished.converged) {
    std::ostringstream msg;
    msg << "BCS equations not solved: residuals " << polished.eval.f[0] << ", " << polished.eval.f[1]
        << " after " << polished.iterations << " iterations";
    throw ConvergenceError(msg.str());
  }
  polished.normal = polished.delta < kNormalThreshold;
  return polished;
}

double weak_coupling_gap(double lambda, double top, double g) {
  const double span = std::max(lambda * (top - lambda), 1e-6);
  return 2.0 * std::sqrt(span) * std::exp(-0.5 / g);
}

}  // namespace

namespace bulk_integrals {

double gap(double lambda, double delta) {
  return std::asinh((kBandTop - lambda) / delta) + std::asinh(lambda / delta);
}

double number(double lambda, double delta) {
  return 4.0 * (kBandTop - std::hypot(delta, kBandTop - lambda) + std::hypot(delta, lambda));
}

double kinetic(double lambda, double delta) {
  // eps = u + lambda with u = eps - lambda running over [a, b].
  const double a = -lambda;
  const double b = kBandTop - lambda;
  auto primitive = [&](double u) {
    const double r = std::hypot(delta, u);
    const double u2_over_r = 0.5 * u * r - 0.5 * delta * delta * (delta > 0.0 ? std::asinh(u / delta) : 0.0);
    return 0.5 * u * u + lambda * u - u2_over_r - lambda * r;
  };
  return 4.0 * (primitive(b) - primitive(a));
}

}  // namespace bulk_integrals

BcsSolution solve_bulk(double g, double x) {
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("bulk BCS needs g > 0");
  if (!(x > 0.0 && x < 4.0)) throw DomainError("bulk BCS needs a filling 0 < x < 4");

  const BulkEquations eq(g, x);
  const double lambda0 = x / 8.0;
  const double tolerance = 1e-12 * std::max(1.0, 1.0 / g);
  const Root root = solve(eq, lambda0, weak_coupling_gap(lambda0, kBandTop, g), tolerance, kNormalThreshold);

  BcsSolution s;
  s.iterations = root.iterations;
  s.used_bisection = root.bisection;
  if (root.normal) {
    s.normal_phase = true;
    s.lambda = lambda0;
    s.delta = 0.0;
    s.energy_per_level = 4.0 * lambda0 * lambda0;
    s.gap_residual = root.eval.f[0];
  } else {
    s.lambda = root.lambda;
    s.delta = root.delta;
    s.gap_residual = root.eval.f[0];
    s.number_residual = root.eval.f[1];
    s.energy_per_level = bulk_integrals::kinetic(s.lambda, s.delta) - 2.0 / g * s.delta * s.delta;
    s.canonical_gap = 0.5 * g * s.delta * bulk_integrals::gap(s.lambda, s.delta);
  }
  s.energy_per_particle = s.energy_per_level / x;
  return s;
}

BcsSolution solve_discrete(std::span<const double> levels, double g, int omega, int n) {
  if (omega < 1 || static_cast<std::size_t>(omega) != levels.size()) {
    throw DomainError("discrete BCS needs one energy per level");
  }
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("discrete BCS needs g > 0");
  if (n <= 0 || n >= 4 * omega) throw DomainError("discrete BCS needs 0 < N < 4 Omega");

  std::vector<double> sorted(levels.begin(), levels.end());
  std::sort(sorted.begin(), sorted.end());
  const auto filled = static_cast<std::size_t>(n / 4);
  const int remainder = n % 4;
  const double lambda_normal =
      remainder != 0 ? sorted[filled] : 0.5 * (sorted[filled - 1] + sorted[filled]);

  const DiscreteEquations eq(sorted, g, omega, n);
  const double width = std::max(sorted.back() - sorted.front(), 1e-12);
  const double tolerance = 1e-12 * std::max(1.0, 1.0 / g);

  // With a closed shell the Delta -> 0 limit puts lambda where the depletion
  // below balances the occupation above, sum_filled 1/u^2 = sum_empty 1/u^2.
  // The gap sum there is finite; below 1/g no paired solution exists.
  // Equations for Delta far below the level spacing are numerically
  // degenerate, so such roots are rejected as spurious.
  double lambda0 = lambda_normal;
  bool paired = true;
  double closed_shell_gap = 0.0;
  if (remainder == 0 && sorted[filled] > sorted[filled - 1]) {
    auto balance = [&](double lambda) {
      long double b = 0.0L;
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        const long double u = sorted[i] - lambda;
        b += (i < filled ? 1.0L : -1.0L) / (u * u);
      }
      return b;
    };
    double lo = sorted[filled - 1];
    double hi = sorted[filled];
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (balance(mid) > 0.0L ? lo : hi) = mid;
    }
    lambda0 = 0.5 * (lo + hi);
    long double gap_sum = 0.0L;
    for (double eps : sorted) gap_sum += 1.0L / std::abs(static_cast<long double>(eps) - lambda0);
    closed_shell_gap = static_cast<double>(gap_sum) * 0.5 / omega - 1.0 / g;
    paired = closed_shell_gap >= 0.0;
  }

  Root root;
  root.normal = !paired;
  root.eval.f = {closed_shell_gap, 0.0};
  if (paired) {
    const double spacing = width / std::max(omega - 1, 1);
    root = solve(eq, lambda0, std::max(weak_coupling_gap(lambda0 - sorted.front(), width, g), spacing),
                 tolerance, 1e-10 * width);
  }

  BcsSolution s;
  s.iterations = root.iterations;
  s.used_bisection = root.bisection;
  const double big_g = g / omega;
  if (root.normal) {
    s.normal_phase = true;
    s.lambda = lambda_normal;
    double energy = 0.0;
    for (std::size_t i = 0; i < filled; ++i) energy += 4.0 * sorted[i];
    energy += remainder * (remainder != 0 ? sorted[filled] : 0.0);
    s.energy_per_level = energy / omega;
    s.gap_residual = root.eval.f[0];
  } else {
    s.lambda = root.lambda;
    s.delta = root.delta;
    s.gap_residual = root.eval.f[0];
    s.number_residual = root.eval.f[1];
    long double kinetic = 0.0L;
    long double dispersion = 0.0L;
    for (double eps : sorted) {
      const long double u = eps - s.lambda;
      const long double e = std::sqrt(u * u + static_cast<long double>(s.delta) * s.delta);
      kinetic += 2.0L * eps * (1.0L - u / e);
      dispersion += 4.0L * std::sqrt(std::max(0.0L, 0.25L * (1.0L - u * u / (e * e))));
    }
    const double energy = static_cast<double>(kinetic) - 2.0 * s.delta * s.delta / big_g;
    s.energy_per_level = energy / omega;
    s.canonical_gap = 0.125 * big_g * static_cast<double>(dispersion);
  }
  s.energy_per_particle = s.energy_per_level * omega / n;
  return s;
}

double quasiparticle_energy(double eps_q, double lambda, double delta) {
  if (delta < 0.0) throw DomainError("quasiparticle energy needs delta >= 0");
  return std::hypot(eps_q - lambda, delta) + lambda;
}

double occupation_probability(double eps, double lambda, double delta) {
  const double u = eps - lambda;
  if (delta == 0.0) return u < 0.0 ? 1.0 : (u > 0.0 ? 0.0 : 0.5);
  return 0.5 * (1.0 - u / std::hypot(u, delta));
}

}  // namespace pairing
