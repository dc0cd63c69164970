#pragma once
// BCS mean-field solutions of the SU(4) pairing Hamiltonian with equally
// spaced levels, both in the continuum limit (band [0, 1/2), level density
// 2 Omega) and for a finite set of levels.
//
// Couplings are bulk couplings g (G = g / Omega); filling x = N / Omega.

#include <span>
#include <vector>

namespace pairing {

struct BcsSolution {
  double lambda = 0.0;  // chemical potential
  double delta = 0.0;   // gap parameter (0 in the normal phase)
  double energy_per_level = 0.0;     // E / Omega
  double energy_per_particle = 0.0;  // E / N
  double gap_residual = 0.0;     // (1/2Omega) sum 1/E_i - 1/g, or its integral form
  double number_residual = 0.0;  // N/Omega from the occupations minus x
  // In the normal phase the gap residual is its Delta -> 0 value when finite.
  // (1/8)(g/Omega) sum sqrt(v^2 (1 - v^2)) over all species states; equals
  // delta / 2 at a solution.
  double canonical_gap = 0.0;
  int iterations = 0;
  bool normal_phase = false;
  bool used_bisection = false;
};

// Continuum equations in closed form:
//   asinh((1/2 - lambda)/Delta) + asinh(lambda/Delta) = 1/g
//   sqrt(Delta^2 + (1/2 - lambda)^2) - sqrt(Delta^2 + lambda^2) = 1/2 - x/4
// Requires g > 0 and 0 < x < 4. Throws ConvergenceError if both residuals
// cannot be brought below 1e-12 max(1, 1/g).
BcsSolution solve_bulk(double g, double x);

// Discrete counterpart on the given levels (4 species states each):
//   (G/2) sum_i 1/E_i = 1,  N = 2 sum_i (1 - (eps_i - lambda)/E_i),
//   E = 2 sum_i eps_i (1 - (eps_i - lambda)/E_i) - 2 Delta^2 / G,
// with E_i = sqrt((eps_i - lambda)^2 + Delta^2). When no Delta > 1e-14
// solves the gap equation the normal phase is returned with lambda midway
// between the highest filled and lowest empty level.
BcsSolution solve_discrete(std::span<const double> levels, double g, int omega, int n);

// sqrt((eps_q - lambda)^2 + Delta^2) + lambda
double quasiparticle_energy(double eps_q, double lambda, double delta);

// Occupation probability of one species state, (1/2)(1 - (eps - lambda)/E).
double occupation_probability(double eps, double lambda, double delta);

// Closed forms of the band integrals over eps in [0, 1/2).
namespace bulk_integrals {
// int deps / sqrt(Delta^2 + (eps - lambda)^2)
double gap(double lambda, double delta);
// 4 int (1 - (eps - lambda)/sqrt(...)) deps
double number(double lambda, double delta);
// 4 int eps (1 - (eps - lambda)/sqrt(...)) deps
double kinetic(double lambda, double delta);
}  // namespace bulk_integrals

}  // namespace pairing
