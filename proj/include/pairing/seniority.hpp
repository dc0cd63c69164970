#pragma once
// Closed-form spectra of the degenerate-level pairing Hamiltonians.
//
// All energies use the raw pair strength G unless the argument is named g
// (bulk coupling, G = g / Omega). Arguments outside the allowed quantum-number
// ranges raise DomainError.

#include <optional>
#include <string_view>

namespace pairing {

enum class SeniorityModel { kIdentical, kIsovector, kSu4 };

std::string_view seniority_model_name(SeniorityModel m) noexcept;
std::optional<SeniorityModel> parse_seniority_model(std::string_view name) noexcept;

// Like-particle seniority energy; n counts particles of one kind (n <= 2 Omega).
//   E = -(G/4) (n - v)(2 Omega - n - v + 2)
double energy_identical(double G, int omega, int n, int v);

// Ground-state energy per particle in terms of g and the filling f = n / 2 Omega.
double energy_per_particle_identical(double g, double f, int omega);

// BCS counterpart of energy_identical at v = 0.
double energy_bcs_seniority(double G, int omega, int n);

// Isovector (SO(5)) pairing:
//   E = -(G/8)(n - v)(4 Omega - n - v + 6) + (G/2)[T(T+1) - t(t+1)]
// where T is the total isospin and t the isospin of the v unpaired
// particles (reduced isospin). Fully paired states have t = 0.
double energy_isovector(double G, int omega, int n, int v, double T, double reduced_t = 0.0);

// Per-particle isovector ground energy, f = n / 4 Omega.
double energy_per_particle_isovector(double g, double f, int omega);

// SU(4)-symmetric pairing, v = 0 branch:
//   E = -(G/8) n (4 Omega - n + 12) + (G/2) lambda2 (lambda2 + 4).
// v = 1 gives the lowest odd-n state, -(G/8)(n - 1)(4 Omega - n + 11), and
// requires lambda2 = 0.
double energy_su4(double G, int omega, int n, int lambda2, int v = 0);

// Per-particle SU(4) ground energy at lambda2 = 0, f = n / 4 Omega.
double energy_per_particle_su4(double g, double f, int omega);

// Ground-state energy with the lowest quantum numbers for n. For the
// identical model n counts one kind of particle.
double seniority_ground_energy(SeniorityModel model, double G, int omega, int n);

struct QuasiparticleEnergies {
  // Finite-size values built from the closed forms.
  std::optional<double> e_2q;  // v = 2 minus v = 0 at fixed other labels; none for su4
  double e_q_even = 0.0;       // E(n + 1) - E(n)
  double e_q_odd = 0.0;        // E(n + 2) - E(n + 1)
  double delta_oe = 0.0;       // (2 E(n + 1) - E(n) - E(n + 2)) / 2

  // Omega -> infinity at fixed filling f: g, g f, -g (1 - f), g / 2.
  // At half filling the two addition energies are +g/2 and -g/2.
  struct {
    double e_2q = 0.0;
    double e_q_even = 0.0;
    double e_q_odd = 0.0;
    double delta_oe = 0.0;
  } bulk;
};

// n must be even; g is the bulk coupling.
QuasiparticleEnergies quasiparticle_energies_seniority(double g, int omega, int n, SeniorityModel model);

}  // namespace pairing
