#include "pairing/seniority.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairing/errors.hpp"

namespace pairing {

namespace {

[[noreturn]] void fail(const std::string& what) { throw DomainError(what); }

bool is_half_integer_multiple(double x) { return std::abs(2.0 * x - std::round(2.0 * x)) < 1e-12; }

int twice(double x) { return static_cast<int>(std::lround(2.0 * x)); }

void check_seniority(int n, int v, int capacity, const char* model) {
  std::ostringstream msg;
  if (n < 0 || n > capacity) {
    msg << model << ": particle number " << n << " outside [0, " << capacity << "]";
    fail(msg.str());
  }
  if (v < 0 || v > std::min(n, capacity - n) || (n - v) % 2 != 0) {
    msg << model << ": seniority " << v << " not allowed for n=" << n << " (capacity " << capacity << ")";
    fail(msg.str());
  }
}

}  // namespace

std::string_view seniority_model_name(SeniorityModel m) noexcept {
  switch (m) {
    case SeniorityModel::kIdentical: return "identical";
    case SeniorityModel::kIsovector: return "isovector";
    case SeniorityModel::kSu4: return "su4";
  }
  return "?";
}

std::optional<SeniorityModel> parse_seniority_model(std::string_view name) noexcept {
  if (name == "identical") return SeniorityModel::kIdentical;
  if (name == "isovector") return SeniorityModel::kIsovector;
  if (name == "su4") return SeniorityModel::kSu4;
  return std::nullopt;
}

double energy_identical(double G, int omega, int n, int v) {
  if (omega < 1) fail("omega must be positive");
  check_seniority(n, v, 2 * omega, "identical");
  return -0.25 * G * (n - v) * (2.0 * omega - n - v + 2.0);
}

double energy_per_particle_identical(double g, double f, int omega) {
  if (omega < 1) fail("omega must be positive");
  if (!(f > 0.0 && f <= 1.0)) fail("filling must lie in (0, 1]");
  return -0.5 * g * (1.0 - f + 1.0 / omega);
}

double energy_bcs_seniority(double G, int omega, int n) {
  if (omega < 1) fail("omega must be positive");
  if (n < 0 || n > 2 * omega) fail("BCS seniority energy needs 0 <= n <= 2 Omega");
  return -0.25 * G * n * (2.0 * omega - n + static_cast<double>(n) / omega);
}

double energy_isovector(double G, int omega, int n, int v, double T, double reduced_t) {
  if (omega < 1) fail("omega must be positive");
  check_seniority(n, v, 4 * omega, "isovector");
  if (T < 0.0 || !is_half_integer_multiple(T) || twice(T) % 2 != n % 2 || twice(T) > std::min(n, 4 * omega - n)) {
    std::ostringstream msg;
    msg << "isovector: isospin T=" << T << " not allowed for n=" << n;
    fail(msg.str());
  }
  if (reduced_t < 0.0 || !is_half_integer_multiple(reduced_t) || twice(reduced_t) % 2 != v % 2 ||
      twice(reduced_t) > v) {
    std::ostringstream msg;
    msg << "isovector: reduced isospin t=" << reduced_t << " not allowed for v=" << v;
    fail(msg.str());
  }
  return -0.125 * G * (n - v) * (4.0 * omega - n - v + 6.0) +
         0.5 * G * (T * (T + 1.0) - reduced_t * (reduced_t + 1.0));
}

double energy_per_particle_isovector(double g, double f, int omega) {
  if (omega < 1) fail("omega must be positive");
  if (!(f > 0.0 && f <= 1.0)) fail("filling must lie in (0, 1]");
  return -0.5 * g * (1.0 - f + 1.5 / omega);
}

double energy_su4(double G, int omega, int n, int lambda2, int v) {
  if (omega < 1) fail("omega must be positive");
  if (n < 0 || n > 4 * omega) fail("su4: particle number outside [0, 4 Omega]");
  if (v != 0 && v != 1) fail("su4: closed form available for seniority 0 and 1 only");
  if ((n - v) % 2 != 0) fail("su4: n - v must be even");
  if (lambda2 < 0) fail("su4: lambda2 must be non-negative");
  if (v == 1 && lambda2 != 0) fail("su4: v = 1 closed form only for the lowest (lambda2 = 0) state");
  return -0.125 * G * (n - v) * (4.0 * omega - n - v + 12.0) + 0.5 * G * lambda2 * (lambda2 + 4.0);
}

double energy_per_particle_su4(double g, double f, int omega) {
  if (omega < 1) fail("omega must be positive");
  if (!(f > 0.0 && f <= 1.0)) fail("filling must lie in (0, 1]");
  return -0.5 * g * (1.0 - f + 3.0 / omega);
}

double seniority_ground_energy(SeniorityModel model, double G, int omega, int n) {
  const int v = n % 2;
  switch (model) {
    case SeniorityModel::kIdentical:
      return energy_identical(G, omega, n, v);
    case SeniorityModel::kIsovector:
      if (v == 1) return energy_isovector(G, omega, n, 1, 0.5, 0.5);
      return energy_isovector(G, omega, n, 0, (n / 2) % 2);
    case SeniorityModel::kSu4:
      if (v == 1) return energy_su4(G, omega, n, 0, 1);
      return energy_su4(G, omega, n, n % 4 == 0 ? 0 : 1);
  }
  fail("unknown seniority model");
}

QuasiparticleEnergies quasiparticle_energies_seniority(double g, int omega, int n, SeniorityModel model) {
  if (n % 2 != 0) fail("quasiparticle energies are defined around an even particle number");
  const double G = g / omega;
  const int capacity = (model == SeniorityModel::kIdentical ? 2 : 4) * omega;
  if (n < 0 || n + 2 > capacity) fail("quasiparticle energies need 0 <= n and n + 2 <= capacity");

  QuasiparticleEnergies q;
  const double e0 = seniority_ground_energy(model, G, omega, n);
  const double e1 = seniority_ground_energy(model, G, omega, n + 1);
  const double e2 = seniority_ground_energy(model, G, omega, n + 2);
  q.e_q_even = e1 - e0;
  q.e_q_odd = e2 - e1;
  q.delta_oe = 0.5 * (2.0 * e1 - e0 - e2);

  if (n >= 2 && n + 2 <= capacity) {
    if (model == SeniorityModel::kIdentical) {
      q.e_2q = energy_identical(G, omega, n, 2) - e0;
    } else if (model == SeniorityModel::kIsovector) {
      const double T = (n / 2) % 2;
      q.e_2q = energy_isovector(G, omega, n, 2, T, 0.0) - e0;
    }
  }

  const double f = static_cast<double>(n) / capacity;
  q.bulk.e_2q = g;
  q.bulk.e_q_even = g * f;
  q.bulk.e_q_odd = -g * (1.0 - f);
  q.bulk.delta_oe = 0.5 * g;
  return q;
}

}  // namespace pairing
