// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "pairing/app.hpp"
#include "pairing/bcs.hpp"
#include "pairing/ed.hpp"
#include "pairing/errors.hpp"
#include "pairing/extrapolate.hpp"
#include "pairing/models.hpp"
#include "pairing/seniority.hpp"

using namespace pairing;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& what) {
    if (passed) detail = what;
    passed = false;
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ModelSpec make(ModelClass cls, int omega, int n, double G) {
  ModelSpec s;
  s.model_class = cls;
  s.omega = omega;
  s.n_particles = n;
  s.coupling = G;
  return s;
}

EigenResult lowest(const ModelSpec& spec, const SectorBasis& b, std::size_t k) {
  return lowest_states(build_hamiltonian(spec, b), std::min(k, b.size()));
}

// 1. bulk BCS constants through the command-line task.
Outcome bulk_constants() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out;
  run(resolve_config({{"task.name", "bcs-bulk"}, {"model.g", "0.15"}, {"task.filling", "1"}}), out);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const auto j = nlohmann::json::parse(out.str());
  const double lambda = j.at("lambda");
  const double delta = j.at("delta");
  const double epn = j.at("e_per_n");
  const double eq = j.at("e_q");
  if (std::abs(lambda - 0.12468144) > 5e-8) o.fail(fmt("lambda %.10f", lambda));
  if (std::abs(delta - 0.015466976) > 5e-9) o.fail(fmt("delta %.11f", delta));
  if (std::abs(epn - 0.062022154) > 5e-9) o.fail(fmt("E/N %.11f", epn));
  if (std::abs(eq - 0.140151) > 5e-6) o.fail(fmt("E_q %.9f", eq));
  if (seconds >= 1.0) o.fail(fmt("runtime %.3f s", seconds));
  if (o.passed) {
    o.detail = fmt("lambda=%.9f delta=%.9f", lambda, delta) + fmt(" E/N=%.9f E_q=%.9f", epn, eq) +
               fmt(" (%.3f s)", seconds);
  }
  return o;
}

// 2. degenerate-limit spectra against the closed forms.
Outcome degenerate_limit() {
  Outcome o;
  int checked = 0;
  const double G = 1.0;
  auto near = [](double a, double b) { return std::abs(a - b) <= 1e-9; };
  for (int omega = 1; omega <= 4; ++omega) {
    for (int n : {1, 2, 3, 4, 5, 6, 8}) {
      if (n > 4 * omega) continue;
      const bool odd = n % 2 == 1;

      // Identical: protons and neutrons pair separately; every state in a
      // T_z sector is a sum of two like-particle seniority energies.
      for (int np = std::max(0, n - 2 * omega); np <= std::min(n, 2 * omega); ++np) {
        const int nn = n - np;
        const SectorBasis b = enumerate_basis(omega, n, SectorConstraints{std::nullopt, np - nn});
        const EigenResult r = lowest(make(ModelClass::kIdentical, omega, n, G), b, 10);
        const double ground = seniority_ground_energy(SeniorityModel::kIdentical, G, omega, np) +
                              seniority_ground_energy(SeniorityModel::kIdentical, G, omega, nn);
        if (!near(r.energies[0], ground)) o.fail(fmt("identical ground omega=%g n=%g: %.12f", omega, n, r.energies[0]));
        for (double e : r.energies) {
          bool found = false;
          for (int vp = np % 2; vp <= std::min(np, 2 * omega - np); vp += 2) {
            for (int vn = nn % 2; vn <= std::min(nn, 2 * omega - nn); vn += 2) {
              found = found || near(e, energy_identical(G, omega, np, vp) + energy_identical(G, omega, nn, vn));
            }
          }
          if (!found) o.fail(fmt("identical level %.12f unmatched (omega=%g, n=%g)", e, omega, n));
          ++checked;
        }
      }

      // Isovector: every labeled state matches the closed form for some v
      // and reduced isospin at its total isospin.
      {
        const SectorBasis b = enumerate_basis(omega, n);
        const EigenResult r = lowest(make(ModelClass::kIsovector, omega, n, G), b, 12);
        const auto labels = label_states(r.energies, r.vectors, b);
        if (!near(r.energies[0], seniority_ground_energy(SeniorityModel::kIsovector, G, omega, n))) {
          o.fail(fmt("isovector ground omega=%g n=%g: %.12f", omega, n, r.energies[0]));
        }
        for (std::size_t i = 0; i < r.energies.size(); ++i) {
          if (!labels[i].isospin) continue;  // multiplet cut off by k
          bool found = false;
          for (int v = n % 2; v <= n && !found; v += 2) {
            for (int t2 = v % 2; t2 <= v && !found; t2 += 2) {
              try {
                found = near(r.energies[i], energy_isovector(G, omega, n, v, *labels[i].isospin, 0.5 * t2));
              } catch (const DomainError&) {
              }
            }
          }
          if (!found) o.fail(fmt("isovector level %.12f unmatched (omega=%g, n=%g)", r.energies[i], omega, n));
          ++checked;
        }
      }

      // SU(4), in both pair bases: ground at the lowest lambda2 present.
      if (!odd) {
        const SectorBasis b = enumerate_basis(omega, n, SectorConstraints{0, 0});
        const ModelSpec su4 = make(ModelClass::kSu4Seniority, omega, n, G);
        const double expected = seniority_ground_energy(SeniorityModel::kSu4, G, omega, n);
        for (const ModelSpec& spec : {su4, spin32_relabel(su4)}) {
          const double e = lowest(spec, b, 1).energies[0];
          if (!near(e, expected)) o.fail(fmt("su4 ground omega=%g n=%g: %.12f", omega, n, e));
          ++checked;
        }
      }
    }
  }
  if (o.passed) o.detail = std::to_string(checked) + " energies matched within 1e-9";
  return o;
}

// 3. first isovector excitation at N = 4 is 3g/Omega.
Outcome collective_excitation() {
  Outcome o;
  const double g = 1.0;
  std::string detail;
  for (int omega : {2, 3, 4}) {
    const SectorBasis b = enumerate_basis(omega, 4);
    const EigenResult r = lowest(make(ModelClass::kIsovector, omega, 4, g / omega), b, 2);
    const double ex = r.energies[1] - r.energies[0];
    const double expected = 3.0 * g / omega;
    detail += fmt(" omega=%g: %.12f (3g/omega=%.12f)", omega, ex, expected);
    if (std::abs(ex - expected) > 1e-9) o.passed = false;
  }
  o.detail = detail.substr(1);
  return o;
}

// 4. SU(4) generators commute with the symmetric Hamiltonians.
Outcome su4_symmetry() {
  Outcome o;
  double worst = 0.0;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (ModelClass cls : {ModelClass::kSu4Seniority, ModelClass::kSu4Rg}) {
    ModelSpec spec = make(cls, 3, 4, 1.0);
    const SectorBasis b = enumerate_basis(3, 4);
    const SparseOperator h = build_hamiltonian(spec, b);
    const auto spec_h = dense_spectrum(h);
    const double norm_h = std::max(std::abs(spec_h.front()), std::abs(spec_h.back()));
    const auto gens = su4_generators(b);
    std::vector<double> v(b.size()), hv(b.size()), gv(b.size()), hgv(b.size()), ghv(b.size());
    for (int trial = 0; trial < 10; ++trial) {
      for (double& x : v) x = u(rng);
      double nv = 0.0;
      for (double x : v) nv += x * x;
      nv = std::sqrt(nv);
      h.apply(v, hv);
      for (const auto& gen : gens) {
        gen.op.apply(v, gv);
        h.apply(gv, hgv);
        gen.op.apply(hv, ghv);
        double c = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) c += (hgv[k] - ghv[k]) * (hgv[k] - ghv[k]);
        worst = std::max(worst, std::sqrt(c) / (norm_h * nv));
      }
    }
  }
  if (worst > 1e-12) o.passed = false;
  o.detail = fmt("max ||[H,G]v|| / (||H|| ||v||) = %.3g", worst);
  return o;
}

// 5. isospin and spin-3/2 constructions give the same spectra.
Outcome spin32_equivalence() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 4}) {
    const SectorBasis b = enumerate_basis(2, n);
    const ModelSpec spec = make(ModelClass::kSu4Seniority, 2, n, 1.0);
    const auto a = dense_spectrum(build_hamiltonian(spec, b));
    const auto c = dense_spectrum(build_hamiltonian(spin32_relabel(spec), b));
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - c[i]));
  }
  if (worst > 1e-10) o.passed = false;
  o.detail = fmt("max eigenvalue difference %.3g", worst);
  return o;
}

// 6. discrete BCS tends to the continuum; the cubic fit recovers it.
Outcome continuum_limit() {
  Outcome o;
  const BcsSolution bulk = solve_bulk(0.15, 1.0);
  const int big = 10000;
  const BcsSolution s = solve_discrete(equally_spaced_levels(big), 0.15, big, big);
  const double dl = std::abs(s.lambda - bulk.lambda);
  const double dd = std::abs(s.delta - bulk.delta);
  const double de = std::abs(s.energy_per_particle - bulk.energy_per_particle);
  if (dl > 1e-5) o.passed = false;
  if (dd > 1e-5) o.passed = false;
  if (de > 1e-5) o.passed = false;

  std::vector<SeriesPoint> points;
  for (int omega : {160, 280, 400, 520, 640, 760, 880, 1000}) {
    points.push_back({double(omega), solve_discrete(equally_spaced_levels(omega), 0.15, omega, omega).energy_per_particle});
  }
  const double a = fit_cubic_inverse(points).a();
  const double da = std::abs(a - bulk.energy_per_particle);
  if (da > 1e-6) o.passed = false;
  o.detail = fmt("omega=1e4 |d lambda|=%.3g |d Delta|=%.3g", dl, dd) + fmt(" |d E/N|=%.3g (tol 1e-5);", de) +
             fmt(" fit a=%.10f |a - bulk|=%.3g (tol 1e-6)", a, da);
  return o;
}

// 7. fit machinery on synthetic and published coefficients.
Outcome fit_machinery() {
  Outcome o;
  auto worst_error = [](const std::vector<double>& c, const std::vector<double>& ns) {
    std::vector<SeriesPoint> pts;
    for (double n : ns) pts.push_back({n, c[0] + c[1] / n + c[2] / (n * n) + c[3] / (n * n * n)});
    const FitResult f = fit_cubic_inverse(pts);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(f.coefficients[k] - c[k]) / std::abs(c[k]));
    return worst;
  };
  std::vector<double> hundreds;
  for (int n = 100; n <= 1000; n += 100) hundreds.push_back(n);
  const std::vector<double> table_sizes{160, 280, 400, 520, 640, 760, 880, 1000};
  const double synthetic = worst_error({1.0, 2.0, 3.0, 4.0}, hundreds);
  double published = 0.0;
  for (const auto& c : std::vector<std::vector<double>>{{0.062022149, -0.597581, 1.278831, -11.1571},
                                                        {0.140148, -0.479740, -10.0327, -1107.25},
                                                        {0.0154637, -0.699890, -2.24642, -1066.63},
                                                        {0.0154672, 0.0961964, 2.59458, -257.910}}) {
    published = std::max(published, worst_error(c, table_sizes));
  }
  o.passed = synthetic <= 1e-10 && published <= 1e-8;
  o.detail = fmt("synthetic (1,2,3,4), N=100..1000: max relative error %.3g (tol 1e-10); ", synthetic) +
             fmt("published coefficient sets: %.3g (tol 1e-8)", published);
  return o;
}

// 8. sparse eigensolver against dense diagonalization.
Outcome oracle_equivalence() {
  Outcome o;
  int sectors = 0;
  double worst = 0.0;
  for (ModelClass cls : {ModelClass::kIdentical, ModelClass::kIsovector, ModelClass::kSu4Seniority,
                         ModelClass::kSu4Rg, ModelClass::kSpin32Rg}) {
    for (int omega = 1; omega <= 4; ++omega) {
      for (int n = 0; n <= 4 * omega; ++n) {
        if (sector_dimension(omega, n) > 2000) continue;
        ModelSpec spec = make(cls, omega, n, 0.15);
        spec.coupling_scale = CouplingScale::kBulk;
        const SectorBasis b = enumerate_basis(omega, n);
        const SparseOperator h = build_hamiltonian(spec, b);
        const auto dense = dense_spectrum(h);
        const auto r = lowest_states(h, std::min<std::size_t>(6, b.size()));
        for (std::size_t i = 0; i < r.energies.size(); ++i) worst = std::max(worst, std::abs(r.energies[i] - dense[i]));
        ++sectors;
      }
    }
  }
  if (worst > 1e-10) o.passed = false;
  o.detail = std::to_string(sectors) + " sectors, " + fmt("max deviation %.3g", worst);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"1 bulk BCS constants", bulk_constants},
      {"2 degenerate-limit exactness", degenerate_limit},
      {"3 collective excitation 3g/Omega", collective_excitation},
      {"4 SU(4) symmetry", su4_symmetry},
      {"5 spin-3/2 equivalence", spin32_equivalence},
      {"6 continuum limit", continuum_limit},
      {"7 fit machinery", fit_machinery},
      {"8 sparse vs dense", oracle_equivalence},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.passed) ++failures;
    std::printf("%s %s: %s\n", o.passed ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf(
      "N/A  9 exact SO(8) rows of the size table: not reproducible without the Richardson-Gaudin solver; "
      "published coefficients used as reference data in 7\n");
  return failures == 0 ? 0 : 1;
}
