#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pairing/app.hpp"
#include "pairing/bcs.hpp"
#include "pairing/ed.hpp"
#include "pairing/extrapolate.hpp"
#include "pairing/kernels.hpp"
#include "pairing/models.hpp"
#include "pairing/seniority.hpp"

namespace pairing {

namespace {

std::string describe(double worst, double tolerance) {
  std::ostringstream s;
  s << "max deviation " << format_number(worst) << " (tolerance " << format_number(tolerance) << ")";
  return s.str();
}

VerifyCheck within(std::string name, double worst, double tolerance) {
  return {std::move(name), worst <= tolerance, describe(worst, tolerance)};
}

ModelSpec spec_for(ModelClass cls, int omega, int n, double coupling, CouplingScale scale = CouplingScale::kRaw) {
  ModelSpec s;
  s.model_class = cls;
  s.omega = omega;
  s.n_particles = n;
  s.coupling = coupling;
  s.coupling_scale = scale;
  return s;
}

double ground_energy(const ModelSpec& spec, int threads) {
  const SectorBasis basis = enumerate_basis(spec.omega, spec.n_particles);
  LanczosOptions o;
  o.threads = threads;
  return lowest_states(build_hamiltonian(spec, basis), 1, o).energies.front();
}

VerifyCheck bulk_constants() {
  const BcsSolution s = solve_bulk(0.15, 1.0);
  const double worst = std::max({std::abs(s.lambda - 0.12468144) / 5e-8, std::abs(s.delta - 0.015466976) / 5e-9,
                                 std::abs(s.energy_per_particle - 0.062022154) / 5e-9,
                                 std::abs(quasiparticle_energy(0.125, s.lambda, s.delta) - 0.140151) / 5e-6});
  return {"bulk_bcs_constants", worst <= 1.0,
          "lambda " + format_number(s.lambda) + ", delta " + format_number(s.delta) + ", E/N " +
              format_number(s.energy_per_particle)};
}

VerifyCheck seniority_limit(int threads) {
  double worst = 0.0;
  for (int omega = 1; omega <= 3; ++omega) {
    for (int n = 1; n <= std::min(6, 4 * omega); ++n) {
      const double iv = ground_energy(spec_for(ModelClass::kIsovector, omega, n, 1.0), threads);
      worst = std::max(worst, std::abs(iv - seniority_ground_energy(SeniorityModel::kIsovector, 1.0, omega, n)));
      const double su4 = ground_energy(spec_for(ModelClass::kSu4Seniority, omega, n, 1.0), threads);
      worst = std::max(worst, std::abs(su4 - seniority_ground_energy(SeniorityModel::kSu4, 1.0, omega, n)));
    }
  }
  return within("seniority_closed_forms", worst, 1e-9);
}

VerifyCheck sparse_dense(int threads) {
  double worst = 0.0;
  for (ModelClass cls : {ModelClass::kIdentical, ModelClass::kIsovector, ModelClass::kSu4Seniority, ModelClass::kSu4Rg,
                         ModelClass::kSpin32Rg}) {
    for (int n : {2, 3, 4}) {
      const ModelSpec spec = spec_for(cls, 2, n, 0.3, CouplingScale::kBulk);
      const SectorBasis basis = enumerate_basis(2, n);
      const SparseOperator h = build_hamiltonian(spec, basis);
      const std::vector<double> dense = dense_spectrum(h);
      LanczosOptions o;
      o.threads = threads;
      const std::size_t k = std::min<std::size_t>(6, basis.size());
      const EigenResult eig = lowest_states(h, k, o);
      for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, std::abs(eig.energies[i] - dense[i]));
    }
  }
  return within("sparse_vs_dense", worst, 1e-10);
}

VerifyCheck su4_commutators() {
  const SectorBasis basis = enumerate_basis(2, 3);
  const SparseOperator h = build_hamiltonian(spec_for(ModelClass::kSu4Rg, 2, 3, 0.15, CouplingScale::kBulk), basis);
  std::mt19937_64 rng(7);
  std::vector<double> v(basis.size());
  for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  const double scale = h.max_abs() * std::sqrt(kernels::dot(v, v));
  double worst = 0.0;
  std::vector<double> a(v.size());
  std::vector<double> b(v.size());
  std::vector<double> t(v.size());
  for (const auto& g : su4_generators(basis)) {
    g.op.apply(v, t);
    h.apply(t, a);
    h.apply(v, t);
    g.op.apply(t, b);
    kernels::axpy(-1.0, b, a);
    worst = std::max(worst, std::sqrt(kernels::dot(a, a)) / scale);
  }
  return within("su4_commutators", worst, 1e-12);
}

VerifyCheck spin32_equivalence() {
  double worst = 0.0;
  for (int n : {2, 4}) {
    const ModelSpec iso = spec_for(ModelClass::kSu4Seniority, 2, n, 1.0);
    const SectorBasis basis = enumerate_basis(2, n);
    const std::vector<double> a = dense_spectrum(build_hamiltonian(iso, basis));
    const std::vector<double> b = dense_spectrum(build_hamiltonian(spin32_relabel(iso), basis));
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return within("spin32_equivalence", worst, 1e-10);
}

VerifyCheck occupation_sum_rule(int threads) {
  const ModelSpec spec = spec_for(ModelClass::kSu4Rg, 3, 4, 0.15, CouplingScale::kBulk);
  const SectorBasis basis = enumerate_basis(3, 4);
  LanczosOptions o;
  o.threads = threads;
  const EigenResult eig = lowest_states(build_hamiltonian(spec, basis), 1, o);
  const Occupations occ = occupations(eig.vectors.front(), basis);
  double spread = 0.0;
  for (const auto& level : occ.n) {
    const auto [lo, hi] = std::minmax_element(level.begin(), level.end());
    spread = std::max(spread, *hi - *lo);
  }
  return within("occupations_sum_and_species_symmetry", std::max(std::abs(occ.total() - 4.0), spread), 1e-10);
}

VerifyCheck fit_recovery() {
  std::vector<SeriesPoint> points;
  const double c[] = {1.0, 2.0, 3.0, 4.0};
  for (int n = 100; n <= 1000; n += 100) {
    const double x = 1.0 / n;
    points.push_back({static_cast<double>(n), c[0] + x * (c[1] + x * (c[2] + x * c[3]))});
  }
  const FitResult fit = fit_cubic_inverse(points);
  // Relative errors, with d weighted by its input-rounding floor (~1e-9).
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double rel = std::abs(fit.coefficients[static_cast<std::size_t>(i)] / c[i] - 1.0);
    worst = std::max(worst, i < 3 ? rel : rel / 50.0);
  }
  return within("fit_exact_recovery", worst, 1e-10);
}

VerifyCheck continuum_gap() {
  const double bulk = solve_bulk(0.15, 1.0).delta;
  double previous = 1.0;
  bool decreasing = true;
  double last = 0.0;
  for (int omega : {100, 1000, 10000}) {
    const BcsSolution s = solve_discrete(equally_spaced_levels(omega), 0.15, omega, omega);
    last = std::abs(s.delta - bulk);
    decreasing = decreasing && last < previous;
    previous = last;
  }
  return {"discrete_gap_converges", decreasing && last <= 1e-5, describe(last, 1e-5)};
}

VerifyCheck monotone_in_g(int threads) {
  double previous = 0.0;
  bool ok = true;
  for (int i = 0; i <= 6; ++i) {
    const double e = ground_energy(spec_for(ModelClass::kSu4Rg, 3, 4, 0.05 * i, CouplingScale::kBulk), threads);
    if (i > 0 && e > previous + 1e-12) ok = false;
    previous = e;
  }
  return {"ground_energy_monotone_in_g", ok, "su4_rg omega=3 n=4, g in 0..0.3"};
}

VerifyCheck kernels_agree() {
  if (!kernels::avx2_available()) return {"kernel_variants_agree", true, "only the scalar variant is available"};
  std::mt19937_64 rng(11);
  std::vector<double> x(1003);
  std::vector<double> y(1003);
  for (double& v : x) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  for (double& v : y) v = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  const double a = kernels::scalar::dot(x, y);
  const double b = kernels::avx2::dot(x, y);
  return within("kernel_variants_agree", std::abs(a - b), 1e-12);
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(int threads) {
  return {bulk_constants(),      seniority_limit(threads),     sparse_dense(threads),
          su4_commutators(),     spin32_equivalence(),         occupation_sum_rule(threads),
          fit_recovery(),        continuum_gap(),              monotone_in_g(threads),
          kernels_agree()};
}

}  // namespace pairing
