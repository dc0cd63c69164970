#pragma once
// Exact diagonalization: lowest eigenpairs of sparse Hamiltonians and the
// observables extracted from them.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "pairing/fock.hpp"

namespace pairing {

struct LanczosOptions {
  double tolerance = 1e-10;       // on ||H v - E v|| for every reported pair
  std::size_t max_iterations = 0;  // 0: min(10 * dim, 50000) matrix-vector products
  std::size_t krylov_size = 120;   // restart length
  std::uint64_t seed = 0x5eed'1234'abcdULL;
  int threads = 1;
};

struct EigenResult {
  std::vector<double> energies;  // ascending
  std::vector<std::vector<double>> vectors;
  std::vector<double> residuals;
  std::size_t iterations = 0;  // matrix-vector products
};

// k lowest eigenpairs of a Hermitian operator, degenerate copies included.
//
// Lanczos with full reorthogonalization. Converged Ritz vectors are locked and
// later runs start from a seeded random vector orthogonal to them, so every
// copy of a degenerate eigenvalue is found. Throws ConvergenceError after
// `max_iterations` products and DomainError if k is 0 or exceeds dim.
EigenResult lowest_states(const SparseOperator& h, std::size_t k, const LanczosOptions& options = {});

// All eigenvalues by dense diagonalization (small operators only).
std::vector<double> dense_spectrum(const SparseOperator& h);

struct Occupations {
  int omega = 0;
  // n[i][species] = <n_{i, species}>
  std::vector<std::array<double, kSpeciesCount>> n;

  double total() const noexcept;
  // Every species replaced by the species average on its level.
  Occupations species_averaged() const;
};

Occupations occupations(std::span<const double> state, const SectorBasis& basis);
// Average over an orthonormal set (e.g. a degenerate multiplet).
Occupations occupations(std::span<const std::vector<double>> states, const SectorBasis& basis);

// (1/8)(g / Omega) sum_{i, species} sqrt(n (1 - n))
double canonical_gap(const Occupations& occ, double g, int omega);

struct GapObservables {
  double delta_oe = 0.0;  // (2 E(4n+1) - E(4n) - E(4n+2)) / 2
  double e_q = 0.0;       // E(4n+1) - E(4n)
};

// `energies` maps particle number to ground energy; `quartets` is n in 4n.
// Throws DomainError when a required particle number is missing.
GapObservables gap_observables(const std::map<int, double>& energies, int quartets);

// Quantum numbers of one eigenstate, from Casimir expectation values resolved
// within its degenerate cluster. Missing when the value is not within 1e-6 of
// an allowed label (typically a cluster cut off by k).
struct StateLabels {
  std::optional<double> spin;
  std::optional<double> isospin;
  double su4_casimir = 0.0;  // sum of the 15 squared generators
};

struct Excitation {
  double energy = 0.0;
  double excitation = 0.0;  // energy - ground energy
  StateLabels labels;
};

// Lowest k states as excitation energies above the ground state (the first
// entry is the ground state itself, excitation 0).
std::vector<Excitation> excitation_spectrum(const SparseOperator& h, const SectorBasis& basis, std::size_t k,
                                            const LanczosOptions& options = {}, bool with_labels = true);

// Labels for given eigenpairs (clusters are formed from `energies`).
std::vector<StateLabels> label_states(std::span<const double> energies, std::span<const std::vector<double>> vectors,
                                      const SectorBasis& basis, double degeneracy_tolerance = 1e-8);

}  // namespace pairing
