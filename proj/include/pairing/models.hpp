#pragma once
// Pairing Hamiltonians on Omega spatial levels:
//
//   H = sum_i eps_i N_i - G sum_{ij} sum_c A^dagger_{c i} A_{c j}
//
// with the channel set c fixed by the model class.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairing/fock.hpp"

namespace pairing {

enum class ModelClass {
  kIdentical,     // P_{+1}, P_{-1}: like-particle pairing, degenerate levels
  kIsovector,     // P_{-1,0,+1}, degenerate levels
  kSu4Seniority,  // all six P, Q channels, degenerate levels
  kSu4Rg,         // six channels plus equally spaced levels
  kSpin32Rg,      // S and D_mu channels plus equally spaced levels
};

// Which pair-operator labeling builds the interaction.
enum class PairBasis { kIsospin, kSpin32 };

enum class CouplingScale {
  kRaw,   // value is G
  kBulk,  // value is g, with G = g / Omega
};

struct ModelSpec {
  ModelClass model_class = ModelClass::kSu4Seniority;
  int omega = 1;
  double coupling = 1.0;
  CouplingScale coupling_scale = CouplingScale::kRaw;
  int n_particles = 0;
  // Empty: degenerate classes use 0, RG classes use (i - 1) / (2 Omega).
  std::vector<double> level_energies;
  PairBasis pair_basis = PairBasis::kIsospin;

  // G in the Hamiltonian.
  double pair_strength() const noexcept;
  // g = G * Omega.
  double bulk_coupling() const noexcept;
  std::vector<double> resolved_levels() const;
};

std::string_view model_class_name(ModelClass c) noexcept;
std::optional<ModelClass> parse_model_class(std::string_view name) noexcept;

// Equally spaced levels eps_i = (i - 1) / (2 Omega), i = 1..Omega.
std::vector<double> equally_spaced_levels(int omega);

// Channels entering the interaction for this spec.
std::vector<PairChannel> interaction_channels(const ModelSpec& spec);

OperatorExpression hamiltonian_expression(const ModelSpec& spec);

// Throws DomainError when the basis sector does not match spec.n_particles or
// omega.
SparseOperator build_hamiltonian(const ModelSpec& spec, const SectorBasis& basis);

// The same SU(4)-invariant Hamiltonian expressed with the spin-3/2 S/D pair
// operators. Only defined for su4_seniority and su4_rg.
ModelSpec spin32_relabel(const ModelSpec& spec);

}  // namespace pairing
