#pragma once
// Fock-space representation of four-species fermions on Omega spatial levels.
//
// Occupations are packed into one 64-bit word, species-major:
//   bit(level i, species s) = s * Omega + i,   0 <= i < Omega, 0 <= s < 4.
// Fermionic phases follow a single rule: a creation or annihilation operator
// acting at bit p contributes (-1)^(number of occupied bits below p). Operator
// products are applied right to left.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pairing/kernels.hpp"

namespace pairing {

inline constexpr int kSpeciesCount = 4;
inline constexpr int kMaxLevels = 16;  // 4 * Omega bits must fit in 64
inline constexpr std::size_t kDefaultDimensionCap = 20'000'000;

// Species labels. The index <-> quantum-number map is fixed here and nowhere
// else:
//
//   index   nuclear (2 s_z, 2 t_z)   spin-3/2 (2 m)
//     0          (+1, +1)                +3
//     1          (-1, +1)                +1
//     2          (+1, -1)                -1
//     3          (-1, -1)                -3
//
// i.e. index = 2 * t + s with s = 0 for spin up, t = 0 for proton
// (t_z = +1/2).
struct Species {
  int index = 0;

  constexpr int twice_sz() const noexcept { return (index & 1) == 0 ? 1 : -1; }
  constexpr int twice_tz() const noexcept { return (index & 2) == 0 ? 1 : -1; }
  constexpr int twice_m() const noexcept { return 3 - 2 * index; }

  static constexpr Species from_nuclear(int twice_sz, int twice_tz) noexcept {
    return Species{(twice_sz > 0 ? 0 : 1) + (twice_tz > 0 ? 0 : 2)};
  }
  static constexpr Species from_spin32(int twice_m) noexcept { return Species{(3 - twice_m) / 2}; }
};

constexpr int bit_position(int species, int level, int omega) noexcept {
  return species * omega + level;
}

class FockState {
 public:
  constexpr FockState() noexcept = default;
  constexpr explicit FockState(std::uint64_t bits) noexcept : bits_(bits) {}

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool occupied(int position) const noexcept { return (bits_ >> position) & 1U; }
  int particle_count() const noexcept;
  // Number of occupied positions strictly below `position`.
  int occupied_below(int position) const noexcept;

  // a_p^dagger |this>. Returns the sign in `sign` or nullopt when blocked.
  std::optional<FockState> create(int position, int& sign) const noexcept;
  // a_p |this>.
  std::optional<FockState> annihilate(int position, int& sign) const noexcept;

  friend constexpr bool operator==(FockState, FockState) noexcept = default;
  friend constexpr auto operator<=>(FockState a, FockState b) noexcept { return a.bits_ <=> b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

struct SectorConstraints {
  std::optional<int> twice_sz;  // total 2 S_z
  std::optional<int> twice_tz;  // total 2 T_z
  bool active() const noexcept { return twice_sz.has_value() || twice_tz.has_value(); }
};

class SectorBasis {
 public:
  int omega() const noexcept { return omega_; }
  int n_particles() const noexcept { return n_particles_; }
  const SectorConstraints& constraints() const noexcept { return constraints_; }
  std::size_t size() const noexcept { return states_.size(); }
  std::span<const FockState> states() const noexcept { return states_; }
  FockState state(std::size_t k) const { return states_[k]; }
  std::optional<std::size_t> index_of(FockState s) const noexcept;

 private:
  friend SectorBasis enumerate_basis(int, int, const SectorConstraints&, std::size_t);
  int omega_ = 0;
  int n_particles_ = 0;
  SectorConstraints constraints_;
  std::vector<FockState> states_;
};

// Number of states the sector would hold, computed without enumerating.
std::size_t sector_dimension(int omega, int n, const SectorConstraints& constraints = {});

// Canonical (ascending bit-word) enumeration of the sector. Throws
// CapacityError when the sector holds more than `dimension_cap` states and
// DomainError for invalid omega/n.
SectorBasis enumerate_basis(int omega, int n, const SectorConstraints& constraints = {},
                            std::size_t dimension_cap = kDefaultDimensionCap);

// ---------------------------------------------------------------------------
// Pair channels

// Six pair operators in each labeling. P_mu = (S=0, T=1, M_T=mu),
// Q_mu = (S=1, M_S=mu, T=0), S = (J=0), D_mu = (J=2, M=mu), all normalized as
// (1/sqrt 2) {a^dagger a^dagger}.
enum class PairChannel { kPm1, kP0, kPp1, kQm1, kQ0, kQp1, kS, kDm2, kDm1, kD0, kDp1, kDp2 };

PairChannel p_channel(int mu);
PairChannel q_channel(int mu);
PairChannel d_channel(int mu);
std::string_view channel_name(PairChannel c) noexcept;

// One product term of a pair creator: amplitude * a^dagger_first a^dagger_second
// (first < second, species indices on the same level).
struct PairTerm {
  int first = 0;
  int second = 0;
  double amplitude = 0.0;
};

// Expansion of the channel's creation operator in species pairs.
std::span<const PairTerm> pair_terms(PairChannel c);

struct Amplitude {
  FockState state;
  double amplitude = 0.0;
};
using SmallAmplitudes = std::vector<Amplitude>;

// A^dagger_{c, level} |state>; empty when Pauli-blocked.
SmallAmplitudes pair_create(PairChannel c, int level, FockState state, int omega);
// A_{c, level} |state>.
SmallAmplitudes pair_annihilate(PairChannel c, int level, FockState state, int omega);

// ---------------------------------------------------------------------------
// Sparse operators

struct SparseOperator {
  std::size_t dim = 0;
  std::vector<std::size_t> row_offsets;  // dim + 1 entries
  std::vector<std::uint32_t> col_indices;
  std::vector<double> values;
  bool hermitian = true;

  std::size_t nnz() const noexcept { return values.size(); }
  kernels::CsrView view() const noexcept { return {row_offsets, col_indices, values}; }

  // y = A x. Rows are split into `threads` contiguous ranges; the result does
  // not depend on the split.
  void apply(std::span<const double> x, std::span<double> y, int threads = 1) const;
  double max_abs() const noexcept;
  // max |A_rc - A_cr|.
  double symmetry_residual() const;
  double element(std::size_t row, std::size_t col) const noexcept;
};

using SingleParticleMatrix = std::array<std::array<double, kSpeciesCount>, kSpeciesCount>;

// coefficient * sum_{i,j} sum_{c in channels} A^dagger_{c i} A_{c j}
struct SeparablePairing {
  std::vector<PairChannel> channels;
  double coefficient = -1.0;
};

// coefficient * A^dagger_{create, create_level} A_{annihilate, annihilate_level}
struct PairProduct {
  PairChannel create = PairChannel::kP0;
  int create_level = 0;
  PairChannel annihilate = PairChannel::kP0;
  int annihilate_level = 0;
  double coefficient = 1.0;
};

// coefficient * n_{level, species}; level or species -1 means summed.
struct NumberTerm {
  int level = -1;
  int species = -1;
  double coefficient = 1.0;
};

// sum_i level_coefficients[i] * N_i  (all species)
struct LevelEnergies {
  std::vector<double> level_coefficients;
};

// coefficient * sum_i sum_{ab} a^dagger_{i a} M_ab a_{i b}
struct OneBody {
  SingleParticleMatrix matrix{};
  double coefficient = 1.0;
};

using OperatorTerm = std::variant<SeparablePairing, PairProduct, NumberTerm, LevelEnergies, OneBody>;

struct OperatorExpression {
  std::vector<OperatorTerm> terms;
  // Declares the intended symmetry; build_operator records it on the result.
  bool hermitian = true;

  OperatorExpression& add(OperatorTerm t) {
    terms.push_back(std::move(t));
    return *this;
  }
};

// Assembles the matrix of `expr` in `basis`. Deterministic. Throws
// ConstraintError if any term maps a basis state outside the sector.
SparseOperator build_operator(const OperatorExpression& expr, const SectorBasis& basis);

// Sparse vector keyed by Fock state, used to apply operators outside a sector.
using FockVector = std::vector<std::pair<FockState, double>>;

// M|v> for a one-body matrix, without restricting to any sector. Result is
// sorted by state with duplicates merged.
FockVector apply_one_body(const SingleParticleMatrix& m, std::span<const double> v,
                          const SectorBasis& basis);
double inner_product(const FockVector& a, const FockVector& b) noexcept;

// ---------------------------------------------------------------------------
// SU(4) generators

// One generator G = phase * sum_i a^dagger_i M a_i. Hermitian generators with
// imaginary entries are stored as the real antisymmetric M with G = i M.
struct Su4Generator {
  std::string name;
  SingleParticleMatrix matrix{};
  bool imaginary = false;
};

// The 15 generators (1/2 sigma_a) x 1, 1 x (1/2 tau_b), (1/2 sigma_a) x (1/2 tau_b):
// spin, isospin and spin-isospin tensor.
const std::vector<Su4Generator>& su4_generator_matrices();

struct Su4GeneratorOperator {
  std::string name;
  SparseOperator op;  // real matrix of M (see Su4Generator)
  bool imaginary = false;
};

// Requires an unconstrained basis (generators mix S_z and T_z sectors).
std::vector<Su4GeneratorOperator> su4_generators(const SectorBasis& basis);

// Looks up a generator by name ("S_x", "T_z", "ST_xy", ...).
const Su4Generator& su4_generator(std::string_view name);

}  // namespace pairing
