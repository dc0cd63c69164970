#include "pairing/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <thread>

#include "pairing/clebsch.hpp"
#include "pairing/errors.hpp"

namespace pairing {

// ---------------------------------------------------------------------------
// FockState

int FockState::particle_count() const noexcept { return std::popcount(bits_); }

int FockState::occupied_below(int position) const noexcept {
  const std::uint64_t mask = position >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << position) - 1);
  return std::popcount(bits_ & mask);
}

std::optional<FockState> FockState::create(int position, int& sign) const noexcept {
  if (occupied(position)) return std::nullopt;
  sign = (occupied_below(position) & 1) ? -1 : 1;
  return FockState(bits_ | (std::uint64_t{1} << position));
}

std::optional<FockState> FockState::annihilate(int position, int& sign) const noexcept {
  if (!occupied(position)) return std::nullopt;
  sign = (occupied_below(position) & 1) ? -1 : 1;
  return FockState(bits_ & ~(std::uint64_t{1} << position));
}

// ---------------------------------------------------------------------------
// Sector enumeration

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

void validate_sector(int omega, int n) {
  if (omega < 1 || omega > kMaxLevels) {
    std::ostringstream msg;
    msg << "omega must be in [1, " << kMaxLevels << "], got " << omega;
    throw DomainError(msg.str());
  }
  if (n < 0 || n > kSpeciesCount * omega) {
    std::ostringstream msg;
    msg << "particle number " << n << " outside [0, " << kSpeciesCount * omega << "]";
    throw DomainError(msg.str());
  }
}

bool satisfies(const std::array<int, kSpeciesCount>& counts, const SectorConstraints& c) {
  if (c.twice_sz && (counts[0] + counts[2]) - (counts[1] + counts[3]) != *c.twice_sz) return false;
  if (c.twice_tz && (counts[0] + counts[1]) - (counts[2] + counts[3]) != *c.twice_tz) return false;
  return true;
}

template <typename Fn>
void for_each_species_split(int omega, int n, const SectorConstraints& c, Fn&& fn) {
  std::array<int, kSpeciesCount> counts{};
  for (counts[0] = 0; counts[0] <= std::min(n, omega); ++counts[0]) {
    for (counts[1] = 0; counts[1] <= std::min(n - counts[0], omega); ++counts[1]) {
      for (counts[2] = 0; counts[2] <= std::min(n - counts[0] - counts[1], omega); ++counts[2]) {
        counts[3] = n - counts[0] - counts[1] - counts[2];
        if (counts[3] > omega) continue;
        if (satisfies(counts, c)) fn(counts);
      }
    }
  }
}

}  // namespace

std::size_t sector_dimension(int omega, int n, const SectorConstraints& constraints) {
  validate_sector(omega, n);
  std::uint64_t total = 0;
  for_each_species_split(omega, n, constraints, [&](const std::array<int, kSpeciesCount>& counts) {
    std::uint64_t term = 1;
    for (int s = 0; s < kSpeciesCount; ++s) term *= binomial(omega, counts[s]);
    total += term;
  });
  return static_cast<std::size_t>(total);
}

SectorBasis enumerate_basis(int omega, int n, const SectorConstraints& constraints, std::size_t dimension_cap) {
  const std::size_t dim = sector_dimension(omega, n, constraints);
  if (dim > dimension_cap) {
    std::ostringstream msg;
    msg << "sector (omega=" << omega << ", n=" << n << ") has " << dim << " states, cap is " << dimension_cap;
    throw CapacityError(msg.str());
  }

  // Level masks grouped by popcount.
  std::vector<std::vector<std::uint64_t>> masks_by_count(static_cast<std::size_t>(omega) + 1);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << omega); ++m) {
    masks_by_count[static_cast<std::size_t>(std::popcount(m))].push_back(m);
  }

  SectorBasis basis;
  basis.omega_ = omega;
  basis.n_particles_ = n;
  basis.constraints_ = constraints;
  basis.states_.reserve(dim);
  for_each_species_split(omega, n, constraints, [&](const std::array<int, kSpeciesCount>& counts) {
    const auto& m0 = masks_by_count[static_cast<std::size_t>(counts[0])];
    const auto& m1 = masks_by_count[static_cast<std::size_t>(counts[1])];
    const auto& m2 = masks_by_count[static_cast<std::size_t>(counts[2])];
    const auto& m3 = masks_by_count[static_cast<std::size_t>(counts[3])];
    for (std::uint64_t a3 : m3)
      for (std::uint64_t a2 : m2)
        for (std::uint64_t a1 : m1)
          for (std::uint64_t a0 : m0) {
            basis.states_.emplace_back(a0 | (a1 << omega) | (a2 << (2 * omega)) | (a3 << (3 * omega)));
          }
  });
  std::sort(basis.states_.begin(), basis.states_.end());
  return basis;
}

std::optional<std::size_t> SectorBasis::index_of(FockState s) const noexcept {
  const auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

// ---------------------------------------------------------------------------
// Pair channels

namespace {

constexpr int kChannelCount = 12;

struct PairTable {
  std::array<std::vector<PairTerm>, kChannelCount> terms;
};

// (1/sqrt 2) sum_{ab} C(a, b) a^dagger_a a^dagger_b, folded onto a < b.
std::vector<PairTerm> fold_pair(const std::array<std::array<double, kSpeciesCount>, kSpeciesCount>& coupling) {
  std::array<std::array<double, kSpeciesCount>, kSpeciesCount> folded{};
  for (int a = 0; a < kSpeciesCount; ++a) {
    for (int b = 0; b < kSpeciesCount; ++b) {
      if (a == b) continue;
      if (a < b) {
        folded[a][b] += coupling[a][b];
      } else {
        folded[b][a] -= coupling[a][b];
      }
    }
  }
  std::vector<PairTerm> out;
  for (int a = 0; a < kSpeciesCount; ++a) {
    for (int b = a + 1; b < kSpeciesCount; ++b) {
      const double amp = folded[a][b] / std::sqrt(2.0);
      if (std::abs(amp) > 1e-14) out.push_back({a, b, amp});
    }
  }
  return out;
}

std::vector<PairTerm> isospin_pair(int spin_x2, int ms_x2, int isospin_x2, int mt_x2) {
  std::array<std::array<double, kSpeciesCount>, kSpeciesCount> coupling{};
  for (int a = 0; a < kSpeciesCount; ++a) {
    for (int b = 0; b < kSpeciesCount; ++b) {
      const Species sa{a};
      const Species sb{b};
      coupling[a][b] = clebsch_gordan(1, sa.twice_sz(), 1, sb.twice_sz(), spin_x2, ms_x2) *
                       clebsch_gordan(1, sa.twice_tz(), 1, sb.twice_tz(), isospin_x2, mt_x2);
    }
  }
  return fold_pair(coupling);
}

std::vector<PairTerm> spin32_pair(int j_x2, int m_x2) {
  std::array<std::array<double, kSpeciesCount>, kSpeciesCount> coupling{};
  for (int a = 0; a < kSpeciesCount; ++a) {
    for (int b = 0; b < kSpeciesCount; ++b) {
      coupling[a][b] = clebsch_gordan(3, Species{a}.twice_m(), 3, Species{b}.twice_m(), j_x2, m_x2);
    }
  }
  return fold_pair(coupling);
}

const PairTable& pair_table() {
  static const PairTable table = [] {
    PairTable t;
    for (int mu = -1; mu <= 1; ++mu) {
      t.terms[static_cast<std::size_t>(p_channel(mu))] = isospin_pair(0, 0, 2, 2 * mu);
      t.terms[static_cast<std::size_t>(q_channel(mu))] = isospin_pair(2, 2 * mu, 0, 0);
    }
    t.terms[static_cast<std::size_t>(PairChannel::kS)] = spin32_pair(0, 0);
    for (int mu = -2; mu <= 2; ++mu) t.terms[static_cast<std::size_t>(d_channel(mu))] = spin32_pair(4, 2 * mu);
    return t;
  }();
  return table;
}

}  // namespace

PairChannel p_channel(int mu) {
  if (mu < -1 || mu > 1) throw DomainError("P channel projection must be -1, 0 or 1");
  return static_cast<PairChannel>(static_cast<int>(PairChannel::kPm1) + mu + 1);
}

PairChannel q_channel(int mu) {
  if (mu < -1 || mu > 1) throw DomainError("Q channel projection must be -1, 0 or 1");
  return static_cast<PairChannel>(static_cast<int>(PairChannel::kQm1) + mu + 1);
}

PairChannel d_channel(int mu) {
  if (mu < -2 || mu > 2) throw DomainError("D channel projection must be in [-2, 2]");
  return static_cast<PairChannel>(static_cast<int>(PairChannel::kDm2) + mu + 2);
}

std::string_view channel_name(PairChannel c) noexcept {
  switch (c) {
    case PairChannel::kPm1: return "P-1";
    case PairChannel::kP0: return "P0";
    case PairChannel::kPp1: return "P+1";
    case PairChannel::kQm1: return "Q-1";
    case PairChannel::kQ0: return "Q0";
    case PairChannel::kQp1: return "Q+1";
    case PairChannel::kS: return "S";
    case PairChannel::kDm2: return "D-2";
    case PairChannel::kDm1: return "D-1";
    case PairChannel::kD0: return "D0";
    case PairChannel::kDp1: return "D+1";
    case PairChannel::kDp2: return "D+2";
  }
  return "?";
}

std::span<const PairTerm> pair_terms(PairChannel c) { return pair_table().terms[static_cast<std::size_t>(c)]; }

namespace {

template <typename Out>
void pair_create_into(std::span<const PairTerm> terms, int level, FockState state, int omega, double scale,
                      Out& out) {
  for (const PairTerm& t : terms) {
    int s1 = 1;
    int s2 = 1;
    const auto mid = state.create(bit_position(t.second, level, omega), s1);
    if (!mid) continue;
    const auto fin = mid->create(bit_position(t.first, level, omega), s2);
    if (!fin) continue;
    out.push_back({*fin, scale * t.amplitude * s1 * s2});
  }
}

// (a^dagger_f a^dagger_s)^dagger = a_s a_f: remove `first`, then `second`.
template <typename Out>
void pair_annihilate_into(std::span<const PairTerm> terms, int level, FockState state, int omega, double scale,
                          Out& out) {
  for (const PairTerm& t : terms) {
    int s1 = 1;
    int s2 = 1;
    const auto mid = state.annihilate(bit_position(t.first, level, omega), s1);
    if (!mid) continue;
    const auto fin = mid->annihilate(bit_position(t.second, level, omega), s2);
    if (!fin) continue;
    out.push_back({*fin, scale * t.amplitude * s1 * s2});
  }
}

}  // namespace

SmallAmplitudes pair_create(PairChannel c, int level, FockState state, int omega) {
  SmallAmplitudes out;
  pair_create_into(pair_terms(c), level, state, omega, 1.0, out);
  return out;
}

SmallAmplitudes pair_annihilate(PairChannel c, int level, FockState state, int omega) {
  SmallAmplitudes out;
  pair_annihilate_into(pair_terms(c), level, state, omega, 1.0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Operator assembly

namespace {

constexpr double kDropTolerance = 1e-15;

struct ColumnBuilder {
  int omega;
  std::vector<Amplitude> acc;
  std::vector<Amplitude> scratch;

  void apply(const SeparablePairing& t, FockState s) {
    for (PairChannel c : t.channels) {
      const auto terms = pair_terms(c);
      scratch.clear();
      for (int j = 0; j < omega; ++j) pair_annihilate_into(terms, j, s, omega, 1.0, scratch);
      for (const Amplitude& mid : scratch) {
        for (int i = 0; i < omega; ++i) pair_create_into(terms, i, mid.state, omega, t.coefficient * mid.amplitude, acc);
      }
    }
  }

  void apply(const PairProduct& t, FockState s) {
    scratch.clear();
    pair_annihilate_into(pair_terms(t.annihilate), t.annihilate_level, s, omega, 1.0, scratch);
    for (const Amplitude& mid : scratch) {
      pair_create_into(pair_terms(t.create), t.create_level, mid.state, omega, t.coefficient * mid.amplitude, acc);
    }
  }

  void apply(const NumberTerm& t, FockState s) {
    int count = 0;
    for (int sp = 0; sp < kSpeciesCount; ++sp) {
      if (t.species >= 0 && sp != t.species) continue;
      for (int i = 0; i < omega; ++i) {
        if (t.level >= 0 && i != t.level) continue;
        count += s.occupied(bit_position(sp, i, omega)) ? 1 : 0;
      }
    }
    if (count != 0) acc.push_back({s, t.coefficient * count});
  }

  void apply(const LevelEnergies& t, FockState s) {
    double e = 0.0;
    const int levels = std::min<int>(omega, static_cast<int>(t.level_coefficients.size()));
    for (int i = 0; i < levels; ++i) {
      int count = 0;
      for (int sp = 0; sp < kSpeciesCount; ++sp) count += s.occupied(bit_position(sp, i, omega)) ? 1 : 0;
      e += t.level_coefficients[static_cast<std::size_t>(i)] * count;
    }
    if (e != 0.0) acc.push_back({s, e});
  }

  void apply(const OneBody& t, FockState s) {
    for (int i = 0; i < omega; ++i) {
      for (int b = 0; b < kSpeciesCount; ++b) {
        int s1 = 1;
        const auto mid = s.annihilate(bit_position(b, i, omega), s1);
        if (!mid) continue;
        for (int a = 0; a < kSpeciesCount; ++a) {
          const double m = t.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          if (m == 0.0) continue;
          int s2 = 1;
          const auto fin = mid->create(bit_position(a, i, omega), s2);
          if (!fin) continue;
          acc.push_back({*fin, t.coefficient * m * s1 * s2});
        }
      }
    }
  }

  // Sorts and merges duplicate states in `acc`, dropping negligible values.
  void merge() {
    std::sort(acc.begin(), acc.end(), [](const Amplitude& x, const Amplitude& y) { return x.state < y.state; });
    std::size_t out = 0;
    for (std::size_t k = 0; k < acc.size();) {
      const FockState st = acc[k].state;
      double sum = 0.0;
      for (; k < acc.size() && acc[k].state == st; ++k) sum += acc[k].amplitude;
      if (std::abs(sum) > kDropTolerance) acc[out++] = {st, sum};
    }
    acc.resize(out);
  }
};

}  // namespace

SparseOperator build_operator(const OperatorExpression& expr, const SectorBasis& basis) {
  const std::size_t dim = basis.size();
  if (dim > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw CapacityError("basis too large for 32-bit column indices");
  }

  // Column-major pass: column c holds O|s_c>.
  std::vector<std::size_t> col_offsets(dim + 1, 0);
  std::vector<std::uint32_t> row_of;
  std::vector<double> val_of;
  ColumnBuilder builder{basis.omega(), {}, {}};
  for (std::size_t c = 0; c < dim; ++c) {
    const FockState s = basis.state(c);
    builder.acc.clear();
    for (const OperatorTerm& term : expr.terms) {
      std::visit([&](const auto& t) { builder.apply(t, s); }, term);
    }
    builder.merge();
    for (const Amplitude& a : builder.acc) {
      const auto row = basis.index_of(a.state);
      if (!row) {
        std::ostringstream msg;
        msg << "operator maps state " << s.bits() << " to " << a.state.bits() << ", outside the sector (n="
            << basis.n_particles() << ")";
        throw ConstraintError(msg.str());
      }
      row_of.push_back(static_cast<std::uint32_t>(*row));
      val_of.push_back(a.amplitude);
    }
    col_offsets[c + 1] = row_of.size();
  }

  // Transpose into CSR. Rows come out with ascending column indices.
  SparseOperator op;
  op.dim = dim;
  op.hermitian = expr.hermitian;
  op.row_offsets.assign(dim + 1, 0);
  for (std::uint32_t r : row_of) ++op.row_offsets[r + 1];
  for (std::size_t r = 0; r < dim; ++r) op.row_offsets[r + 1] += op.row_offsets[r];
  op.col_indices.resize(row_of.size());
  op.values.resize(row_of.size());
  std::vector<std::size_t> cursor(op.row_offsets.begin(), op.row_offsets.end() - 1);
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t k = col_offsets[c]; k < col_offsets[c + 1]; ++k) {
      const std::size_t slot = cursor[row_of[k]]++;
      op.col_indices[slot] = static_cast<std::uint32_t>(c);
      op.values[slot] = val_of[k];
    }
  }
  return op;
}

void SparseOperator::apply(std::span<const double> x, std::span<double> y, int threads) const {
  const auto csr = view();
  constexpr std::size_t kMinRowsPerThread = 4096;
  const std::size_t max_threads = std::max<std::size_t>(1, dim / kMinRowsPerThread);
  const std::size_t parts = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), max_threads);
  if (parts <= 1) {
    kernels::spmv(csr, x, y, 0, dim);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t begin = dim * p / parts;
    const std::size_t end = dim * (p + 1) / parts;
    workers.emplace_back([&, begin, end] { kernels::spmv(csr, x, y, begin, end); });
  }
  for (auto& w : workers) w.join();
}

double SparseOperator::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double SparseOperator::element(std::size_t row, std::size_t col) const noexcept {
  const auto first = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row]);
  const auto last = col_indices.begin() + static_cast<std::ptrdiff_t>(row_offsets[row + 1]);
  const auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(col));
  if (it == last || *it != col) return 0.0;
  return values[static_cast<std::size_t>(it - col_indices.begin())];
}

double SparseOperator::symmetry_residual() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t k = row_offsets[r]; k < row_offsets[r + 1]; ++k) {
      worst = std::max(worst, std::abs(values[k] - element(col_indices[k], r)));
    }
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Matrix-free one-body action

FockVector apply_one_body(const SingleParticleMatrix& m, std::span<const double> v, const SectorBasis& basis) {
  ColumnBuilder builder{basis.omega(), {}, {}};
  const OneBody term{m, 1.0};
  std::vector<Amplitude> all;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (v[k] == 0.0) continue;
    builder.acc.clear();
    builder.apply(term, basis.state(k));
    for (const Amplitude& a : builder.acc) all.push_back({a.state, a.amplitude * v[k]});
  }
  builder.acc = std::move(all);
  builder.merge();
  FockVector out;
  out.reserve(builder.acc.size());
  for (const Amplitude& a : builder.acc) out.emplace_back(a.state, a.amplitude);
  return out;
}

double inner_product(const FockVector& a, const FockVector& b) noexcept {
  double sum = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) {
      ++i;
    } else if (b[j].first < a[i].first) {
      ++j;
    } else {
      sum += a[i++].second * b[j++].second;
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// SU(4) generators

namespace {

// Pauli matrix with its imaginary unit factored out: sigma = phase * real.
struct Pauli {
  std::array<std::array<double, 2>, 2> real;
  bool imaginary;
};

Pauli pauli(int axis) {
  switch (axis) {
    case 0: return {{{{0.0, 1.0}, {1.0, 0.0}}}, false};
    case 1: return {{{{0.0, -1.0}, {1.0, 0.0}}}, true};  // sigma_y = i [[0,-1],[1,0]]
    case 2: return {{{{1.0, 0.0}, {0.0, -1.0}}}, false};
    default: return {{{{1.0, 0.0}, {0.0, 1.0}}}, false};  // identity
  }
}

// spin (x) isospin acting on species index 2 t + s.
Su4Generator kron(std::string name, int spin_axis, double spin_scale, int iso_axis, double iso_scale) {
  const Pauli s = pauli(spin_axis);
  const Pauli t = pauli(iso_axis);
  Su4Generator g;
  g.name = std::move(name);
  g.imaginary = s.imaginary != t.imaginary;
  const double sign = (s.imaginary && t.imaginary) ? -1.0 : 1.0;  // i * i
  for (int t1 = 0; t1 < 2; ++t1)
    for (int s1 = 0; s1 < 2; ++s1)
      for (int t2 = 0; t2 < 2; ++t2)
        for (int s2 = 0; s2 < 2; ++s2) {
          g.matrix[static_cast<std::size_t>(2 * t1 + s1)][static_cast<std::size_t>(2 * t2 + s2)] =
              sign * spin_scale * s.real[s1][s2] * iso_scale * t.real[t1][t2];
        }
  return g;
}

}  // namespace

const std::vector<Su4Generator>& su4_generator_matrices() {
  static const std::vector<Su4Generator> gens = [] {
    constexpr char kAxis[] = {'x', 'y', 'z'};
    std::vector<Su4Generator> out;
    for (int a = 0; a < 3; ++a) out.push_back(kron(std::string("S_") + kAxis[a], a, 0.5, 3, 1.0));
    for (int b = 0; b < 3; ++b) out.push_back(kron(std::string("T_") + kAxis[b], 3, 1.0, b, 0.5));
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) out.push_back(kron(std::string("ST_") + kAxis[a] + kAxis[b], a, 0.5, b, 0.5));
    return out;
  }();
  return gens;
}

const Su4Generator& su4_generator(std::string_view name) {
  for (const auto& g : su4_generator_matrices()) {
    if (g.name == name) return g;
  }
  throw DomainError("unknown SU(4) generator " + std::string(name));
}

std::vector<Su4GeneratorOperator> su4_generators(const SectorBasis& basis) {
  if (basis.constraints().active()) {
    throw ConstraintError("SU(4) generators need a basis without S_z/T_z constraints");
  }
  std::vector<Su4GeneratorOperator> out;
  for (const auto& g : su4_generator_matrices()) {
    OperatorExpression expr;
    expr.hermitian = !g.imaginary;
    expr.add(OneBody{g.matrix, 1.0});
    out.push_back({g.name, build_operator(expr, basis), g.imaginary});
  }
  return out;
}

}  // namespace pairing
