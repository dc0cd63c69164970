#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle/jordan_wigner.hpp"
#include "pairing/clebsch.hpp"
#include "pairing/errors.hpp"
#include "pairing/fock.hpp"
#include "pairing/kernels.hpp"
#include "pairing/models.hpp"

using namespace pairing;

namespace {

Eigen::MatrixXd to_dense(const SparseOperator& op) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(op.dim), static_cast<Eigen::Index>(op.dim));
  for (std::size_t r = 0; r < op.dim; ++r) {
    for (std::size_t k = op.row_offsets[r]; k < op.row_offsets[r + 1]; ++k) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(op.col_indices[k])) = op.values[k];
    }
  }
  return m;
}

std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5;
  return v;
}

double commutator_norm(const SparseOperator& a, const SparseOperator& b, const std::vector<double>& v) {
  std::vector<double> t(v.size());
  std::vector<double> ab(v.size());
  std::vector<double> ba(v.size());
  b.apply(v, t);
  a.apply(t, ab);
  a.apply(v, t);
  b.apply(t, ba);
  kernels::axpy(-1.0, ba, ab);
  return std::sqrt(kernels::dot(ab, ab));
}

const std::vector<PairChannel> kIsospinChannels = {PairChannel::kPm1, PairChannel::kP0, PairChannel::kPp1,
                                                   PairChannel::kQm1, PairChannel::kQ0, PairChannel::kQp1};

}  // namespace

TEST_SUITE("fock") {
  TEST_CASE("species labels") {
    CHECK(Species{0}.twice_sz() == 1);
    CHECK(Species{0}.twice_tz() == 1);
    CHECK(Species{3}.twice_sz() == -1);
    CHECK(Species{3}.twice_tz() == -1);
    for (int i = 0; i < 4; ++i) {
      const Species s{i};
      CHECK(Species::from_nuclear(s.twice_sz(), s.twice_tz()).index == i);
      CHECK(Species::from_spin32(s.twice_m()).index == i);
    }
    CHECK(bit_position(2, 1, 3) == 7);
  }

  TEST_CASE("fermionic signs follow the occupied-bits-below rule") {
    int sign = 0;
    const FockState vac;
    const auto one = vac.create(3, sign);
    REQUIRE(one);
    CHECK(sign == 1);
    const auto two = one->create(1, sign);
    REQUIRE(two);
    CHECK(sign == 1);
    const auto blocked = two->create(3, sign);
    CHECK_FALSE(blocked);
    // a_3 on |1,3> passes bit 1: sign -1.
    const auto back = two->annihilate(3, sign);
    REQUIRE(back);
    CHECK(sign == -1);
    CHECK(back->bits() == 0b10);
  }

  TEST_CASE("creating then annihilating a pair returns the state with amplitude +1") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 200; ++trial) {
      const FockState s(rng() & 0xFFFFULL);
      const int x = static_cast<int>(rng() % 16);
      int y = static_cast<int>(rng() % 16);
      if (y == x) y = (y + 1) % 16;
      if (s.occupied(x) || s.occupied(y)) continue;
      int total = 1;
      int sign = 0;
      auto t = s.create(y, sign);
      total *= sign;
      t = t->create(x, sign);  // a^dagger_x a^dagger_y
      total *= sign;
      t = t->annihilate(x, sign);  // a_y a_x: a_x first
      total *= sign;
      t = t->annihilate(y, sign);
      total *= sign;
      CHECK(t->bits() == s.bits());
      CHECK(total == 1);
    }
  }

  TEST_CASE("sector enumeration") {
    CHECK(enumerate_basis(1, 0).size() == 1);
    CHECK(enumerate_basis(1, 2).size() == 6);
    CHECK(enumerate_basis(2, 4).size() == 70);
    for (int omega = 1; omega <= 3; ++omega) {
      for (int n = 0; n <= 4 * omega; ++n) {
        const SectorBasis b = enumerate_basis(omega, n);
        CHECK(b.size() == binomial(4 * omega, n));
        CHECK(sector_dimension(omega, n) == b.size());
        for (std::size_t k = 0; k < b.size(); ++k) {
          CHECK(b.state(k).particle_count() == n);
          CHECK(b.index_of(b.state(k)) == k);
          if (k > 0) CHECK(b.state(k - 1) < b.state(k));
        }
      }
    }
  }

  TEST_CASE("constrained sectors") {
    const SectorConstraints c{0, 0};
    const SectorBasis b = enumerate_basis(3, 4, c);
    CHECK(sector_dimension(3, 4, c) == b.size());
    std::size_t brute = 0;
    const SectorBasis full = enumerate_basis(3, 4);
    for (const FockState s : full.states()) {
      int sz = 0;
      int tz = 0;
      for (int sp = 0; sp < 4; ++sp) {
        for (int i = 0; i < 3; ++i) {
          if (s.occupied(bit_position(sp, i, 3))) {
            sz += Species{sp}.twice_sz();
            tz += Species{sp}.twice_tz();
          }
        }
      }
      if (sz == 0 && tz == 0) {
        ++brute;
        CHECK(b.index_of(s).has_value());
      }
    }
    CHECK(brute == b.size());
  }

  TEST_CASE("enumeration errors") {
    CHECK_THROWS_AS(enumerate_basis(2, 9), DomainError);
    CHECK_THROWS_AS(enumerate_basis(0, 0), DomainError);
    CHECK_THROWS_AS(enumerate_basis(17, 1), DomainError);
    CHECK_THROWS_AS(enumerate_basis(6, 12, {}, 1000), CapacityError);
  }

  TEST_CASE("Clebsch-Gordan values") {
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(clebsch_gordan(1, 1, 1, -1, 0, 0) == doctest::Approx(r).epsilon(1e-15));
    CHECK(clebsch_gordan(1, -1, 1, 1, 0, 0) == doctest::Approx(-r).epsilon(1e-15));
    CHECK(clebsch_gordan(1, 1, 1, 1, 2, 2) == doctest::Approx(1.0));
    CHECK(clebsch_gordan(3, 3, 3, -3, 0, 0) == doctest::Approx(0.5));
    CHECK(clebsch_gordan(3, 1, 3, -1, 0, 0) == doctest::Approx(-0.5));
    CHECK(clebsch_gordan(3, 3, 3, 1, 4, 4) == doctest::Approx(r));
    CHECK(clebsch_gordan(3, -1, 3, 1, 4, 0) == doctest::Approx(-0.5));
    CHECK(clebsch_gordan(1, 1, 1, 1, 0, 0) == 0.0);
  }

  TEST_CASE("pair creators on the vacuum") {
    const FockState vac;
    // P+1: spin-singlet of the two proton species (0 and 1) on the level.
    const auto p = pair_create(PairChannel::kPp1, 1, vac, 2);
    REQUIRE(p.size() == 1);
    CHECK(p[0].state.bits() == ((1ULL << bit_position(0, 1, 2)) | (1ULL << bit_position(1, 1, 2))));
    CHECK(std::abs(p[0].amplitude) == doctest::Approx(1.0));
    const auto q0 = pair_create(PairChannel::kQ0, 0, vac, 2);
    CHECK(q0.size() == 2);
    for (const auto& a : q0) CHECK(std::abs(a.amplitude) == doctest::Approx(1.0 / std::sqrt(2.0)));

    const FockState full((1ULL << 0) | (1ULL << 2) | (1ULL << 4) | (1ULL << 6));  // level 0 of Omega = 2
    CHECK(pair_create(PairChannel::kQ0, 0, full, 2).empty());
  }

  TEST_CASE("pair operators match the Jordan-Wigner oracle element by element") {
    const oracle::JordanWigner jw(2);
    struct Case {
      PairChannel c;
      bool spin32;
      int a, b, cc, d;
    };
    const Case cases[] = {
        {PairChannel::kPm1, false, 0, 0, 1, -1}, {PairChannel::kP0, false, 0, 0, 1, 0},
        {PairChannel::kPp1, false, 0, 0, 1, 1},  {PairChannel::kQm1, false, 1, -1, 0, 0},
        {PairChannel::kQ0, false, 1, 0, 0, 0},   {PairChannel::kQp1, false, 1, 1, 0, 0},
        {PairChannel::kS, true, 0, 0, 0, 0},     {PairChannel::kDm2, true, 2, -2, 0, 0},
        {PairChannel::kDm1, true, 2, -1, 0, 0},  {PairChannel::kD0, true, 2, 0, 0, 0},
        {PairChannel::kDp1, true, 2, 1, 0, 0},   {PairChannel::kDp2, true, 2, 2, 0, 0},
    };
    for (const auto& cs : cases) {
      CAPTURE(channel_name(cs.c));
      for (int level = 0; level < 2; ++level) {
        const oracle::Sparse ref = cs.spin32 ? jw.pair_j(cs.a, cs.b, level) : jw.pair_st(cs.a, cs.b, cs.cc, cs.d, level);
        // Compare on every basis state of N = 0..6 particles.
        for (int n = 0; n <= 6; ++n) {
          const SectorBasis src = enumerate_basis(2, n);
          const SectorBasis dst = enumerate_basis(2, n + 2);
          double worst = 0.0;
          for (std::size_t k = 0; k < src.size(); ++k) {
            Eigen::VectorXd col = ref.col(static_cast<Eigen::Index>(src.state(k).bits()));
            for (const auto& amp : pair_create(cs.c, level, src.state(k), 2)) {
              col(static_cast<Eigen::Index>(amp.state.bits())) -= amp.amplitude;
              CHECK(dst.index_of(amp.state).has_value());
            }
            worst = std::max(worst, col.cwiseAbs().maxCoeff());
          }
          CHECK(worst <= 1e-14);
        }
      }
    }
  }

  TEST_CASE("annihilators are the transposes of the creators") {
    for (PairChannel c : {PairChannel::kP0, PairChannel::kQm1, PairChannel::kS, PairChannel::kD0, PairChannel::kDp2}) {
      const SectorBasis two = enumerate_basis(2, 4);
      const SectorBasis zero = enumerate_basis(2, 2);
      for (std::size_t k = 0; k < zero.size(); ++k) {
        for (const auto& up : pair_create(c, 1, zero.state(k), 2)) {
          const auto down = pair_annihilate(c, 1, up.state, 2);
          const auto it = std::find_if(down.begin(), down.end(),
                                       [&](const Amplitude& a) { return a.state == zero.state(k); });
          REQUIRE(it != down.end());
          CHECK(it->amplitude == doctest::Approx(up.amplitude).epsilon(1e-15));
        }
      }
      (void)two;
    }
  }

  TEST_CASE("isovector pair counting on one level gives 3") {
    const SectorBasis b = enumerate_basis(1, 2);
    OperatorExpression expr;
    expr.add(SeparablePairing{{PairChannel::kPm1, PairChannel::kP0, PairChannel::kPp1}, 1.0});
    const SparseOperator op = build_operator(expr, b);
    double trace = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) trace += op.element(k, k);
    CHECK(trace == doctest::Approx(3.0));
  }

  TEST_CASE("number operator is diagonal with the particle count") {
    const SectorBasis b = enumerate_basis(2, 3);
    OperatorExpression expr;
    expr.add(NumberTerm{});
    const SparseOperator op = build_operator(expr, b);
    CHECK(op.nnz() == b.size());
    for (std::size_t k = 0; k < b.size(); ++k) CHECK(op.element(k, k) == 3.0);
  }

  TEST_CASE("single level six-channel Hamiltonian is minus the identity on pairs") {
    const SectorBasis b = enumerate_basis(1, 2);
    OperatorExpression expr;
    expr.add(SeparablePairing{kIsospinChannels, -1.0});
    const Eigen::MatrixXd h = to_dense(build_operator(expr, b));
    CHECK((h + Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() <= 1e-15);
  }

  TEST_CASE("Hamiltonian matrices match the oracle in every sector") {
    const oracle::JordanWigner jw(2);
    const std::vector<double> eps = {0.0, 0.25};
    struct Case {
      ModelClass cls;
      const char* channels;
    };
    for (const Case cs : {Case{ModelClass::kIdentical, "identical"}, Case{ModelClass::kIsovector, "isovector"},
                          Case{ModelClass::kSu4Rg, "su4"}, Case{ModelClass::kSpin32Rg, "spin32"}}) {
      CAPTURE(cs.channels);
      ModelSpec spec;
      spec.model_class = cs.cls;
      spec.omega = 2;
      spec.coupling = 0.7;
      spec.level_energies = eps;
      const oracle::Sparse ref = jw.hamiltonian(cs.channels, 0.7, eps);
      for (int n = 0; n <= 8; ++n) {
        spec.n_particles = n;
        const SectorBasis b = enumerate_basis(2, n);
        const Eigen::MatrixXd mine = to_dense(build_hamiltonian(spec, b));
        CHECK((mine - jw.sector(ref, n)).cwiseAbs().maxCoeff() <= 1e-13);
      }
    }
  }

  TEST_CASE("built operators are symmetric without stored zeros") {
    ModelSpec spec;
    spec.model_class = ModelClass::kSu4Rg;
    spec.omega = 3;
    spec.n_particles = 4;
    spec.coupling = 0.15;
    spec.coupling_scale = CouplingScale::kBulk;
    const SectorBasis b = enumerate_basis(3, 4);
    const SparseOperator h = build_hamiltonian(spec, b);
    CHECK(h.hermitian);
    CHECK(h.symmetry_residual() <= 1e-13 * h.max_abs());
    for (double v : h.values) CHECK(std::abs(v) > 1e-15);
  }

  TEST_CASE("pair products leaving a constrained sector raise ConstraintError") {
    const SectorBasis b = enumerate_basis(2, 2, SectorConstraints{0, 0});
    OperatorExpression expr;
    expr.hermitian = false;
    expr.add(PairProduct{PairChannel::kPp1, 0, PairChannel::kP0, 1, 1.0});  // changes T_z
    CHECK_THROWS_AS(build_operator(expr, b), ConstraintError);
  }

  TEST_CASE("T_z generator counts protons minus neutrons over two") {
    const SectorBasis b = enumerate_basis(2, 4);
    const auto gens = su4_generators(b);
    const auto tz = std::find_if(gens.begin(), gens.end(), [](const auto& g) { return g.name == "T_z"; });
    REQUIRE(tz != gens.end());
    // species 0, 1, 2 protons/neutrons: 0 (p up), 1 (p down), 2 (n up), 3 (n down)
    const FockState s((1ULL << bit_position(0, 0, 2)) | (1ULL << bit_position(1, 0, 2)) |
                      (1ULL << bit_position(0, 1, 2)) | (1ULL << bit_position(2, 1, 2)));
    const auto k = *b.index_of(s);
    CHECK(tz->op.element(k, k) == doctest::Approx(1.0));
    CHECK(gens.size() == 15);
    CHECK_THROWS(su4_generators(enumerate_basis(2, 4, SectorConstraints{0, 0})));
  }

  TEST_CASE("generators are traceless with Tr M^2 = 1 (spin, isospin) or 1/4 (tensor)") {
    for (const auto& g : su4_generator_matrices()) {
      double trace = 0.0;
      double tr_sq = 0.0;
      for (int a = 0; a < 4; ++a) {
        trace += g.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)];
        for (int b = 0; b < 4; ++b) {
          tr_sq += g.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] *
                   g.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }
      }
      CHECK(trace == doctest::Approx(0.0));
      CHECK(tr_sq == doctest::Approx(g.name.rfind("ST_", 0) == 0 ? 0.25 : 1.0));
    }
  }

  TEST_CASE("SU(4) invariance of the symmetric Hamiltonians and its breaking") {
    const SectorBasis b = enumerate_basis(2, 4);
    const auto gens = su4_generators(b);
    const auto v = random_vector(b.size(), 99);
    const double vn = std::sqrt(kernels::dot(v, v));
    ModelSpec spec;
    spec.omega = 2;
    spec.n_particles = 4;
    spec.coupling = 1.0;
    for (ModelClass cls : {ModelClass::kSu4Seniority, ModelClass::kSu4Rg, ModelClass::kSpin32Rg}) {
      spec.model_class = cls;
      const SparseOperator h = build_hamiltonian(spec, b);
      for (const auto& g : gens) CHECK(commutator_norm(h, g.op, v) <= 1e-12 * h.max_abs() * vn);
    }
    // Isovector pairing keeps isospin but breaks the spin-isospin tensor.
    spec.model_class = ModelClass::kIsovector;
    const SparseOperator iso = build_hamiltonian(spec, b);
    double broken = 0.0;
    for (const auto& g : gens) {
      const double c = commutator_norm(iso, g.op, v);
      if (g.name.rfind("T_", 0) == 0 || g.name.rfind("S_", 0) == 0) CHECK(c <= 1e-12 * vn);
      if (g.name.rfind("ST_", 0) == 0) broken = std::max(broken, c);
    }
    CHECK(broken > 1e-3);
    // Identical-particle pairing breaks T_x (it mixes pp and nn pairs unequally with pn).
    spec.model_class = ModelClass::kIdentical;
    const SparseOperator ident = build_hamiltonian(spec, b);
    const auto tx = std::find_if(gens.begin(), gens.end(), [](const auto& g) { return g.name == "T_x"; });
    CHECK(commutator_norm(ident, tx->op, v) > 1e-3);
  }
}
