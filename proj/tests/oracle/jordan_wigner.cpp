#include "oracle/jordan_wigner.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

namespace {

Sparse from_dense(const Eigen::Matrix2d& m) { return m.sparseView(); }

// Spin-1/2 coupling <1/2 a, 1/2 b | S M>, a, b in {+1, -1} (doubled).
double cg_half(int a, int b, int S, int M) {
  const double r = 1.0 / std::sqrt(2.0);
  if (S == 0) {
    if (M != 0) return 0.0;
    if (a == 1 && b == -1) return r;
    if (a == -1 && b == 1) return -r;
    return 0.0;
  }
  if (M == 1) return a == 1 && b == 1 ? 1.0 : 0.0;
  if (M == -1) return a == -1 && b == -1 ? 1.0 : 0.0;
  return a != b ? r : 0.0;
}

// <3/2 m1, 3/2 m2 | J M> with doubled m1, m2.
double cg_three_halves(int m1, int m2, int J, int M) {
  struct Entry {
    int J, M, m1, m2;
    double value;
  };
  const double r = std::sqrt(2.0) / 2.0;
  static const Entry table[] = {
      {0, 0, 3, -3, 0.5},  {0, 0, 1, -1, -0.5}, {0, 0, -1, 1, 0.5},  {0, 0, -3, 3, -0.5},
      {2, -2, -1, -3, r},  {2, -2, -3, -1, -r}, {2, -1, 1, -3, r},   {2, -1, -3, 1, -r},
      {2, 0, 3, -3, 0.5},  {2, 0, 1, -1, 0.5},  {2, 0, -1, 1, -0.5}, {2, 0, -3, 3, -0.5},
      {2, 1, 3, -1, r},    {2, 1, -1, 3, -r},   {2, 2, 3, 1, r},     {2, 2, 1, 3, -r},
  };
  for (const auto& e : table) {
    if (e.J == J && e.M == M && e.m1 == m1 && e.m2 == m2) return e.value;
  }
  return 0.0;
}

int species_from_st(int twice_s, int twice_t) { return (twice_s > 0 ? 0 : 1) + (twice_t > 0 ? 0 : 2); }
int species_from_m(int twice_m) { return (3 - twice_m) / 2; }

}  // namespace

JordanWigner::JordanWigner(int omega) : omega_(omega) {
  Eigen::Matrix2d id = Eigen::Matrix2d::Identity();
  Eigen::Matrix2d z;
  z << 1, 0, 0, -1;
  Eigen::Matrix2d lower;  // |0><1| : index 1 (occupied) -> index 0
  lower << 0, 1, 0, 0;
  for (int p = 0; p < modes(); ++p) {
    // Qubit q is bit q of the index, so the Kronecker order is q = modes-1 ... 0.
    Sparse op(1, 1);
    op.insert(0, 0) = 1.0;
    for (int q = modes() - 1; q >= 0; --q) {
      const Eigen::Matrix2d& m = q < p ? z : (q == p ? lower : id);
      Sparse next = Eigen::kroneckerProduct(op, from_dense(m)).eval();
      op = next;
    }
    annihilators_.push_back(op);
  }
}

const Sparse& JordanWigner::annihilate(int species, int level) const {
  return annihilators_.at(static_cast<std::size_t>(species * omega_ + level));
}

Sparse JordanWigner::create(int species, int level) const { return Sparse(annihilate(species, level).transpose()); }

Sparse JordanWigner::number(int species, int level) const {
  return Sparse(create(species, level) * annihilate(species, level));
}

Sparse JordanWigner::pair_st(int S, int ms, int T, int mt, int level) const {
  Sparse out(dim(), dim());
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      for (int t1 : {1, -1}) {
        for (int t2 : {1, -1}) {
          const double c = cg_half(s1, s2, S, ms) * cg_half(t1, t2, T, mt);
          if (c == 0.0) continue;
          out += (c / std::sqrt(2.0)) *
                 Sparse(create(species_from_st(s1, t1), level) * create(species_from_st(s2, t2), level));
        }
      }
    }
  }
  out.prune(1e-15);
  return out;
}

Sparse JordanWigner::pair_j(int J, int M, int level) const {
  Sparse out(dim(), dim());
  for (int m1 : {3, 1, -1, -3}) {
    for (int m2 : {3, 1, -1, -3}) {
      const double c = cg_three_halves(m1, m2, J, M);
      if (c == 0.0) continue;
      out += (c / std::sqrt(2.0)) * Sparse(create(species_from_m(m1), level) * create(species_from_m(m2), level));
    }
  }
  out.prune(1e-15);
  return out;
}

Sparse JordanWigner::hamiltonian(const std::string& channels, double G, const std::vector<double>& eps) const {
  struct Channel {
    bool spin32;
    int a, b, c, d;  // (S, M_S, T, M_T) or (J, M, -, -)
  };
  std::vector<Channel> list;
  if (channels == "identical") {
    list = {{false, 0, 0, 1, 1}, {false, 0, 0, 1, -1}};
  } else if (channels == "isovector") {
    list = {{false, 0, 0, 1, 1}, {false, 0, 0, 1, 0}, {false, 0, 0, 1, -1}};
  } else if (channels == "su4") {
    list = {{false, 0, 0, 1, 1}, {false, 0, 0, 1, 0}, {false, 0, 0, 1, -1},
            {false, 1, 1, 0, 0}, {false, 1, 0, 0, 0}, {false, 1, -1, 0, 0}};
  } else if (channels == "spin32") {
    list = {{true, 0, 0, 0, 0}};
    for (int M = -2; M <= 2; ++M) list.push_back({true, 2, M, 0, 0});
  } else {
    throw std::invalid_argument("unknown channel set " + channels);
  }

  Sparse h(dim(), dim());
  for (const auto& ch : list) {
    Sparse sum(dim(), dim());
    for (int i = 0; i < omega_; ++i) sum += ch.spin32 ? pair_j(ch.a, ch.b, i) : pair_st(ch.a, ch.b, ch.c, ch.d, i);
    h += -G * Sparse(sum * Sparse(sum.transpose()));
  }
  for (int i = 0; i < omega_ && i < static_cast<int>(eps.size()); ++i) {
    for (int s = 0; s < 4; ++s) h += eps[static_cast<std::size_t>(i)] * number(s, i);
  }
  h.prune(1e-14);
  return h;
}

std::vector<unsigned long long> JordanWigner::sector_states(int n) const {
  std::vector<unsigned long long> out;
  for (unsigned long long s = 0; s < static_cast<unsigned long long>(dim()); ++s) {
    if (std::popcount(s) == n) out.push_back(s);
  }
  return out;
}

Eigen::MatrixXd JordanWigner::sector(const Sparse& op, int n) const {
  const auto states = sector_states(n);
  std::vector<Eigen::Index> position(static_cast<std::size_t>(dim()), -1);
  for (std::size_t k = 0; k < states.size(); ++k) position[states[k]] = static_cast<Eigen::Index>(k);
  const auto m = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m, m);
  for (int col = 0; col < op.outerSize(); ++col) {
    for (Sparse::InnerIterator it(op, col); it; ++it) {
      const Eigen::Index r = position[static_cast<std::size_t>(it.row())];
      const Eigen::Index c = position[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) out(r, c) = it.value();
    }
  }
  return out;
}

}  // namespace oracle
