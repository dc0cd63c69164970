#include "pairing/ed.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "pairing/errors.hpp"
#include "pairing/kernels.hpp"

namespace pairing {

namespace {

using Vector = std::vector<double>;

double norm(const Vector& v) { return std::sqrt(kernels::dot(v, v)); }

// Removes the components of `w` along every vector of `basis` (two passes).
void orthogonalize(Vector& w, const std::vector<Vector>& basis, std::size_t count) {
  for (int pass = 0; pass < 2; ++pass) {
    for (std::size_t i = 0; i < count; ++i) {
      const double c = kernels::dot(basis[i], w);
      kernels::axpy(-c, basis[i], w);
    }
  }
}

// Uniform in [-1, 1) from the 53 high bits; the mapping is fixed so the start
// vector does not depend on the standard library's distributions.
Vector random_vector(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  Vector v(dim);
  for (double& x : v) x = 2.0 * static_cast<double>(engine() >> 11) * 0x1.0p-53 - 1.0;
  return v;
}

struct RitzPair {
  double value = 0.0;
  double estimate = 0.0;  // |beta_m s_m|
  Eigen::VectorXd coefficients;
};

struct LanczosCycle {
  std::vector<Vector> basis;  // Krylov vectors
  std::vector<RitzPair> ritz;  // ascending
  bool exhausted = false;      // invariant subspace reached
};

class Solver {
 public:
  Solver(const SparseOperator& h, const LanczosOptions& options)
      : h_(h), options_(options), scale_(std::max(1.0, h.max_abs())) {
    budget_ = options.max_iterations != 0 ? options.max_iterations
                                          : std::min<std::size_t>(10 * std::max<std::size_t>(h.dim, 1), 50000);
    budget_ = std::max<std::size_t>(budget_, 2 * std::min(options.krylov_size, h.dim) + 10);
  }

  EigenResult run(std::size_t k) {
    std::uint64_t run_index = 0;
    while (true) {
      if (locked_.size() == h_.dim) break;
      const bool verifying = locked_.size() >= k;
      const double target = verifying ? kth_locked(k) : 0.0;
      const auto found = converge_lowest(options_.seed + run_index++, verifying ? 1 : k - locked_.size());
      if (verifying) {
        // Everything left in the complement lies above the k-th value: done.
        if (found.front().value >= target - 10.0 * options_.tolerance) break;
      }
      for (const auto& [value, vec] : found) lock(value, vec);
    }

    std::vector<std::size_t> order(locked_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return locked_energies_[a] < locked_energies_[b]; });
    EigenResult result;
    result.iterations = products_;
    for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
      result.energies.push_back(locked_energies_[order[i]]);
      result.vectors.push_back(locked_[order[i]]);
      result.residuals.push_back(residual(locked_[order[i]], locked_energies_[order[i]]));
      if (result.residuals.back() > options_.tolerance) {
        std::ostringstream msg;
        msg << "eigenpair " << i << " residual " << result.residuals.back() << " above tolerance "
            << options_.tolerance;
        throw ConvergenceError(msg.str());
      }
    }
    return result;
  }

 private:
  struct Found {
    double value;
    Vector vec;
  };

  double kth_locked(std::size_t k) const {
    Vector sorted = locked_energies_;
    std::sort(sorted.begin(), sorted.end());
    return sorted[k - 1];
  }

  void lock(double value, Vector vec) {
    locked_energies_.push_back(value);
    locked_.push_back(std::move(vec));
  }

  Vector multiply(const Vector& x) {
    if (products_ >= budget_) {
      std::ostringstream msg;
      msg << "Lanczos did not converge within " << budget_ << " matrix-vector products";
      throw ConvergenceError(msg.str());
    }
    ++products_;
    Vector y(x.size());
    h_.apply(x, y, options_.threads);
    return y;
  }

  double residual(const Vector& x, double value) {
    Vector y(x.size());
    h_.apply(x, y, options_.threads);
    kernels::axpy(-value, x, y);
    return norm(y);
  }

  LanczosCycle cycle(Vector start) {
    LanczosCycle c;
    const std::size_t room = h_.dim - locked_.size();
    const std::size_t m_max = std::min(options_.krylov_size, room);
    std::vector<double> alpha;
    std::vector<double> beta;

    orthogonalize(start, locked_, locked_.size());
    double nrm = norm(start);
    if (nrm < 1e-12) {
      // Start vector lies in the locked space; fall back to a fresh one.
      start = random_vector(h_.dim, options_.seed ^ (0x9e3779b97f4a7c15ULL * (locked_.size() + 1)));
      orthogonalize(start, locked_, locked_.size());
      nrm = norm(start);
    }
    kernels::scale(1.0 / nrm, start);
    c.basis.push_back(std::move(start));

    const double target = 0.1 * options_.tolerance;
    for (std::size_t j = 0; j < m_max; ++j) {
      Vector w = multiply(c.basis[j]);
      const double a = kernels::dot(c.basis[j], w);
      alpha.push_back(a);
      kernels::axpy(-a, c.basis[j], w);
      if (j > 0) kernels::axpy(-beta[j - 1], c.basis[j - 1], w);
      orthogonalize(w, locked_, locked_.size());
      orthogonalize(w, c.basis, c.basis.size());
      const double b = norm(w);
      beta.push_back(b);

      const bool last = (j + 1 == m_max);
      const bool breakdown = b < 1e-13 * scale_;
      if (breakdown || last || (j % 5 == 4)) {
        c.ritz = ritz_pairs(alpha, beta);
        if (breakdown || (j + 1 == room)) {
          for (auto& r : c.ritz) r.estimate = 0.0;
          c.exhausted = true;
          return c;
        }
        if (c.ritz.front().estimate <= target || last) return c;
      }
      kernels::scale(1.0 / b, w);
      c.basis.push_back(std::move(w));
    }
    return c;
  }

  static std::vector<RitzPair> ritz_pairs(const std::vector<double>& alpha, const std::vector<double>& beta) {
    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(m);
    Eigen::VectorXd sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    std::vector<RitzPair> out(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
      auto& r = out[static_cast<std::size_t>(i)];
      r.value = es.eigenvalues()(i);
      r.coefficients = es.eigenvectors().col(i);
      r.estimate = std::abs(beta.back() * r.coefficients(m - 1));
    }
    return out;
  }

  static Vector ritz_vector(const LanczosCycle& c, const RitzPair& r) {
    Vector x(c.basis.front().size(), 0.0);
    for (std::size_t i = 0; i < static_cast<std::size_t>(r.coefficients.size()); ++i) {
      kernels::axpy(r.coefficients(static_cast<Eigen::Index>(i)), c.basis[i], x);
    }
    kernels::scale(1.0 / norm(x), x);
    return x;
  }

  // Runs restarted Lanczos in the complement of the locked space until the
  // lowest Ritz pair meets the tolerance; returns it plus up to want - 1 further
  // converged pairs.
  std::vector<Found> converge_lowest(std::uint64_t seed, std::size_t want) {
    Vector start = random_vector(h_.dim, seed);
    while (true) {
      LanczosCycle c = cycle(std::move(start));
      std::vector<Found> out;
      const Vector lowest = ritz_vector(c, c.ritz.front());
      const double res = residual_against_locked(lowest, c.ritz.front().value);
      if (res <= 0.5 * options_.tolerance || (c.exhausted && res <= options_.tolerance)) {
        out.push_back({c.ritz.front().value, lowest});
        for (std::size_t i = 1; i < c.ritz.size() && out.size() < want; ++i) {
          if (c.ritz[i].estimate > 0.1 * options_.tolerance) continue;
          Vector x = ritz_vector(c, c.ritz[i]);
          if (residual_against_locked(x, c.ritz[i].value) <= 0.5 * options_.tolerance) {
            out.push_back({c.ritz[i].value, std::move(x)});
          }
        }
        return out;
      }
      start = lowest;
    }
  }

  double residual_against_locked(const Vector& x, double value) { return residual(x, value); }

  const SparseOperator& h_;
  LanczosOptions options_;
  double scale_;
  std::size_t budget_ = 0;
  std::size_t products_ = 0;
  std::vector<Vector> locked_;
  std::vector<double> locked_energies_;
};

}  // namespace

EigenResult lowest_states(const SparseOperator& h, std::size_t k, const LanczosOptions& options) {
  if (k == 0 || k > h.dim) {
    std::ostringstream msg;
    msg << "requested " << k << " eigenpairs from an operator of dimension " << h.dim;
    throw DomainError(msg.str());
  }
  if (!h.hermitian) throw DomainError("Lanczos needs a Hermitian operator");
  Solver solver(h, options);
  return solver.run(k);
}

std::vector<double> dense_spectrum(const SparseOperator& h) {
  const auto dim = static_cast<Eigen::Index>(h.dim);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t r = 0; r < h.dim; ++r) {
    for (std::size_t k = h.row_offsets[r]; k < h.row_offsets[r + 1]; ++k) {
      dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(h.col_indices[k])) = h.values[k];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense, Eigen::EigenvaluesOnly);
  return {es.eigenvalues().data(), es.eigenvalues().data() + dim};
}

// ---------------------------------------------------------------------------
// Observables

double Occupations::total() const noexcept {
  double sum = 0.0;
  for (const auto& level : n) {
    for (double x : level) sum += x;
  }
  return sum;
}

Occupations Occupations::species_averaged() const {
  Occupations out = *this;
  for (auto& level : out.n) {
    double mean = 0.0;
    for (double x : level) mean += x;
    mean /= kSpeciesCount;
    level.fill(mean);
  }
  return out;
}

Occupations occupations(std::span<const double> state, const SectorBasis& basis) {
  const std::vector<double> copy(state.begin(), state.end());
  return occupations(std::span<const std::vector<double>>(&copy, 1), basis);
}

Occupations occupations(std::span<const std::vector<double>> states, const SectorBasis& basis) {
  Occupations occ;
  occ.omega = basis.omega();
  occ.n.assign(static_cast<std::size_t>(basis.omega()), {});
  if (states.empty()) return occ;
  for (const auto& v : states) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const double w = v[k] * v[k];
      if (w == 0.0) continue;
      const FockState s = basis.state(k);
      for (int sp = 0; sp < kSpeciesCount; ++sp) {
        for (int i = 0; i < basis.omega(); ++i) {
          if (s.occupied(bit_position(sp, i, basis.omega()))) {
            occ.n[static_cast<std::size_t>(i)][static_cast<std::size_t>(sp)] += w;
          }
        }
      }
    }
  }
  const double inv = 1.0 / static_cast<double>(states.size());
  for (auto& level : occ.n) {
    for (double& x : level) x *= inv;
  }
  return occ;
}

double canonical_gap(const Occupations& occ, double g, int omega) {
  double sum = 0.0;
  for (const auto& level : occ.n) {
    for (double x : level) sum += std::sqrt(std::max(0.0, x * (1.0 - x)));
  }
  return 0.125 * (g / omega) * sum;
}

GapObservables gap_observables(const std::map<int, double>& energies, int quartets) {
  const int base = 4 * quartets;
  auto at = [&](int n) {
    const auto it = energies.find(n);
    if (it == energies.end()) {
      std::ostringstream msg;
      msg << "gap observables need the ground energy at N=" << n;
      throw DomainError(msg.str());
    }
    return it->second;
  };
  const double e0 = at(base);
  const double e1 = at(base + 1);
  const double e2 = at(base + 2);
  return {0.5 * (2.0 * e1 - e0 - e2), e1 - e0};
}

namespace {

std::optional<double> snap_angular_momentum(double casimir) {
  const double j = 0.5 * (-1.0 + std::sqrt(std::max(0.0, 1.0 + 4.0 * casimir)));
  const double snapped = 0.5 * std::round(2.0 * j);
  if (std::abs(snapped * (snapped + 1.0) - casimir) > 1e-6) return std::nullopt;
  return snapped;
}

}  // namespace

std::vector<StateLabels> label_states(std::span<const double> energies, std::span<const std::vector<double>> vectors,
                                      const SectorBasis& basis, double degeneracy_tolerance) {
  const auto& gens = su4_generator_matrices();
  std::vector<StateLabels> labels(energies.size());

  std::size_t begin = 0;
  while (begin < energies.size()) {
    std::size_t end = begin + 1;
    while (end < energies.size() &&
           std::abs(energies[end] - energies[begin]) <= degeneracy_tolerance * std::max(1.0, std::abs(energies[begin]))) {
      ++end;
    }
    const auto m = static_cast<Eigen::Index>(end - begin);
    Eigen::MatrixXd spin = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd iso = Eigen::MatrixXd::Zero(m, m);
    Eigen::MatrixXd casimir = Eigen::MatrixXd::Zero(m, m);
    for (const auto& g : gens) {
      std::vector<FockVector> images;
      images.reserve(static_cast<std::size_t>(m));
      for (std::size_t i = begin; i < end; ++i) images.push_back(apply_one_body(g.matrix, vectors[i], basis));
      for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = a; b < m; ++b) {
          const double x = inner_product(images[static_cast<std::size_t>(a)], images[static_cast<std::size_t>(b)]);
          casimir(a, b) += x;
          if (g.name.rfind("S_", 0) == 0) spin(a, b) += x;
          if (g.name.rfind("T_", 0) == 0) iso(a, b) += x;
        }
      }
    }
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < a; ++b) {
        spin(a, b) = spin(b, a);
        iso(a, b) = iso(b, a);
        casimir(a, b) = casimir(b, a);
      }
    }
    // A generic combination of commuting Casimirs has the joint eigenvectors.
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(spin + phi * iso + (phi - 1.0) / 7.0 * casimir);
    for (Eigen::Index c = 0; c < m; ++c) {
      const Eigen::VectorXd u = es.eigenvectors().col(c);
      StateLabels& out = labels[begin + static_cast<std::size_t>(c)];
      out.spin = snap_angular_momentum(u.dot(spin * u));
      out.isospin = snap_angular_momentum(u.dot(iso * u));
      out.su4_casimir = u.dot(casimir * u);
    }
    begin = end;
  }
  return labels;
}

std::vector<Excitation> excitation_spectrum(const SparseOperator& h, const SectorBasis& basis, std::size_t k,
                                            const LanczosOptions& options, bool with_labels) {
  const EigenResult eig = lowest_states(h, k, options);
  std::vector<StateLabels> labels(eig.energies.size());
  if (with_labels) labels = label_states(eig.energies, eig.vectors, basis);
  std::vector<Excitation> out;
  out.reserve(eig.energies.size());
  for (std::size_t i = 0; i < eig.energies.size(); ++i) {
    out.push_back({eig.energies[i], eig.energies[i] - eig.energies.front(), labels[i]});
  }
  return out;
}

}  // namespace pairing
