#include "pairing/app.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pairing/bcs.hpp"
#include "pairing/ed.hpp"
#include "pairing/errors.hpp"
#include "pairing/models.hpp"
#include "pairing/seniority.hpp"

namespace pairing {

using nlohmann::ordered_json;

namespace {

ordered_json number(double x) { return round_significant(x); }

ordered_json optional_number(const std::optional<double>& x) {
  return x ? ordered_json(round_significant(*x)) : ordered_json(nullptr);
}

bool su4_symmetric(ModelClass c) {
  return c == ModelClass::kSu4Seniority || c == ModelClass::kSu4Rg || c == ModelClass::kSpin32Rg;
}

ordered_json model_json(const ModelSpec& m) {
  ordered_json j;
  j["class"] = model_class_name(m.model_class);
  j["omega"] = m.omega;
  j["n"] = m.n_particles;
  j["g"] = number(m.bulk_coupling());
  j["G"] = number(m.pair_strength());
  j["pair_basis"] = m.pair_basis == PairBasis::kSpin32 ? "spin32" : "isospin";
  return j;
}

// ---------------------------------------------------------------------------
// seniority

struct SeniorityRow {
  SeniorityModel model;
  int v = 0;
  std::optional<double> isospin;
  double reduced_isospin = 0.0;
  std::optional<int> lambda2;
  double energy = 0.0;
};

SeniorityRow seniority_row(const RunConfig& c) {
  const ModelSpec& m = c.model;
  SeniorityRow row{};
  switch (m.model_class) {
    case ModelClass::kIdentical:
      row.model = SeniorityModel::kIdentical;
      break;
    case ModelClass::kIsovector:
      row.model = SeniorityModel::kIsovector;
      break;
    case ModelClass::kSu4Seniority:
      row.model = SeniorityModel::kSu4;
      break;
    default:
      throw ConfigError("model.class: closed forms exist for identical, isovector and su4 only");
  }
  const int n = m.n_particles;
  const double G = m.pair_strength();
  row.v = c.seniority.value_or(n % 2);
  switch (row.model) {
    case SeniorityModel::kIdentical:
      row.energy = energy_identical(G, m.omega, n, row.v);
      break;
    case SeniorityModel::kIsovector: {
      const double ground_t = n % 2 == 1 ? 0.5 : static_cast<double>((n / 2) % 2);
      row.isospin = c.isospin.value_or(ground_t);
      row.reduced_isospin = c.seniority || c.isospin ? c.reduced_isospin : (n % 2 == 1 ? 0.5 : 0.0);
      row.energy = energy_isovector(G, m.omega, n, row.v, *row.isospin, row.reduced_isospin);
      break;
    }
    case SeniorityModel::kSu4:
      row.lambda2 = c.lambda2.value_or(row.v == 0 && n % 4 == 2 ? 1 : 0);
      row.energy = energy_su4(G, m.omega, n, *row.lambda2, row.v);
      break;
  }
  return row;
}

void seniority_task(const RunConfig& c, std::ostream& out) {
  const SeniorityRow row = seniority_row(c);
  if (c.format == "csv") {
    out << "model,omega,n,G,v,isospin,reduced_isospin,lambda2,energy\n";
    out << seniority_model_name(row.model) << ',' << c.model.omega << ',' << c.model.n_particles << ','
        << format_number(c.model.pair_strength()) << ',' << row.v << ','
        << (row.isospin ? format_number(*row.isospin) : "") << ','
        << (row.isospin ? format_number(row.reduced_isospin) : "") << ','
        << (row.lambda2 ? std::to_string(*row.lambda2) : "") << ',' << format_number(row.energy) << '\n';
    return;
  }
  ordered_json j;
  j["task"] = "seniority";
  j["model"] = seniority_model_name(row.model);
  j["omega"] = c.model.omega;
  j["n"] = c.model.n_particles;
  j["G"] = number(c.model.pair_strength());
  j["v"] = row.v;
  if (row.isospin) {
    j["isospin"] = number(*row.isospin);
    j["reduced_isospin"] = number(row.reduced_isospin);
  }
  if (row.lambda2) j["lambda2"] = *row.lambda2;
  j["energy"] = number(row.energy);

  const int n = c.model.n_particles;
  const int capacity = (row.model == SeniorityModel::kIdentical ? 2 : 4) * c.model.omega;
  if (n % 2 == 0 && n + 2 <= capacity) {
    const QuasiparticleEnergies q = quasiparticle_energies_seniority(c.model.bulk_coupling(), c.model.omega, n, row.model);
    ordered_json qj;
    qj["e_2q"] = optional_number(q.e_2q);
    qj["e_q_even"] = number(q.e_q_even);
    qj["e_q_odd"] = number(q.e_q_odd);
    qj["delta_oe"] = number(q.delta_oe);
    j["quasiparticle"] = qj;
  }
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// ed

LanczosOptions lanczos_for(const RunConfig& c) {
  LanczosOptions o = c.lanczos;
  o.threads = c.threads;
  return o;
}

void ed_task(const RunConfig& c, std::ostream& out) {
  const SectorBasis basis = enumerate_basis(c.model.omega, c.model.n_particles, c.constraints, c.dimension_cap);
  const SparseOperator h = build_hamiltonian(c.model, basis);
  const std::size_t k = std::min(c.k, basis.size());
  const EigenResult eig = lowest_states(h, k, lanczos_for(c));
  std::vector<StateLabels> labels(eig.energies.size());
  const bool with_labels = c.labels;
  if (with_labels) labels = label_states(eig.energies, eig.vectors, basis);

  if (c.format == "csv") {
    out << "index,energy,excitation,residual,spin,isospin,su4_casimir\n";
    for (std::size_t i = 0; i < eig.energies.size(); ++i) {
      out << i << ',' << format_number(eig.energies[i]) << ',' << format_number(eig.energies[i] - eig.energies[0])
          << ',' << format_number(eig.residuals[i]) << ',';
      if (with_labels) {
        out << (labels[i].spin ? format_number(*labels[i].spin) : "") << ','
            << (labels[i].isospin ? format_number(*labels[i].isospin) : "") << ','
            << format_number(labels[i].su4_casimir);
      } else {
        out << ",,";
      }
      out << '\n';
    }
    return;
  }
  ordered_json j;
  j["task"] = "ed";
  j["model"] = model_json(c.model);
  j["dimension"] = basis.size();
  j["iterations"] = eig.iterations;
  j["ground_energy"] = number(eig.energies.front());
  ordered_json states = ordered_json::array();
  for (std::size_t i = 0; i < eig.energies.size(); ++i) {
    ordered_json s;
    s["energy"] = number(eig.energies[i]);
    s["excitation"] = number(eig.energies[i] - eig.energies[0]);
    s["residual"] = number(eig.residuals[i]);
    if (with_labels) {
      s["spin"] = optional_number(labels[i].spin);
      s["isospin"] = optional_number(labels[i].isospin);
      s["su4_casimir"] = number(labels[i].su4_casimir);
    }
    states.push_back(s);
  }
  j["states"] = states;
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// bcs

ordered_json bcs_json(const BcsSolution& s, double eps_q) {
  ordered_json j;
  j["lambda"] = number(s.lambda);
  j["delta"] = number(s.delta);
  j["e_per_n"] = number(s.energy_per_particle);
  j["e_per_omega"] = number(s.energy_per_level);
  j["eps_q"] = number(eps_q);
  j["e_q"] = number(quasiparticle_energy(eps_q, s.lambda, s.delta));
  j["canonical_gap"] = number(s.canonical_gap);
  j["gap_residual"] = number(s.gap_residual);
  j["number_residual"] = number(s.number_residual);
  j["iterations"] = s.iterations;
  j["normal_phase"] = s.normal_phase;
  return j;
}

void write_flat(const ordered_json& j, std::ostream& out) {
  bool first = true;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() || value.is_array()) continue;
    out << (first ? "" : ",") << key;
    first = false;
  }
  out << '\n';
  first = true;
  for (const auto& [key, value] : j.items()) {
    if (value.is_object() || value.is_array()) continue;
    out << (first ? "" : ",");
    first = false;
    if (value.is_string()) {
      out << value.get<std::string>();
    } else if (value.is_number_float()) {
      out << format_number(value.get<double>());
    } else {
      out << value.dump();
    }
  }
  out << '\n';
}

void bcs_bulk_task(const RunConfig& c, std::ostream& out) {
  const double g = c.model.bulk_coupling();
  const BcsSolution s = solve_bulk(g, c.filling);
  ordered_json j;
  j["task"] = "bcs-bulk";
  j["g"] = number(g);
  j["filling"] = number(c.filling);
  j.update(bcs_json(s, c.eps_q.value_or(c.filling / 8.0)));
  if (c.format == "csv") {
    write_flat(j, out);
  } else {
    out << j.dump(2) << '\n';
  }
}

std::vector<double> bcs_levels(const ModelSpec& m) {
  return m.level_energies.empty() ? equally_spaced_levels(m.omega) : m.level_energies;
}

// Lowest level not fully occupied at zero coupling.
double blocked_level(const std::vector<double>& levels, int n) {
  std::vector<double> sorted = levels;
  std::sort(sorted.begin(), sorted.end());
  const auto index = static_cast<std::size_t>((n + 3) / 4);
  if (index >= sorted.size()) throw DomainError("no unoccupied level for the quasiparticle energy");
  return sorted[index];
}

void bcs_finite_task(const RunConfig& c, std::ostream& out) {
  const std::vector<double> levels = bcs_levels(c.model);
  const BcsSolution s = solve_discrete(levels, c.model.bulk_coupling(), c.model.omega, c.model.n_particles);
  ordered_json j;
  j["task"] = "bcs-finite";
  j["g"] = number(c.model.bulk_coupling());
  j["omega"] = c.model.omega;
  j["n"] = c.model.n_particles;
  j.update(bcs_json(s, c.eps_q.value_or(blocked_level(levels, c.model.n_particles))));
  if (c.format == "csv") {
    write_flat(j, out);
  } else {
    out << j.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// sweep

struct Ground {
  double energy = 0.0;
  Occupations occupations;
};

// Ground energy and occupations at particle number n. SU(4)-symmetric models
// are solved in the S_z = T_z = 0 (or 1/2) sector; level occupations are
// SU(4) scalars, so the species average of any state of the ground multiplet
// is the multiplet average. Other models use the full sector and average
// over the whole degenerate ground multiplet.
Ground ground_state(const RunConfig& c, ModelSpec spec, int n) {
  spec.n_particles = n;
  const LanczosOptions options = lanczos_for(c);
  if (su4_symmetric(spec.model_class)) {
    SectorConstraints sector;
    sector.twice_sz = n % 2;
    sector.twice_tz = n % 2;
    const SectorBasis basis = enumerate_basis(spec.omega, n, sector, c.dimension_cap);
    const SparseOperator h = build_hamiltonian(spec, basis);
    const EigenResult eig = lowest_states(h, 1, options);
    return {eig.energies.front(), occupations(eig.vectors.front(), basis).species_averaged()};
  }
  const SectorBasis basis = enumerate_basis(spec.omega, n, {}, c.dimension_cap);
  const SparseOperator h = build_hamiltonian(spec, basis);
  std::size_t k = std::min<std::size_t>(8, basis.size());
  while (true) {
    const EigenResult eig = lowest_states(h, k, options);
    const double e0 = eig.energies.front();
    std::size_t multiplet = 0;
    while (multiplet < eig.energies.size() && eig.energies[multiplet] - e0 <= 1e-8 * std::max(1.0, std::abs(e0))) {
      ++multiplet;
    }
    if (multiplet < eig.energies.size() || k == basis.size()) {
      const std::vector<std::vector<double>> vecs(eig.vectors.begin(), eig.vectors.begin() + static_cast<long>(multiplet));
      return {e0, occupations(vecs, basis)};
    }
    k = std::min(2 * k, basis.size());
  }
}

std::vector<SeriesRow> sweep_ed(const RunConfig& c) {
  std::vector<SeriesRow> rows;
  const double g = c.model.bulk_coupling();
  for (int value : c.values) {
    ModelSpec spec = c.model;
    int n = value;
    if (c.sweep_over == "omega") {
      spec.omega = value;
      spec.level_energies.clear();
      spec.coupling = g;
      spec.coupling_scale = CouplingScale::kBulk;
      const double target = c.filling * value;
      n = static_cast<int>(std::lround(target));
      if (std::abs(target - n) > 1e-9) throw ConfigError("task.filling: filling * omega must be an integer");
    }
    if (spec.omega > kMaxLevels) throw ConfigError("task.values: exact diagonalization supports at most 16 levels");
    if (n < 1 || n > 4 * spec.omega) throw ConfigError("task.values: particle number outside [1, 4 omega]");
    const Ground ground = ground_state(c, spec, n);
    rows.push_back({n, "e_per_n", ground.energy / n});
    if (n % 4 == 0 && n + 2 <= 4 * spec.omega) {
      std::map<int, double> energies{{n, ground.energy}};
      energies[n + 1] = ground_state(c, spec, n + 1).energy;
      energies[n + 2] = ground_state(c, spec, n + 2).energy;
      const GapObservables gaps = gap_observables(energies, n / 4);
      rows.push_back({n, "e_q", gaps.e_q});
      rows.push_back({n, "delta_oe", gaps.delta_oe});
    }
    rows.push_back({n, "delta_c", canonical_gap(ground.occupations, spec.bulk_coupling(), spec.omega)});
  }
  return rows;
}

std::vector<SeriesRow> sweep_bcs(const RunConfig& c) {
  std::vector<SeriesRow> rows;
  const double g = c.model.bulk_coupling();
  for (int value : c.values) {
    ModelSpec spec = c.model;
    int n = value;
    if (c.sweep_over == "omega") {
      spec.omega = value;
      spec.level_energies.clear();
      const double target = c.filling * value;
      n = static_cast<int>(std::lround(target));
      if (std::abs(target - n) > 1e-9) throw ConfigError("task.filling: filling * omega must be an integer");
    }
    const std::vector<double> levels = bcs_levels(spec);
    const BcsSolution s = solve_discrete(levels, g, spec.omega, n);
    rows.push_back({n, "e_per_n", s.energy_per_particle});
    rows.push_back({n, "e_q", quasiparticle_energy(blocked_level(levels, n), s.lambda, s.delta)});
    // Blocking one level costs Delta at the Fermi surface.
    rows.push_back({n, "delta_oe", s.delta});
    rows.push_back({n, "delta_c", s.canonical_gap});
  }
  return rows;
}

void sweep_task(const RunConfig& c, std::ostream& out) {
  const std::vector<SeriesRow> rows = sweep(c);
  if (c.format == "csv") {
    emit_series(rows, out);
    return;
  }
  std::ostringstream csv;
  emit_series(rows, csv);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  ordered_json j;
  j["task"] = "sweep";
  j["solver"] = c.solver;
  ordered_json list = ordered_json::array();
  while (std::getline(in, line)) {
    std::stringstream fields(line);
    std::string n;
    std::string name;
    std::string value;
    std::getline(fields, n, ',');
    std::getline(fields, name, ',');
    std::getline(fields, value);
    list.push_back({{"n", std::stoi(n)}, {"observable", name}, {"value", std::strtod(value.c_str(), nullptr)}});
  }
  j["series"] = list;
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// extrapolate

void extrapolate_task(const RunConfig& c, std::ostream& out) {
  std::ifstream in(c.input);
  if (!in) throw ConfigError(c.input + ": cannot open series file");
  const std::vector<SeriesPoint> points = read_series(in, c.observable, c.input);
  const FitResult fit = fit_cubic_inverse(points, c.degree);
  ordered_json j;
  j["task"] = "extrapolate";
  j["input"] = c.input;
  j["observable"] = c.observable;
  j["degree"] = c.degree;
  j["points"] = points.size();
  ordered_json coeffs = ordered_json::array();
  for (double x : fit.coefficients) coeffs.push_back(number(x));
  j["coefficients"] = coeffs;
  j["bulk"] = number(extrapolate_to_bulk(fit));
  j["rms_residual"] = number(fit.rms_residual);
  j["max_abs_residual"] = number(fit.max_abs_residual);
  j["condition"] = number(fit.condition);
  j["ill_conditioned"] = fit.ill_conditioned;
  if (fit.ill_conditioned) std::cerr << "warning: fit condition number " << format_number(fit.condition) << '\n';
  if (c.format == "csv") {
    write_flat(j, out);
  } else {
    out << j.dump(2) << '\n';
  }
}

// ---------------------------------------------------------------------------
// verify

int verify_task(const RunConfig& c, std::ostream& out) {
  const std::vector<VerifyCheck> checks = run_verify_suite(c.threads);
  bool all = true;
  for (const auto& check : checks) {
    out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
    all = all && check.passed;
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace

std::vector<SeriesRow> sweep(const RunConfig& config) {
  return config.solver == "bcs" ? sweep_bcs(config) : sweep_ed(config);
}

int run(const RunConfig& config, std::ostream& out) {
  std::ostringstream buffer;
  int code = kExitOk;
  if (config.task == "seniority") {
    seniority_task(config, buffer);
  } else if (config.task == "ed") {
    ed_task(config, buffer);
  } else if (config.task == "bcs-bulk") {
    bcs_bulk_task(config, buffer);
  } else if (config.task == "bcs-finite") {
    bcs_finite_task(config, buffer);
  } else if (config.task == "sweep") {
    sweep_task(config, buffer);
  } else if (config.task == "extrapolate") {
    extrapolate_task(config, buffer);
  } else if (config.task == "verify") {
    code = verify_task(config, buffer);
  } else {
    throw ConfigError("task.name: unknown task '" + config.task + "'");
  }

  if (config.path.empty()) {
    out << buffer.str();
  } else {
    std::ofstream file(config.path, std::ios::binary);
    if (!file || !(file << buffer.str()) || !file.flush()) throw ConfigError(config.path + ": cannot write output");
  }
  return code;
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ConvergenceError*>(&e) != nullptr) return kExitNonConvergence;
  if (dynamic_cast<const CapacityError*>(&e) != nullptr) return kExitDimensionCap;
  if (dynamic_cast<const ConfigError*>(&e) != nullptr || dynamic_cast<const DomainError*>(&e) != nullptr) {
    return kExitInvalidConfig;
  }
  return kExitFailure;
}

std::string error_json(const std::exception& e) {
  ordered_json j;
  j["error"] = e.what();
  const auto* err = dynamic_cast<const Error*>(&e);
  j["kind"] = err != nullptr ? err->kind() : "internal";
  return j.dump();
}

}  // namespace pairing
