#include "pairing/models.hpp"

#include <array>
#include <sstream>

#include "pairing/errors.hpp"

namespace pairing {

double ModelSpec::pair_strength() const noexcept {
  return coupling_scale == CouplingScale::kBulk ? coupling / omega : coupling;
}

double ModelSpec::bulk_coupling() const noexcept {
  return coupling_scale == CouplingScale::kBulk ? coupling : coupling * omega;
}

std::vector<double> equally_spaced_levels(int omega) {
  std::vector<double> eps(static_cast<std::size_t>(omega));
  for (int i = 0; i < omega; ++i) eps[static_cast<std::size_t>(i)] = static_cast<double>(i) / (2.0 * omega);
  return eps;
}

std::vector<double> ModelSpec::resolved_levels() const {
  if (!level_energies.empty()) return level_energies;
  if (model_class == ModelClass::kSu4Rg || model_class == ModelClass::kSpin32Rg) return equally_spaced_levels(omega);
  return std::vector<double>(static_cast<std::size_t>(omega), 0.0);
}

namespace {

constexpr std::array<std::pair<ModelClass, std::string_view>, 5> kClassNames{{
    {ModelClass::kIdentical, "identical"},
    {ModelClass::kIsovector, "isovector"},
    {ModelClass::kSu4Seniority, "su4_seniority"},
    {ModelClass::kSu4Rg, "su4_rg"},
    {ModelClass::kSpin32Rg, "spin32_rg"},
}};

}  // namespace

std::string_view model_class_name(ModelClass c) noexcept {
  for (const auto& [cls, name] : kClassNames) {
    if (cls == c) return name;
  }
  return "?";
}

std::optional<ModelClass> parse_model_class(std::string_view name) noexcept {
  for (const auto& [cls, n] : kClassNames) {
    if (n == name) return cls;
  }
  return std::nullopt;
}

std::vector<PairChannel> interaction_channels(const ModelSpec& spec) {
  const bool spin32 = spec.pair_basis == PairBasis::kSpin32 || spec.model_class == ModelClass::kSpin32Rg;
  switch (spec.model_class) {
    case ModelClass::kIdentical:
      return {p_channel(-1), p_channel(1)};
    case ModelClass::kIsovector:
      return {p_channel(-1), p_channel(0), p_channel(1)};
    case ModelClass::kSu4Seniority:
    case ModelClass::kSu4Rg:
    case ModelClass::kSpin32Rg:
      if (spin32) return {PairChannel::kS, d_channel(-2), d_channel(-1), d_channel(0), d_channel(1), d_channel(2)};
      return {p_channel(-1), p_channel(0), p_channel(1), q_channel(-1), q_channel(0), q_channel(1)};
  }
  throw DomainError("unsupported model class");
}

OperatorExpression hamiltonian_expression(const ModelSpec& spec) {
  OperatorExpression expr;
  const std::vector<double> eps = spec.resolved_levels();
  if (static_cast<int>(eps.size()) != spec.omega) {
    std::ostringstream msg;
    msg << "expected " << spec.omega << " level energies, got " << eps.size();
    throw DomainError(msg.str());
  }
  bool any_level = false;
  for (double e : eps) any_level = any_level || e != 0.0;
  if (any_level) expr.add(LevelEnergies{eps});
  expr.add(SeparablePairing{interaction_channels(spec), -spec.pair_strength()});
  return expr;
}

SparseOperator build_hamiltonian(const ModelSpec& spec, const SectorBasis& basis) {
  if (basis.omega() != spec.omega || basis.n_particles() != spec.n_particles) {
    std::ostringstream msg;
    msg << "basis sector (omega=" << basis.omega() << ", n=" << basis.n_particles()
        << ") does not match model (omega=" << spec.omega << ", n=" << spec.n_particles << ")";
    throw DomainError(msg.str());
  }
  return build_operator(hamiltonian_expression(spec), basis);
}

ModelSpec spin32_relabel(const ModelSpec& spec) {
  ModelSpec out = spec;
  switch (spec.model_class) {
    case ModelClass::kSu4Seniority:
      out.pair_basis = PairBasis::kSpin32;
      return out;
    case ModelClass::kSu4Rg:
      out.model_class = ModelClass::kSpin32Rg;
      out.pair_basis = PairBasis::kSpin32;
      return out;
    default:
      break;
  }
  throw DomainError(std::string("spin-3/2 relabeling needs an SU(4)-invariant class, got ") +
                    std::string(model_class_name(spec.model_class)));
}

}  // namespace pairing
