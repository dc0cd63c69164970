#include "pairing/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "pairing/errors.hpp"

namespace pairing {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"model", "class", "identical | isovector | su4_seniority (su4) | su4_rg | spin32_rg"},
      {"model", "omega", "number of spatial levels"},
      {"model", "n", "particle number"},
      {"model", "g", "bulk coupling, G = g / omega"},
      {"model", "G", "raw pair strength"},
      {"model", "levels", "comma-separated level energies (default per class)"},
      {"model", "pair_basis", "isospin | spin32"},
      {"task", "name", "seniority | ed | bcs-bulk | bcs-finite | sweep | extrapolate | verify"},
      {"task", "v", "seniority quantum number"},
      {"task", "isospin", "total isospin T (isovector)"},
      {"task", "reduced_isospin", "isospin of the unpaired particles (isovector)"},
      {"task", "lambda2", "SU(4) label (su4)"},
      {"task", "k", "number of eigenstates"},
      {"task", "tolerance", "eigenpair residual tolerance"},
      {"task", "max_iterations", "matrix-vector product budget (0: automatic)"},
      {"task", "seed", "start-vector seed"},
      {"task", "twice_sz", "sector 2 S_z"},
      {"task", "twice_tz", "sector 2 T_z"},
      {"task", "labels", "compute S, T and Casimir labels (true | false)"},
      {"task", "dimension_cap", "largest allowed sector dimension"},
      {"task", "filling", "x = N / omega"},
      {"task", "eps_q", "level of the quasiparticle energy (default x / 8)"},
      {"task", "solver", "sweep solver: ed | bcs"},
      {"task", "sweep_over", "omega (N = filling * omega) | n (fixed omega)"},
      {"task", "values", "comma-separated sweep grid"},
      {"task", "input", "series CSV for extrapolate"},
      {"task", "observable", "e_per_n | e_q | delta_oe | delta_c"},
      {"task", "degree", "fit degree in 1/N (1-4)"},
      {"output", "format", "json | csv"},
      {"output", "path", "output file (default stdout)"},
  };
  return keys;
}

namespace {

bool known_key(const std::string& full) {
  for (const auto& k : config_keys()) {
    if (full.size() == k.section.size() + 1 + k.key.size() && full.compare(0, k.section.size(), k.section) == 0 &&
        full[k.section.size()] == '.' && full.compare(k.section.size() + 1, std::string::npos, k.key) == 0) {
      return true;
    }
  }
  return false;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

class Reader {
 public:
  explicit Reader(const KeyValues& values) : values_(values) {}

  std::optional<std::string> text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return trim(it->second);
  }

  template <class Int>
  std::optional<Int> integer(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    Int value{};
    const auto [ptr, ec] = std::from_chars(t->data(), t->data() + t->size(), value);
    if (ec != std::errc() || ptr != t->data() + t->size()) bad(key, "expected an integer, got '" + *t + "'");
    return value;
  }

  std::optional<double> real(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    return parse_real(key, *t);
  }

  std::optional<bool> boolean(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    if (*t == "true" || *t == "1" || *t == "yes") return true;
    if (*t == "false" || *t == "0" || *t == "no") return false;
    bad(key, "expected true or false, got '" + *t + "'");
  }

  template <class T>
  std::optional<std::vector<T>> list(const std::string& key) const {
    const auto t = text(key);
    if (!t) return std::nullopt;
    std::vector<T> out;
    std::stringstream in(*t);
    std::string item;
    while (std::getline(in, item, ',')) {
      item = trim(item);
      if (item.empty()) bad(key, "empty list entry");
      if constexpr (std::is_same_v<T, double>) {
        out.push_back(parse_real(key, item));
      } else {
        T value{};
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
        if (ec != std::errc() || ptr != item.data() + item.size()) bad(key, "expected integers, got '" + item + "'");
        out.push_back(value);
      }
    }
    if (out.empty()) bad(key, "empty list");
    return out;
  }

 private:
  static double parse_real(const std::string& key, const std::string& t) {
    char* end = nullptr;
    const double value = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(value)) {
      bad(key, "expected a finite number, got '" + t + "'");
    }
    return value;
  }

  const KeyValues& values_;
};

}  // namespace

KeyValues read_ini(const std::string& path) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("cannot read config: ") + e.what());
  }
  KeyValues out;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) throw ConfigError(path + ": key '" + section + "' outside a section");
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!known_key(full)) throw ConfigError(path + ": unknown key '" + full + "'");
      out[full] = value.get_value<std::string>();
    }
  }
  return out;
}

KeyValues merge(KeyValues base, const KeyValues& overrides) {
  for (const auto& [k, v] : overrides) base[k] = v;
  return base;
}

RunConfig resolve_config(const KeyValues& values) {
  for (const auto& [key, value] : values) {
    if (!known_key(key)) throw ConfigError("unknown key '" + key + "'");
  }
  const Reader r(values);
  RunConfig c;

  c.task = r.text("task.name").value_or("");
  if (std::find(std::begin(kTasks), std::end(kTasks), c.task) == std::end(kTasks)) {
    bad("task.name", c.task.empty() ? "missing" : "unknown task '" + c.task + "'");
  }

  if (const auto cls = r.text("model.class")) {
    const std::string name = *cls == "su4" ? "su4_seniority" : *cls;
    const auto parsed = parse_model_class(name);
    if (!parsed) bad("model.class", "unknown class '" + *cls + "'");
    c.model.model_class = *parsed;
  }
  if (const auto om = r.integer<int>("model.omega")) {
    if (*om < 1 || *om > 1'000'000) bad("model.omega", "must be between 1 and 1000000");
    c.model.omega = *om;
  }
  if (const auto n = r.integer<int>("model.n")) {
    if (*n < 0) bad("model.n", "must be non-negative");
    c.model.n_particles = *n;
    c.n_given = true;
  }
  const auto g = r.real("model.g");
  const auto big_g = r.real("model.G");
  if (g && big_g) bad("model.g", "give either g or G, not both");
  if (g) {
    c.model.coupling = *g;
    c.model.coupling_scale = CouplingScale::kBulk;
  } else if (big_g) {
    c.model.coupling = *big_g;
    c.model.coupling_scale = CouplingScale::kRaw;
  }
  c.coupling_given = g.has_value() || big_g.has_value();
  if (c.coupling_given && c.model.coupling < 0.0) bad(g ? "model.g" : "model.G", "must be non-negative");
  if (const auto levels = r.list<double>("model.levels")) {
    if (static_cast<int>(levels->size()) != c.model.omega) bad("model.levels", "need one energy per level");
    c.model.level_energies = *levels;
  }
  if (const auto basis = r.text("model.pair_basis")) {
    if (*basis == "isospin") {
      c.model.pair_basis = PairBasis::kIsospin;
    } else if (*basis == "spin32") {
      c.model.pair_basis = PairBasis::kSpin32;
    } else {
      bad("model.pair_basis", "expected isospin or spin32");
    }
  }

  c.seniority = r.integer<int>("task.v");
  c.isospin = r.real("task.isospin");
  c.reduced_isospin = r.real("task.reduced_isospin").value_or(0.0);
  c.lambda2 = r.integer<int>("task.lambda2");

  if (const auto k = r.integer<std::size_t>("task.k")) {
    if (*k < 1) bad("task.k", "must be at least 1");
    c.k = *k;
  }
  if (const auto tol = r.real("task.tolerance")) {
    if (!(*tol > 0.0)) bad("task.tolerance", "must be positive");
    c.lanczos.tolerance = *tol;
  }
  if (const auto it = r.integer<std::size_t>("task.max_iterations")) c.lanczos.max_iterations = *it;
  if (const auto seed = r.integer<std::uint64_t>("task.seed")) c.lanczos.seed = *seed;
  c.constraints.twice_sz = r.integer<int>("task.twice_sz");
  c.constraints.twice_tz = r.integer<int>("task.twice_tz");
  c.labels = r.boolean("task.labels").value_or(true);
  if (const auto cap = r.integer<std::size_t>("task.dimension_cap")) {
    if (*cap < 1) bad("task.dimension_cap", "must be positive");
    c.dimension_cap = *cap;
  }

  if (const auto x = r.real("task.filling")) {
    if (!(*x > 0.0 && *x < 4.0)) bad("task.filling", "must lie in (0, 4)");
    c.filling = *x;
  }
  c.eps_q = r.real("task.eps_q");

  c.solver = r.text("task.solver").value_or("ed");
  if (c.solver != "ed" && c.solver != "bcs") bad("task.solver", "expected ed or bcs");
  c.sweep_over = r.text("task.sweep_over").value_or("omega");
  if (c.sweep_over != "omega" && c.sweep_over != "n") bad("task.sweep_over", "expected omega or n");
  if (const auto v = r.list<int>("task.values")) c.values = *v;

  c.input = r.text("task.input").value_or("");
  c.observable = r.text("task.observable").value_or("e_per_n");
  if (c.observable != "e_per_n" && c.observable != "e_q" && c.observable != "delta_oe" && c.observable != "delta_c") {
    bad("task.observable", "expected e_per_n, e_q, delta_oe or delta_c");
  }
  if (const auto d = r.integer<int>("task.degree")) {
    if (*d < 1 || *d > 4) bad("task.degree", "must be between 1 and 4");
    c.degree = *d;
  }

  c.format = r.text("output.format").value_or(c.task == "sweep" ? "csv" : "json");
  if (c.format != "json" && c.format != "csv") bad("output.format", "expected json or csv");
  c.path = r.text("output.path").value_or("");

  // Task-specific requirements.
  const bool needs_model = c.task == "seniority" || c.task == "ed" || c.task == "bcs-finite";
  if (needs_model && !values.contains("model.omega")) bad("model.omega", "missing");
  if (needs_model && !c.n_given) bad("model.n", "missing");
  if ((needs_model || c.task == "bcs-bulk" || c.task == "sweep") && !c.coupling_given) {
    bad("model.g", "missing coupling (g or G)");
  }
  if (c.task == "bcs-bulk" && !(c.model.bulk_coupling() > 0.0)) bad("model.g", "bulk BCS needs g > 0");
  if (c.task == "sweep") {
    if (c.values.empty()) bad("task.values", "missing sweep grid");
    if (c.sweep_over == "n" && !values.contains("model.omega")) bad("model.omega", "missing for a sweep over n");
    for (int v : c.values) {
      if (v < 1) bad("task.values", "entries must be positive");
    }
    std::vector<int> sorted = c.values;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) bad("task.values", "entries must be distinct");
    if (c.sweep_over == "omega" && c.model.coupling_scale == CouplingScale::kRaw && c.model.coupling != 0.0) {
      bad("model.G", "a sweep over omega needs the bulk coupling g");
    }
  }
  if (c.task == "extrapolate" && c.input.empty()) bad("task.input", "missing");
  if (c.task == "seniority" && c.lambda2 && c.isospin) bad("task.lambda2", "lambda2 and isospin belong to different models");
  if (needs_model && c.model.omega > kMaxLevels && c.task == "ed") {
    bad("model.omega", "exact diagonalization supports at most 16 levels");
  }
  return c;
}

int threads_from_environment() {
  const char* env = std::getenv("PAIRING_THREADS");
  if (env == nullptr) return 1;
  int value = 0;
  const std::string_view s(env);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || value < 1) return 1;
  return value;
}

}  // namespace pairing
