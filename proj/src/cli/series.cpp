#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "pairing/app.hpp"
#include "pairing/errors.hpp"

namespace pairing {

std::string format_number(double x) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.9g", x);
  return buffer;
}

double round_significant(double x) {
  if (!std::isfinite(x)) return x;
  return std::strtod(format_number(x).c_str(), nullptr);
}

namespace {

int observable_rank(std::string_view name) {
  const auto it = std::find(std::begin(kObservables), std::end(kObservables), name);
  if (it == std::end(kObservables)) throw DomainError("unknown observable '" + std::string(name) + "'");
  return static_cast<int>(it - std::begin(kObservables));
}

}  // namespace

void emit_series(std::vector<SeriesRow> rows, std::ostream& out) {
  std::stable_sort(rows.begin(), rows.end(), [](const SeriesRow& a, const SeriesRow& b) {
    if (a.n != b.n) return a.n < b.n;
    return observable_rank(a.observable) < observable_rank(b.observable);
  });
  out << "N,observable,value\n";
  for (const auto& r : rows) out << r.n << ',' << r.observable << ',' << format_number(r.value) << '\n';
}

std::vector<SeriesPoint> read_series(std::istream& in, std::string_view observable, std::string_view source) {
  const std::string where(source);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(where + ": empty series file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "N,observable,value") throw ConfigError(where + ": expected header 'N,observable,value'");

  std::vector<SeriesPoint> points;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream fields(line);
    std::string n_text;
    std::string name;
    std::string value_text;
    if (!std::getline(fields, n_text, ',') || !std::getline(fields, name, ',') || !std::getline(fields, value_text)) {
      throw ConfigError(where + ":" + std::to_string(line_no) + ": expected three fields");
    }
    int n = 0;
    const auto [ptr, ec] = std::from_chars(n_text.data(), n_text.data() + n_text.size(), n);
    char* end = nullptr;
    const double value = std::strtod(value_text.c_str(), &end);
    if (ec != std::errc() || ptr != n_text.data() + n_text.size() || value_text.empty() ||
        end != value_text.c_str() + value_text.size()) {
      throw ConfigError(where + ":" + std::to_string(line_no) + ": malformed row '" + line + "'");
    }
    if (name == observable) points.push_back({static_cast<double>(n), value});
  }
  if (points.empty()) throw ConfigError(where + ": no rows for observable '" + std::string(observable) + "'");
  return points;
}

}  // namespace pairing
