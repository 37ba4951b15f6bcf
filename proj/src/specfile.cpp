#include "riccisol/specfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace riccisol {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view s, std::size_t line) {
  s = trim(s);
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw SpecFileError("line " + std::to_string(line) + ": expected a number, got '" +
                            std::string(s) + "'",
                        line);
  return v;
}

int parse_int(std::string_view s, std::size_t line) {
  s = trim(s);
  int v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw SpecFileError("line " + std::to_string(line) + ": expected an integer, got '" +
                            std::string(s) + "'",
                        line);
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(trim(s.substr(start)));
      return parts;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
}

Expr parse_field(std::string_view text, const std::vector<std::string>& names,
                 std::size_t line) {
  try {
    return parse_expr(text, names);
  } catch (const ParseError& e) {
    throw SpecFileError("line " + std::to_string(line) + ": " + e.what(), line);
  }
}

// Accumulates the file's fields before the SolitonSpec can be assembled.
struct Builder {
  std::optional<int> dimension;
  std::vector<std::string> coordinates;
  std::optional<double> lambda;
  std::optional<std::pair<std::string, std::size_t>> potential;
  std::optional<std::pair<std::string, std::size_t>> validity;
  std::map<std::pair<int, int>, std::pair<std::string, std::size_t>> metric;
  std::map<std::string, std::pair<double, double>> domain;
  std::map<std::string, int> samples;
  std::optional<int> samples_all;
  std::vector<std::vector<double>> points;
  std::optional<double> tol_abs, tol_rel;

  int coord_index(std::string_view name, std::size_t line) const {
    for (std::size_t i = 0; i < coordinates.size(); ++i)
      if (coordinates[i] == name) return static_cast<int>(i);
    // 1-based numeric index is accepted everywhere a name is.
    int v = 0;
    auto res = std::from_chars(name.data(), name.data() + name.size(), v);
    if (res.ec == std::errc{} && res.ptr == name.data() + name.size() && v >= 1 &&
        v <= static_cast<int>(coordinates.size()))
      return v - 1;
    throw SpecFileError("line " + std::to_string(line) + ": unknown coordinate '" +
                            std::string(name) + "'",
                        line);
  }

  LoadedSpec finish() {
    if (!dimension) throw SpecFileError("missing key: dimension");
    const int n = *dimension;
    if (n < 2) throw SpecFileError("dimension must be at least 2");
    if (coordinates.empty())
      for (int i = 0; i < n; ++i) coordinates.push_back("x" + std::to_string(i + 1));
    if (coordinates.size() != static_cast<std::size_t>(n))
      throw SpecFileError("coordinates list must have one name per dimension");
    if (!lambda) throw SpecFileError("missing key: lambda");
    if (!potential) throw SpecFileError("missing key: potential");

    std::vector<Expr> lower;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= i; ++j) {
        auto it = metric.find({i, j});
        if (it == metric.end()) {
          if (i == j)
            throw SpecFileError("missing metric diagonal entry " + std::to_string(i) + "," +
                                std::to_string(j));
          lower.push_back(Expr::constant(0.0));
        } else {
          lower.push_back(parse_field(it->second.first, coordinates, it->second.second));
        }
      }

    std::vector<std::pair<double, double>> box;
    for (int i = 0; i < n; ++i) {
      auto it = domain.find(coordinates[static_cast<std::size_t>(i)]);
      if (it == domain.end())
        throw SpecFileError("missing domain for coordinate '" +
                            coordinates[static_cast<std::size_t>(i)] + "'");
      box.push_back(it->second);
    }

    std::optional<Expr> validity_expr;
    if (validity)
      validity_expr = parse_field(validity->first, coordinates, validity->second);

    ChartSpec chart(n, std::move(box), coordinates, std::move(validity_expr));

    SamplePlan plan;
    if (!points.empty()) {
      std::vector<Vector> pts;
      for (const auto& row : points) {
        if (row.size() != static_cast<std::size_t>(n))
          throw SpecFileError("sample point needs one value per coordinate");
        Vector p(n);
        for (int i = 0; i < n; ++i) p[i] = row[static_cast<std::size_t>(i)];
        pts.push_back(std::move(p));
      }
      plan = SamplePlan::list(std::move(pts));
    } else {
      std::vector<int> counts(static_cast<std::size_t>(n),
                              samples_all.value_or(default_axis_count(n)));
      for (const auto& [name, k] : samples) counts[static_cast<std::size_t>(coord_index(name, 0))] = k;
      plan = SamplePlan::grid(std::move(counts));
    }

    Expr f = parse_field(potential->first, coordinates, potential->second);
    SolitonSpec spec(std::move(chart), MetricField(n, std::move(lower)), std::move(f), *lambda,
                     std::move(plan));

    std::optional<Tolerance> tol;
    if (tol_abs || tol_rel) {
      Tolerance t;
      if (tol_abs) t.abs = *tol_abs;
      if (tol_rel) t.rel = *tol_rel;
      tol = t;
    }
    return {std::move(spec), tol};
  }
};

LoadedSpec load_flat(std::string_view text) {
  Builder b;
  // First pass gathers raw lines so keys may appear in any order.
  std::size_t lineno = 0;
  std::size_t pos = 0;
  struct RawLine {
    std::string key, qualifier, value;
    std::size_t line;
  };
  std::vector<RawLine> lines;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw SpecFileError("line " + std::to_string(lineno) + ": expected 'key = value'", lineno);
    std::string_view head = trim(line.substr(0, eq));
    std::string_view value = trim(line.substr(eq + 1));
    std::string_view key = head;
    std::string_view qualifier;
    if (const auto sp = head.find_first_of(" \t"); sp != std::string_view::npos) {
      key = trim(head.substr(0, sp));
      qualifier = trim(head.substr(sp));
    }
    lines.push_back({std::string(key), std::string(qualifier), std::string(value), lineno});
    if (pos > text.size()) break;
  }

  // dimension and coordinates first; everything else depends on them.
  for (const auto& l : lines) {
    if (l.key == "dimension") {
      if (!l.qualifier.empty())
        throw SpecFileError("line " + std::to_string(l.line) + ": dimension takes no qualifier",
                            l.line);
      b.dimension = parse_int(l.value, l.line);
    } else if (l.key == "coordinates") {
      for (auto part : split(l.value, ',')) {
        if (part.empty())
          throw SpecFileError("line " + std::to_string(l.line) + ": empty coordinate name",
                              l.line);
        b.coordinates.emplace_back(part);
      }
    }
  }
  if (!b.dimension) throw SpecFileError("missing key: dimension");

  for (const auto& l : lines) {
    if (l.key == "dimension" || l.key == "coordinates") continue;
    if (l.key == "lambda") {
      b.lambda = parse_number(l.value, l.line);
    } else if (l.key == "potential") {
      b.potential = {l.value, l.line};
    } else if (l.key == "validity") {
      b.validity = {l.value, l.line};
    } else if (l.key == "metric") {
      const auto parts = split(l.qualifier, ',');
      if (parts.size() != 2)
        throw SpecFileError(
            "line " + std::to_string(l.line) + ": metric entries are written 'metric i,j = ...'",
            l.line);
      const int i = parse_int(parts[0], l.line);
      const int j = parse_int(parts[1], l.line);
      if (i < 1 || j < 1 || i > *b.dimension || j > *b.dimension)
        throw SpecFileError("line " + std::to_string(l.line) + ": metric index out of range",
                            l.line);
      if (j > i)
        throw SpecFileError("line " + std::to_string(l.line) +
                                ": metric entries use the lower triangle (i >= j)",
                            l.line);
      if (!b.metric.emplace(std::make_pair(i, j), std::make_pair(l.value, l.line)).second)
        throw SpecFileError("line " + std::to_string(l.line) + ": duplicate metric entry",
                            l.line);
    } else if (l.key == "domain") {
      const auto dots = l.value.find("..");
      if (l.qualifier.empty() || dots == std::string::npos)
        throw SpecFileError(
            "line " + std::to_string(l.line) + ": domains are written 'domain x = lo .. hi'",
            l.line);
      const double lo = parse_number(std::string_view(l.value).substr(0, dots), l.line);
      const double hi = parse_number(std::string_view(l.value).substr(dots + 2), l.line);
      if (b.coordinates.empty())
        for (int i = 0; i < *b.dimension; ++i) b.coordinates.push_back("x" + std::to_string(i + 1));
      const int idx = b.coord_index(l.qualifier, l.line);
      b.domain[b.coordinates[static_cast<std::size_t>(idx)]] = {lo, hi};
    } else if (l.key == "samples") {
      if (l.qualifier.empty()) {
        b.samples_all = parse_int(l.value, l.line);
      } else {
        if (b.coordinates.empty())
          for (int i = 0; i < *b.dimension; ++i)
            b.coordinates.push_back("x" + std::to_string(i + 1));
        const int idx = b.coord_index(l.qualifier, l.line);
        b.samples[b.coordinates[static_cast<std::size_t>(idx)]] = parse_int(l.value, l.line);
      }
    } else if (l.key == "point") {
      std::vector<double> row;
      for (auto part : split(l.value, ',')) row.push_back(parse_number(part, l.line));
      b.points.push_back(std::move(row));
    } else if (l.key == "tolerance") {
      if (l.qualifier == "abs")
        b.tol_abs = parse_number(l.value, l.line);
      else if (l.qualifier == "rel")
        b.tol_rel = parse_number(l.value, l.line);
      else
        throw SpecFileError("line " + std::to_string(l.line) +
                                ": tolerance entries are 'tolerance abs' or 'tolerance rel'",
                            l.line);
    } else {
      throw SpecFileError("line " + std::to_string(l.line) + ": unknown key '" + l.key + "'",
                          l.line);
    }
  }

  return b.finish();
}

LoadedSpec load_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SpecFileError(std::string("JSON parse error: ") + e.what());
  }
  if (!doc.is_object()) throw SpecFileError("JSON spec must be an object");

  Builder b;
  for (const auto& [key, value] : doc.items()) {
    if (key == "dimension") {
      b.dimension = value.get<int>();
    } else if (key == "coordinates") {
      for (const auto& c : value) b.coordinates.push_back(c.get<std::string>());
    } else if (key == "lambda") {
      b.lambda = value.get<double>();
    } else if (key == "potential") {
      b.potential = {value.get<std::string>(), 0};
    } else if (key == "validity") {
      b.validity = {value.get<std::string>(), 0};
    } else if (key == "metric") {
      for (const auto& [mkey, mval] : value.items()) {
        const auto parts = split(mkey, ',');
        if (parts.size() != 2) throw SpecFileError("metric keys are written \"i,j\"");
        const int i = parse_int(parts[0], 0);
        const int j = parse_int(parts[1], 0);
        if (j > i) throw SpecFileError("metric entries use the lower triangle (i >= j)");
        b.metric[{i, j}] = {mval.get<std::string>(), 0};
      }
    } else if (key == "domain") {
      for (const auto& [dkey, dval] : value.items()) {
        if (!dval.is_array() || dval.size() != 2)
          throw SpecFileError("domain entries are [lo, hi] arrays");
        b.domain[dkey] = {dval[0].get<double>(), dval[1].get<double>()};
      }
    } else if (key == "samples") {
      if (value.is_number_integer()) {
        b.samples_all = value.get<int>();
      } else {
        for (const auto& [skey, sval] : value.items()) b.samples[skey] = sval.get<int>();
      }
    } else if (key == "points") {
      for (const auto& row : value) b.points.push_back(row.get<std::vector<double>>());
    } else if (key == "tolerance") {
      if (value.contains("abs")) b.tol_abs = value["abs"].get<double>();
      if (value.contains("rel")) b.tol_rel = value["rel"].get<double>();
    } else {
      throw SpecFileError("unknown key '" + key + "'");
    }
  }
  if (!b.dimension) throw SpecFileError("missing key: dimension");
  // Domain keys may be names or 1-based indices; normalize to names.
  if (b.coordinates.empty())
    for (int i = 0; i < *b.dimension; ++i) b.coordinates.push_back("x" + std::to_string(i + 1));
  std::map<std::string, std::pair<double, double>> domain;
  for (const auto& [key, range] : b.domain)
    domain[b.coordinates[static_cast<std::size_t>(b.coord_index(key, 0))]] = range;
  b.domain = std::move(domain);
  return b.finish();
}

void print_number(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

LoadedSpec load_spec_text(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw SpecFileError("empty spec document");
  return text[first] == '{' ? load_json(text) : load_flat(text);
}

std::string emit_spec_file(const SolitonSpec& spec) {
  const int n = spec.dim();
  const auto& names = spec.chart().coord_names();
  std::string out;
  out += "dimension = " + std::to_string(n) + "\n";
  out += "coordinates = ";
  for (int i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += names[static_cast<std::size_t>(i)];
  }
  out += "\nlambda = ";
  print_number(out, spec.lambda());
  out += "\npotential = " + to_string(spec.potential_expr(), names) + "\n";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      out += "metric " + std::to_string(i + 1) + "," + std::to_string(j + 1) + " = ";
      out += to_string(spec.metric().component(i, j), names) + "\n";
    }
  for (int i = 0; i < n; ++i) {
    const auto [lo, hi] = spec.chart().domain()[static_cast<std::size_t>(i)];
    out += "domain " + names[static_cast<std::size_t>(i)] + " = ";
    print_number(out, lo);
    out += " .. ";
    print_number(out, hi);
    out += "\n";
  }
  if (spec.chart().validity())
    out += "validity = " + to_string(*spec.chart().validity(), names) + "\n";
  if (!spec.plan().points.empty()) {
    for (const auto& p : spec.plan().points) {
      out += "point = ";
      for (int i = 0; i < n; ++i) {
        if (i) out += ", ";
        print_number(out, p[i]);
      }
      out += "\n";
    }
  } else {
    std::vector<int> counts = spec.plan().per_axis;
    if (counts.empty()) counts.assign(static_cast<std::size_t>(n), default_axis_count(n));
    if (counts.size() == 1) counts.assign(static_cast<std::size_t>(n), counts[0]);
    for (int i = 0; i < n; ++i)
      out += "samples " + names[static_cast<std::size_t>(i)] + " = " +
             std::to_string(counts[static_cast<std::size_t>(i)]) + "\n";
  }
  return out;
}

}  // namespace riccisol
