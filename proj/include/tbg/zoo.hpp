#pragma once

#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tbg/chart.hpp"
#include "tbg/expr.hpp"
#include "tbg/para.hpp"

namespace tbg {

inline constexpr const char* kSpecSchema = "tbgeom-spec/1";

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public SpecError {
 public:
  using SpecError::SpecError;
};

// Raw contents of a spec file; expressions are kept as text.
struct ManifoldSpec {
  std::string name;
  std::string description;
  int dim = 0;
  std::vector<std::string> coordinates;
  std::vector<std::vector<std::string>> metric;  // upper triangle, row i holds entries i..n-1
  std::optional<std::vector<std::vector<std::string>>> phi;  // full n×n, phi[i][j] = φ^i_j
  std::vector<double> deltas;
  std::vector<std::pair<std::string, std::vector<std::string>>> vector_fields;
  std::optional<std::vector<std::vector<std::string>>> second_metric;
};

// Parsed and built objects ready for the suite.
struct LoadedSpec {
  ManifoldSpec spec;
  std::shared_ptr<const ChartManifold> manifold;
  ParaStructure phi;
  std::shared_ptr<const ChartManifold> second;  // h; defaults to a conformal rescaling of g
  std::vector<std::pair<std::string, VectorField>> fields;
};

// =============================================================================
// Builtins
// =============================================================================

namespace detail {

using Rows = std::vector<std::vector<std::string>>;
using Fields = std::map<std::string, std::vector<std::string>>;

inline nlohmann::json flat_para_json(int k) {
  const int n = 2 * k;
  nlohmann::json j;
  j["schema"] = kSpecSchema;
  j["name"] = "flat-para-" + std::to_string(n);
  j["description"] = "R^" + std::to_string(n) + " with the identity metric and the block swap structure";
  j["dim"] = n;
  std::vector<std::string> coords;
  for (int i = 0; i < n; ++i) coords.push_back("x" + std::to_string(i + 1));
  j["coordinates"] = coords;
  nlohmann::json metric = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> row;
    for (int c = i; c < n; ++c) row.push_back(c == i ? "1" : "0");
    metric.push_back(row);
  }
  j["metric"] = metric;
  nlohmann::json phi = nlohmann::json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> row;
    for (int c = 0; c < n; ++c) row.push_back((c == (i + k) % n) ? "1" : "0");
    phi.push_back(row);
  }
  j["phi"] = phi;
  j["delta"] = std::vector<double>{0.0, 0.5, 1.0, 2.0};
  nlohmann::json fields = nlohmann::json::object();
  std::vector<std::string> zero(static_cast<std::size_t>(n), "0"), constant(static_cast<std::size_t>(n), "0"),
      linear(static_cast<std::size_t>(n), "0"), quadratic(static_cast<std::size_t>(n), "0");
  constant[0] = "0.7";
  constant[1] = "-0.4";
  linear[1] = "x1";
  quadratic[0] = "x1^2";
  fields["zero"] = zero;
  fields["constant"] = constant;
  fields["x1_d2"] = linear;
  fields["x1sq_d1"] = quadratic;
  j["vector_fields"] = fields;
  return j;
}

// a = 1 + 0.2(x1² + x2²), b = 0.4 x1 x2 satisfy ∂a/∂x1 = ∂b/∂x2 and
// ∂a/∂x2 = ∂b/∂x1, so the swap structure is parallel.
inline nlohmann::json para_surface_json() {
  nlohmann::json j;
  j["schema"] = kSpecSchema;
  j["name"] = "para-surface";
  j["description"] =
      "R^2 with g = [[a,b],[b,a]], a = 1 + 0.2(x1^2 + x2^2), b = 0.4 x1 x2, and the swap structure "
      "(anti-paraKahler; every such surface is flat)";
  j["dim"] = 2;
  j["coordinates"] = std::vector<std::string>{"x1", "x2"};
  j["metric"] = Rows{{"1 + 0.2*(x1^2 + x2^2)", "0.4*x1*x2"}, {"1 + 0.2*(x1^2 + x2^2)"}};
  j["phi"] = Rows{{"0", "1"}, {"1", "0"}};
  j["delta"] = std::vector<double>{0.0, 0.5, 1.0, 2.0};
  j["vector_fields"] = Fields{{"zero", {"0", "0"}}, {"x1_d2", {"0", "x1"}}, {"mixed", {"x2", "0.5*x1^2"}}};
  return j;
}

// Product of a curved surface (coordinates s_a = x_a + x_{a+2}) with a flat
// plane (t_a = x_a − x_{a+2}). In x-coordinates g = [[A,B],[B,A]] with
// A = h1 + I, B = h1 − I, and the block swap is +1 on ∂_s and −1 on ∂_t.
inline nlohmann::json para_product_json() {
  const std::string s1 = "(x1 + x3)", s2 = "(x2 + x4)";
  const std::string h11 = "1 + 0.2*" + s2 + "^2";
  const std::string h12 = "0.1*" + s1 + "*" + s2;
  const std::string h22 = "1 + 0.3*" + s1 + "^2";
  auto plus = [](const std::string& e, int id) { return id ? e + " + 1" : e; };
  auto minus = [](const std::string& e, int id) { return id ? e + " - 1" : e; };
  nlohmann::json j;
  j["schema"] = kSpecSchema;
  j["name"] = "para-product";
  j["description"] =
      "R^4 as a curved surface times a flat plane, written in coordinates where the product "
      "structure is the block swap; nonflat anti-paraKahler";
  j["dim"] = 4;
  j["coordinates"] = std::vector<std::string>{"x1", "x2", "x3", "x4"};
  j["metric"] = Rows{{plus(h11, 1), h12, minus(h11, 1), h12},
                 {plus(h22, 1), h12, minus(h22, 1)},
                 {plus(h11, 1), h12},
                 {plus(h22, 1)}};
  j["phi"] = Rows{{"0", "0", "1", "0"}, {"0", "0", "0", "1"}, {"1", "0", "0", "0"}, {"0", "1", "0", "0"}};
  j["delta"] = std::vector<double>{0.0, 0.5, 1.0, 2.0};
  j["vector_fields"] = Fields{{"zero", {"0", "0", "0", "0"}},
                        {"parallel", {"0.5", "0", "-0.5", "0"}},
                        {"coordinate", {"1", "0", "0", "0"}},
                        {"x1_d2", {"0", "x1", "0", "0"}},
                        {"mixed", {"sin(x2)", "0.3*x1*x3", "0", "x4"}}};
  return j;
}

}  // namespace detail

struct BuiltinInfo {
  std::string name;
  std::string description;
};

inline std::vector<std::string> builtin_names() { return {"flat-para-2", "flat-para-4", "para-surface", "para-product"}; }

inline std::optional<nlohmann::json> builtin_json(const std::string& name) {
  if (name == "flat-para-2") return detail::flat_para_json(1);
  if (name == "flat-para-4") return detail::flat_para_json(2);
  if (name == "para-surface") return detail::para_surface_json();
  if (name == "para-product") return detail::para_product_json();
  return std::nullopt;
}

inline std::vector<BuiltinInfo> list_builtins() {
  std::vector<BuiltinInfo> out;
  for (const auto& n : builtin_names()) out.push_back({n, builtin_json(n)->at("description").get<std::string>()});
  return out;
}

// =============================================================================
// Parsing
// =============================================================================

namespace detail {

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Line and column of the first occurrence of a JSON string literal, used to
// point expression errors back into the file.
inline std::pair<int, int> locate_literal(const std::string& text, const std::string& literal) {
  const std::string quoted = nlohmann::json(literal).dump();
  const std::size_t pos = text.find(quoted);
  if (pos == std::string::npos) return {0, 0};
  return line_column(text, pos + 1);
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string())
      out.push_back(e.get<std::string>());
    else if (e.is_number())
      out.push_back(e.dump());
    else
      throw SpecError(where + ": entries must be expression strings");
  }
  return out;
}

inline std::vector<std::vector<std::string>> string_rows(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array()) throw SpecError(where + ": expected an array of rows");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(string_list(j[i], where + " row " + std::to_string(i + 1)));
  return rows;
}

}  // namespace detail

inline ManifoldSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("spec must be a JSON object");
  if (j.contains("schema") && j["schema"] != kSpecSchema)
    throw SpecError("unsupported spec schema " + j["schema"].dump() + " (expected \"" + kSpecSchema + "\")");
  ManifoldSpec s;
  try {
    s.name = j.value("name", std::string("unnamed"));
    s.description = j.value("description", std::string());
    if (!j.contains("dim")) throw SpecError("missing field 'dim'");
    s.dim = j.at("dim").get<int>();
    if (s.dim <= 0) throw SpecError("'dim' must be positive");
    if (j.contains("coordinates")) {
      s.coordinates = detail::string_list(j.at("coordinates"), "coordinates");
    } else {
      for (int i = 0; i < s.dim; ++i) s.coordinates.push_back("x" + std::to_string(i + 1));
    }
    if (static_cast<int>(s.coordinates.size()) != s.dim) throw SpecError("'coordinates' must list exactly 'dim' names");
    if (!j.contains("metric")) throw SpecError("missing field 'metric'");
    s.metric = detail::string_rows(j.at("metric"), "metric");
    if (j.contains("phi")) s.phi = detail::string_rows(j.at("phi"), "phi");
    if (j.contains("delta")) {
      const auto& d = j.at("delta");
      if (d.is_number())
        s.deltas.push_back(d.get<double>());
      else
        for (const auto& v : d) s.deltas.push_back(v.get<double>());
      for (double v : s.deltas)
        if (v < 0.0) throw SpecError("delta values must be nonnegative");
    }
    if (j.contains("vector_fields")) {
      for (const auto& [name, comps] : j.at("vector_fields").items())
        s.vector_fields.emplace_back(name, detail::string_list(comps, "vector_fields." + name));
    }
    if (j.contains("second_metric")) s.second_metric = detail::string_rows(j.at("second_metric"), "second_metric");
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("invalid spec field: ") + e.what());
  }
  return s;
}

inline nlohmann::json spec_to_json(const ManifoldSpec& s) {
  nlohmann::json j;
  j["schema"] = kSpecSchema;
  j["name"] = s.name;
  if (!s.description.empty()) j["description"] = s.description;
  j["dim"] = s.dim;
  j["coordinates"] = s.coordinates;
  j["metric"] = s.metric;
  if (s.phi) j["phi"] = *s.phi;
  if (!s.deltas.empty()) j["delta"] = s.deltas;
  if (!s.vector_fields.empty()) {
    nlohmann::json f = nlohmann::json::object();
    for (const auto& [name, comps] : s.vector_fields) f[name] = comps;
    j["vector_fields"] = f;
  }
  if (s.second_metric) j["second_metric"] = *s.second_metric;
  return j;
}

// Builds the geometry objects. `source_text` (the raw file) is only used to
// attach line numbers to expression errors.
inline LoadedSpec build_spec(const ManifoldSpec& s, const std::string& source_text = {}) {
  auto parse_at = [&](const std::string& text, const std::string& where) {
    try {
      Expr e = parse_expr(text);
      for (const auto& v : free_variables(e))
        if (std::find(s.coordinates.begin(), s.coordinates.end(), v) == s.coordinates.end())
          throw SpecError(where + ": unknown variable '" + v + "' in \"" + text + "\"");
      return e;
    } catch (const ParseError& pe) {
      std::string loc;
      const auto [line, col] = detail::locate_literal(source_text, text);
      if (line > 0) loc = "line " + std::to_string(line) + ", column " + std::to_string(col + pe.column() - 1) + ": ";
      throw SpecError(loc + where + ": " + pe.what());
    }
  };

  const int n = s.dim;
  if (s.phi && n % 2 != 0) throw DimensionError("dimension " + std::to_string(n) + " is odd; a paracomplex structure needs an even dimension");
  if (!s.phi && n % 2 != 0) throw DimensionError("dimension " + std::to_string(n) + " is odd; no paracomplex structure exists");

  LoadedSpec out;
  out.spec = s;
  auto metric_rows = [&](const std::vector<std::vector<std::string>>& rows, const std::string& what) {
    if (static_cast<int>(rows.size()) != n) throw SpecError(what + ": expected " + std::to_string(n) + " upper-triangle rows");
    std::vector<std::vector<Expr>> er;
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n - i)
        throw SpecError(what + " row " + std::to_string(i + 1) + ": expected " + std::to_string(n - i) + " entries");
      std::vector<Expr> r;
      for (int c = 0; c < n - i; ++c)
        r.push_back(parse_at(rows[i][c], what + "[" + std::to_string(i + 1) + "][" + std::to_string(i + c + 1) + "]"));
      er.push_back(r);
    }
    return std::make_shared<const ChartManifold>(ChartManifold::from_upper(s.coordinates, er));
  };
  out.manifold = metric_rows(s.metric, "metric");

  const Chart& chart = out.manifold->chart();
  if (s.phi) {
    if (static_cast<int>(s.phi->size()) != n) throw SpecError("phi: expected " + std::to_string(n) + " rows");
    Tensor<Expr, 2> p(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>((*s.phi)[i].size()) != n) throw SpecError("phi row " + std::to_string(i + 1) + ": expected " + std::to_string(n) + " entries");
      for (int c = 0; c < n; ++c) p(i, c) = parse_at((*s.phi)[i][c], "phi[" + std::to_string(i + 1) + "][" + std::to_string(c + 1) + "]");
    }
    out.phi = ParaStructure(chart, p);
  } else {
    out.phi = ParaStructure::block_swap(chart);
  }

  if (s.second_metric) {
    out.second = metric_rows(*s.second_metric, "second_metric");
  } else {
    // h = exp(0.2 x^1 + 0.1 x^2) g: anti-paraHermitian for the same φ, generally a different connection.
    Expr factor = exp(Expr(0.2) * Expr::variable(s.coordinates[0]) +
                      (n > 1 ? Expr(0.1) * Expr::variable(s.coordinates[1]) : Expr(0.0)));
    Tensor<Expr, 2> h(n);
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < n; ++c) h(i, c) = factor * out.manifold->metric(i, c);
    out.second = std::make_shared<const ChartManifold>(s.coordinates, h);
  }

  if (s.vector_fields.empty()) {
    out.fields.emplace_back("zero", VectorField(static_cast<std::size_t>(n), Expr(0.0)));
    out.fields.emplace_back("coordinate", coordinate_field(n, 0));
  }
  for (const auto& [name, comps] : s.vector_fields) {
    if (static_cast<int>(comps.size()) != n)
      throw SpecError("vector_fields." + name + ": expected " + std::to_string(n) + " components");
    VectorField v;
    for (int i = 0; i < n; ++i) v.push_back(parse_at(comps[i], "vector_fields." + name + "[" + std::to_string(i + 1) + "]"));
    out.fields.emplace_back(name, v);
  }
  return out;
}

inline LoadedSpec load_spec_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = detail::line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw SpecError("parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + e.what());
  }
  return build_spec(spec_from_json(j), text);
}

inline LoadedSpec load_builtin(const std::string& name) {
  const auto j = builtin_json(name);
  if (!j) throw SpecError("unknown builtin '" + name + "'");
  const std::string text = j->dump(2);
  return build_spec(spec_from_json(*j), text);
}

// A path to a spec file, or a builtin name when no such file exists.
inline LoadedSpec load_spec(const std::string& path_or_name) {
  std::ifstream in(path_or_name);
  if (in) {
    std::stringstream ss;
    ss << in.rdbuf();
    return load_spec_text(ss.str());
  }
  if (builtin_json(path_or_name)) return load_builtin(path_or_name);
  throw SpecError("no spec file or builtin named '" + path_or_name + "'");
}

}  // namespace tbg
