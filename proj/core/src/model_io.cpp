#include "ruelle/model_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ruelle/error.hpp"

namespace ruelle {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& path, const std::string& what) {
  throw SchemaError(path + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) schema(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) schema(path + "." + key, "missing required field");
  return *it;
}

std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  return j.get<std::int64_t>();
}

Rational rational_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_string()) {
    if (auto q = parse_rational(j.get<std::string>())) return *q;
    schema(path, "cannot parse '" + j.get<std::string>() + "' as a rational");
  }
  if (j.is_object() && j.contains("num")) {
    const std::int64_t den = j.contains("den") ? integer(j["den"], path + ".den") : 1;
    if (den == 0) schema(path + ".den", "zero denominator");
    return Rational(integer(j["num"], path + ".num"), den);
  }
  schema(path, "expected a rational");
}

Real number(const json& j, const std::string& path) {
  if (j.is_number_float()) return Real(j.get<double>());
  if (j.is_number_integer() || j.is_string()) return Real::exact(rational_field(j, path));
  if (j.is_object() && j.contains("num")) {
    const Rational q = rational_field(j, path);
    PiLinear x;
    if (j.contains("unit")) {
      if (j["unit"] != "pi") schema(path + ".unit", "only \"pi\" is supported");
      x.b = q;
    } else {
      x.a = q;
    }
    if (j.contains("pi_num")) {
      const std::int64_t den = j.contains("pi_den") ? integer(j["pi_den"], path + ".pi_den") : 1;
      if (den == 0) schema(path + ".pi_den", "zero denominator");
      x.b += Rational(integer(j["pi_num"], path + ".pi_num"), den);
    }
    return Real::exact(x);
  }
  schema(path, "expected a number");
}

json emit_rational(const Rational& q) { return json{{"num", q.numerator()}, {"den", q.denominator()}}; }

json emit_number(const Real& x) {
  if (!x.is_exact()) return x.value();
  const PiLinear& e = *x.exact();
  if (e.b == 0) return emit_rational(e.a);
  if (e.a == 0) {
    json j = emit_rational(e.b);
    j["unit"] = "pi";
    return j;
  }
  json j = emit_rational(e.a);
  j["pi_num"] = e.b.numerator();
  j["pi_den"] = e.b.denominator();
  return j;
}

EigenDatum parse_eigen(const json& j, const std::string& path, const CriticalElement& elem) {
  EigenDatum d;
  if (j.is_number() || j.is_string() || (j.is_object() && j.contains("num"))) {
    d.chi = number(j, path);
  } else {
    d.chi = number(field(j, "chi", path), path + ".chi");
    if (j.contains("omega")) {
      const json& w = j["omega"];
      if (w.is_object() && w.contains("turns")) {
        if (!elem.is_orbit()) schema(path + ".omega", "\"turns\" is only meaningful on closed orbits");
        const Rational turns = rational_field(w["turns"], path + ".omega.turns");
        d.omega = turns * two_pi_over(elem.period);
      } else {
        d.omega = number(w, path + ".omega");
      }
    }
    if (j.contains("twist")) d.twist = rational_field(j["twist"], path + ".twist");
  }
  d.stable = d.chi.value() < 0.0;
  if (j.is_object() && j.contains("stable")) {
    if (!j["stable"].is_boolean()) schema(path + ".stable", "expected a boolean");
    d.stable = j["stable"].get<bool>();
  }
  return d;
}

CriticalElement parse_element(const json& j, const std::string& path, ElementKind kind) {
  CriticalElement e;
  e.kind = kind;
  const json& name = field(j, "name", path);
  if (!name.is_string()) schema(path + ".name", "expected a string");
  e.name = name.get<std::string>();
  if (kind == ElementKind::closed_orbit) e.period = number(field(j, "period", path), path + ".period");
  const json& eig = field(j, "eigenvalues", path);
  if (!eig.is_array()) schema(path + ".eigenvalues", "expected an array");
  for (std::size_t i = 0; i < eig.size(); ++i) {
    e.eigenvalues.push_back(parse_eigen(eig[i], path + ".eigenvalues[" + std::to_string(i) + "]", e));
  }
  if (kind == ElementKind::closed_orbit) {
    e.orientability = j.contains("orientability") ? rational_field(j["orientability"], path + ".orientability")
                                                  : implied_orientability(e);
  } else if (j.contains("orientability")) {
    e.orientability = rational_field(j["orientability"], path + ".orientability");
  }
  return e;
}

ComplexValue parse_gamma(const json& j, const std::string& path) {
  if (j.is_object() && (j.contains("re") || j.contains("im"))) {
    ComplexValue g;
    if (j.contains("re")) g.re = number(j["re"], path + ".re");
    if (j.contains("im")) g.im = number(j["im"], path + ".im");
    return g;
  }
  return {number(j, path), Real()};
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) line += text[i] == '\n';
  return line;
}

}  // namespace

FlowModel parse_model_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& err) {
    throw SchemaError("line " + std::to_string(line_of(text, err.byte)) + ": " + err.what());
  }
  if (!doc.is_object()) schema("$", "expected an object at top level");

  FlowModel m;
  m.dim = static_cast<int>(integer(field(doc, "dim", "$"), "$.dim"));
  m.connection.rank = doc.contains("rank") ? static_cast<int>(integer(doc["rank"], "$.rank")) : 1;

  if (doc.contains("fixed_points")) {
    const json& list = doc["fixed_points"];
    if (!list.is_array()) schema("$.fixed_points", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      m.fixed_points.push_back(parse_element(list[i], "$.fixed_points[" + std::to_string(i) + "]", ElementKind::fixed_point));
    }
  }
  if (doc.contains("orbits")) {
    const json& list = doc["orbits"];
    if (!list.is_array()) schema("$.orbits", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      m.orbits.push_back(parse_element(list[i], "$.orbits[" + std::to_string(i) + "]", ElementKind::closed_orbit));
    }
  }
  if (doc.contains("connection")) {
    const json& conn = doc["connection"];
    if (!conn.is_object()) schema("$.connection", "expected an object");
    for (const auto& [name, gammas] : conn.items()) {
      const std::string path = "$.connection." + name;
      if (!gammas.is_array()) schema(path, "expected an array of exponents");
      std::vector<ComplexValue> list;
      for (std::size_t i = 0; i < gammas.size(); ++i) {
        list.push_back(normalize_exponent(parse_gamma(gammas[i], path + "[" + std::to_string(i) + "]")));
      }
      m.connection.orbit_exponents.emplace_back(name, std::move(list));
    }
  }
  if (doc.contains("quiver_edges")) {
    const json& edges = doc["quiver_edges"];
    if (!edges.is_array()) schema("$.quiver_edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const json& e = edges[i];
      const std::string path = "$.quiver_edges[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
        schema(path, "expected a [lower, upper] pair of names");
      }
      m.quiver_edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
  }

  std::string mode = "auto";
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) schema("$.mode", "expected a string");
    mode = doc["mode"].get<std::string>();
  }
  if (mode == "exact") {
    m.mode = ArithmeticMode::exact;
  } else if (mode == "float") {
    m = to_floating(m);
  } else if (mode == "auto") {
    m.mode = m.all_exact() ? ArithmeticMode::exact : ArithmeticMode::floating;
    if (m.mode == ArithmeticMode::floating) m = to_floating(m);
  } else {
    schema("$.mode", "expected \"exact\", \"float\" or \"auto\"");
  }
  return m;
}

FlowModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path.string());
  return parse_model_text(buf.str());
}

FlowModel parse_model_file(const std::filesystem::path& path) {
  FlowModel m = load_model(path);
  require_valid(m);
  return m;
}

std::string dump_model(const FlowModel& model) {
  json doc;
  doc["dim"] = model.dim;
  doc["rank"] = model.connection.rank;
  doc["mode"] = model.mode == ArithmeticMode::exact ? "exact" : "float";

  auto emit_element = [](const CriticalElement& e) {
    json j;
    j["name"] = e.name;
    if (e.is_orbit()) {
      j["period"] = emit_number(e.period);
      j["orientability"] = emit_rational(e.orientability);
    }
    json eig = json::array();
    for (const auto& d : e.eigenvalues) {
      json x;
      x["chi"] = emit_number(d.chi);
      std::optional<Rational> turns;
      if (e.is_orbit() && d.omega.is_exact()) {
        if (const Real step = two_pi_over(e.period); step.is_exact()) turns = ratio(*d.omega.exact(), *step.exact());
      }
      if (turns && *turns != 0) x["omega"] = json{{"turns", emit_rational(*turns)}};
      else x["omega"] = emit_number(d.omega);
      x["twist"] = emit_rational(d.twist);
      x["stable"] = d.stable;
      eig.push_back(std::move(x));
    }
    j["eigenvalues"] = std::move(eig);
    return j;
  };

  doc["fixed_points"] = json::array();
  for (const auto& e : model.fixed_points) doc["fixed_points"].push_back(emit_element(e));
  doc["orbits"] = json::array();
  for (const auto& e : model.orbits) doc["orbits"].push_back(emit_element(e));
  json conn = json::object();
  for (const auto& [name, gammas] : model.connection.orbit_exponents) {
    json list = json::array();
    for (const auto& g : gammas) list.push_back(json{{"re", emit_number(g.re)}, {"im", emit_number(g.im)}});
    conn[name] = std::move(list);
  }
  doc["connection"] = std::move(conn);
  json edges = json::array();
  for (const auto& [lo, hi] : model.quiver_edges) edges.push_back(json::array({lo, hi}));
  doc["quiver_edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

}  // namespace ruelle
