#include "carnot/manifest.hpp"

#include "bundled_manifests.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace carnot {

using nlohmann::json;

namespace {

class Reader {
public:
  [[noreturn]] static void fail(const std::string& path, const std::string& message)
  {
    throw ParseError("at " + (path.empty() ? std::string("/") : path) + ": " + message);
  }

  static void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys)
  {
    if (!obj.is_object())
      fail(path, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items())
      if (!allowed.count(key))
        fail(path, "unknown key '" + key + "'");
  }

  static const json& require(const json& obj, const std::string& path, const char* key)
  {
    if (!obj.contains(key))
      fail(path, std::string("missing key '") + key + "'");
    return obj.at(key);
  }

  static std::string string(const json& v, const std::string& path)
  {
    if (!v.is_string())
      fail(path, "expected a string");
    return v.get<std::string>();
  }

  static long integer(const json& v, const std::string& path)
  {
    if (!v.is_number_integer())
      fail(path, "expected an integer");
    return v.get<long>();
  }

  static int index(const json& v, const std::string& path, int dim)
  {
    const long i = integer(v, path);
    if (i < 1 || i > dim)
      fail(path, "index " + std::to_string(i) + " outside 1.." + std::to_string(dim));
    return static_cast<int>(i - 1);
  }

  static Rational rational(const json& v, const std::string& path)
  {
    if (v.is_number_integer())
      return Rational(v.get<long>());
    const std::string s = string(v, path);
    try {
      return parse_rational(s);
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }

  static double real(const json& v, const std::string& path)
  {
    if (v.is_number())
      return v.get<double>();
    return rational(v, path).convert_to<double>();
  }

  static VectorQ vector(const json& v, const std::string& path, int dim)
  {
    if (!v.is_array())
      fail(path, "expected an array");
    if (dim >= 0 && static_cast<int>(v.size()) != dim)
      fail(path, "expected " + std::to_string(dim) + " entries, found " + std::to_string(v.size()));
    VectorQ out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i)
      out[static_cast<Eigen::Index>(i)] = rational(v[i], path + "/" + std::to_string(i));
    return out;
  }

  static Polynomial polynomial(const json& v, const std::string& path, VariableLayout layout,
                               const std::vector<std::string>& names, int cap)
  {
    if (v.is_number_integer())
      return Polynomial::constant(layout, Rational(v.get<long>()), cap);
    const std::string s = string(v, path);
    try {
      return parse_polynomial(s, layout, names, cap);
    } catch (const ParseError& e) {
      fail(path, e.what());
    }
  }
};

std::string rstr(const Rational& q) { return to_string(q); }

json vector_json(const VectorQ& v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(rstr(v[i]));
  return out;
}

} // namespace

const FilteredChart& Manifest::require_chart() const
{
  if (!chart)
    throw ParseError("manifest has no chart");
  return *chart;
}

Manifest parse_manifest(std::string_view text)
{
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    int line = 1, column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    const auto colon = what.rfind(": ");
    throw ParseError("malformed JSON: " + (colon == std::string::npos ? what : what.substr(colon + 2)), line, column);
  }

  Manifest m;
  Reader::allow_keys(root, "", {"name", "chart", "splittings", "connection", "sections", "algebras", "run"});
  if (root.contains("name"))
    m.name = Reader::string(root["name"], "/name");

  int n = -1;
  std::vector<std::string> names;
  int cap = kDefaultDegreeCap;
  if (root.contains("chart")) {
    const json& c = root["chart"];
    Reader::allow_keys(c, "/chart", {"coordinates", "depth", "frame", "sample_points", "degree_cap"});
    const json& coords = Reader::require(c, "/chart", "coordinates");
    if (!coords.is_array() || coords.empty())
      Reader::fail("/chart/coordinates", "expected a nonempty array of names");
    for (std::size_t i = 0; i < coords.size(); ++i)
      names.push_back(Reader::string(coords[i], "/chart/coordinates/" + std::to_string(i)));
    n = static_cast<int>(names.size());
    if (c.contains("degree_cap")) {
      cap = static_cast<int>(Reader::integer(c["degree_cap"], "/chart/degree_cap"));
      if (cap < 1)
        Reader::fail("/chart/degree_cap", "degree cap must be positive");
    }
    const int depth = static_cast<int>(Reader::integer(Reader::require(c, "/chart", "depth"), "/chart/depth"));
    if (depth < 1)
      Reader::fail("/chart/depth", "depth must be at least 1");
    const json& frame = Reader::require(c, "/chart", "frame");
    if (!frame.is_array() || static_cast<int>(frame.size()) != n)
      Reader::fail("/chart/frame", "expected one frame field per coordinate");
    const VariableLayout layout{n, false};
    std::vector<PolyVectorField> fields;
    std::vector<int> orders;
    for (int a = 0; a < n; ++a) {
      const std::string path = "/chart/frame/" + std::to_string(a);
      const json& f = frame[static_cast<std::size_t>(a)];
      Reader::allow_keys(f, path, {"order", "components"});
      const long o = Reader::integer(Reader::require(f, path, "order"), path + "/order");
      if (o < 1 || o > depth)
        Reader::fail(path + "/order", "order " + std::to_string(o) + " outside 1.." + std::to_string(depth));
      if (!orders.empty() && o < orders.back())
        Reader::fail(path + "/order", "orders must be nondecreasing");
      orders.push_back(static_cast<int>(o));
      const json& comps = Reader::require(f, path, "components");
      if (!comps.is_array() || static_cast<int>(comps.size()) != n)
        Reader::fail(path + "/components", "expected " + std::to_string(n) + " components");
      std::vector<Polynomial> polys;
      for (int i = 0; i < n; ++i)
        polys.push_back(Reader::polynomial(comps[static_cast<std::size_t>(i)],
                                           path + "/components/" + std::to_string(i), layout, names, cap));
      fields.emplace_back(std::move(polys));
    }
    std::vector<VectorQ> samples;
    if (c.contains("sample_points")) {
      const json& sp = c["sample_points"];
      if (!sp.is_array() || sp.empty())
        Reader::fail("/chart/sample_points", "expected a nonempty array of points");
      for (std::size_t i = 0; i < sp.size(); ++i)
        samples.push_back(Reader::vector(sp[i], "/chart/sample_points/" + std::to_string(i), n));
    }
    m.chart.emplace(names, depth, std::move(fields), std::move(orders), std::move(samples));
  }

  auto need_chart = [&](const char* what) {
    if (n < 0)
      Reader::fail(std::string("/") + what, "needs a chart");
  };

  if (root.contains("splittings")) {
    need_chart("splittings");
    const json& s = root["splittings"];
    if (!s.is_object())
      Reader::fail("/splittings", "expected an object of named correction lists");
    for (const auto& [key, list] : s.items()) {
      const std::string path = "/splittings/" + key;
      if (!list.is_array())
        Reader::fail(path, "expected an array of corrections");
      Splitting::Corrections corr;
      for (std::size_t i = 0; i < list.size(); ++i) {
        const std::string p = path + "/" + std::to_string(i);
        Reader::allow_keys(list[i], p, {"a", "b", "value"});
        const int a = Reader::index(Reader::require(list[i], p, "a"), p + "/a", n);
        const int b = Reader::index(Reader::require(list[i], p, "b"), p + "/b", n);
        if (!(m.chart->order(b) < m.chart->order(a)))
          Reader::fail(p, "correction must map X_a into fields of strictly lower order");
        if (corr.count({a, b}))
          Reader::fail(p, "duplicate correction");
        corr.emplace(std::make_pair(a, b), Reader::polynomial(Reader::require(list[i], p, "value"), p + "/value",
                                                              VariableLayout{n, false}, names, cap));
      }
      m.splittings.emplace(key, std::move(corr));
    }
  }

  if (root.contains("connection")) {
    need_chart("connection");
    const json& list = root["connection"];
    if (!list.is_array())
      Reader::fail("/connection", "expected an array of Christoffel entries");
    GradedConnection::Christoffels ch;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string p = "/connection/" + std::to_string(i);
      Reader::allow_keys(list[i], p, {"c", "a", "b", "value"});
      const int c = Reader::index(Reader::require(list[i], p, "c"), p + "/c", n);
      const int a = Reader::index(Reader::require(list[i], p, "a"), p + "/a", n);
      const int b = Reader::index(Reader::require(list[i], p, "b"), p + "/b", n);
      if (ch.count({c, a, b}))
        Reader::fail(p, "duplicate Christoffel entry");
      ch.emplace(std::make_tuple(c, a, b), Reader::polynomial(Reader::require(list[i], p, "value"), p + "/value",
                                                              VariableLayout{n, false}, names, cap));
    }
    m.connection = std::move(ch);
  }

  if (root.contains("sections")) {
    need_chart("sections");
    const json& s = root["sections"];
    if (!s.is_object())
      Reader::fail("/sections", "expected an object of named sections");
    std::vector<std::string> tnames = names;
    tnames.push_back("t");
    for (const auto& [key, sec] : s.items()) {
      const std::string path = "/sections/" + key;
      Reader::allow_keys(sec, path, {"kind", "coefficients"});
      SectionSpec spec;
      const std::string kind = Reader::string(Reader::require(sec, path, "kind"), path + "/kind");
      if (kind == "H")
        spec.kind = SectionSpec::Kind::H;
      else if (kind == "G")
        spec.kind = SectionSpec::Kind::Graded;
      else
        Reader::fail(path + "/kind", "kind must be \"H\" or \"G\"");
      const json& coeffs = Reader::require(sec, path, "coefficients");
      if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != n)
        Reader::fail(path + "/coefficients", "expected " + std::to_string(n) + " coefficients");
      for (int a = 0; a < n; ++a)
        spec.coefficients.push_back(Reader::polynomial(coeffs[static_cast<std::size_t>(a)],
                                                       path + "/coefficients/" + std::to_string(a),
                                                       VariableLayout{n, true}, tnames, cap));
      m.sections.emplace(key, std::move(spec));
    }
  }

  if (root.contains("algebras")) {
    const json& s = root["algebras"];
    if (!s.is_object())
      Reader::fail("/algebras", "expected an object of named algebras");
    for (const auto& [key, alg] : s.items()) {
      const std::string path = "/algebras/" + key;
      Reader::allow_keys(alg, path, {"weights", "brackets", "constants"});
      const json& w = Reader::require(alg, path, "weights");
      if (!w.is_array() || w.empty())
        Reader::fail(path + "/weights", "expected a nonempty array");
      std::vector<int> weights;
      for (std::size_t i = 0; i < w.size(); ++i)
        weights.push_back(static_cast<int>(Reader::integer(w[i], path + "/weights/" + std::to_string(i))));
      const int d = static_cast<int>(weights.size());
      GradedLieAlgebra<Rational> g;
      try {
        g = GradedLieAlgebra<Rational>(weights);
      } catch (const std::exception& e) {
        Reader::fail(path + "/weights", e.what());
      }
      if (alg.contains("brackets")) {
        const json& list = alg["brackets"];
        if (!list.is_array())
          Reader::fail(path + "/brackets", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
          const std::string p = path + "/brackets/" + std::to_string(i);
          Reader::allow_keys(list[i], p, {"a", "b", "value"});
          const int a = Reader::index(Reader::require(list[i], p, "a"), p + "/a", d);
          const int b = Reader::index(Reader::require(list[i], p, "b"), p + "/b", d);
          g = g.with_bracket(a, b, Reader::vector(Reader::require(list[i], p, "value"), p + "/value", d));
        }
      }
      if (alg.contains("constants")) {
        const json& list = alg["constants"];
        if (!list.is_array())
          Reader::fail(path + "/constants", "expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
          const std::string p = path + "/constants/" + std::to_string(i);
          Reader::allow_keys(list[i], p, {"a", "b", "k", "value"});
          const int a = Reader::index(Reader::require(list[i], p, "a"), p + "/a", d);
          const int b = Reader::index(Reader::require(list[i], p, "b"), p + "/b", d);
          const int k = Reader::index(Reader::require(list[i], p, "k"), p + "/k", d);
          g = g.with_constant(a, b, k, Reader::rational(Reader::require(list[i], p, "value"), p + "/value"));
        }
      }
      m.algebras.emplace(key, std::move(g));
    }
  }

  if (root.contains("run")) {
    const json& r = root["run"];
    Reader::allow_keys(r, "/run", {"point", "vectors", "t", "t_sequence", "seed", "steps", "tol", "radius"});
    if (r.contains("point"))
      m.run.point = Reader::vector(r["point"], "/run/point", n);
    if (r.contains("vectors")) {
      if (!r["vectors"].is_array())
        Reader::fail("/run/vectors", "expected an array of vectors");
      for (std::size_t i = 0; i < r["vectors"].size(); ++i)
        m.run.vectors.push_back(Reader::vector(r["vectors"][i], "/run/vectors/" + std::to_string(i), n));
    }
    if (r.contains("t"))
      m.run.t = Reader::rational(r["t"], "/run/t");
    if (r.contains("t_sequence")) {
      const VectorQ ts = Reader::vector(r["t_sequence"], "/run/t_sequence", -1);
      for (Eigen::Index i = 0; i < ts.size(); ++i)
        m.run.t_sequence.push_back(ts[i]);
    }
    if (r.contains("seed")) {
      if (!r["seed"].is_number_unsigned())
        Reader::fail("/run/seed", "expected a nonnegative integer");
      m.run.seed = r["seed"].get<std::uint64_t>();
    }
    if (r.contains("steps")) {
      const long s = Reader::integer(r["steps"], "/run/steps");
      if (s < 1)
        Reader::fail("/run/steps", "steps must be positive");
      m.run.steps = static_cast<int>(s);
    }
    if (r.contains("tol"))
      m.run.tol = Reader::real(r["tol"], "/run/tol");
    if (r.contains("radius"))
      m.run.radius = Reader::real(r["radius"], "/run/radius");
  }
  return m;
}

Manifest load_manifest(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot read manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string dump_manifest(const Manifest& m)
{
  json root = json::object();
  if (!m.name.empty())
    root["name"] = m.name;
  std::vector<std::string> names;
  int cap = kDefaultDegreeCap;
  if (m.chart) {
    const FilteredChart& c = *m.chart;
    names = c.coordinates();
    cap = c.degree_cap();
    json chart;
    chart["coordinates"] = names;
    chart["depth"] = c.depth();
    if (cap != kDefaultDegreeCap)
      chart["degree_cap"] = cap;
    json frame = json::array();
    for (int a = 0; a < c.dim(); ++a) {
      json comps = json::array();
      for (const auto& p : c.frame(a).components())
        comps.push_back(to_string(p, names));
      frame.push_back({{"order", c.order(a)}, {"components", comps}});
    }
    chart["frame"] = frame;
    json points = json::array();
    for (const auto& p : c.sample_points())
      points.push_back(vector_json(p));
    chart["sample_points"] = points;
    root["chart"] = chart;
  }
  if (!m.splittings.empty()) {
    json s = json::object();
    for (const auto& [key, corr] : m.splittings) {
      json list = json::array();
      for (const auto& [ab, poly] : corr)
        list.push_back({{"a", ab.first + 1}, {"b", ab.second + 1}, {"value", to_string(poly, names)}});
      s[key] = list;
    }
    root["splittings"] = s;
  }
  if (m.connection) {
    json list = json::array();
    for (const auto& [key, poly] : *m.connection)
      list.push_back({{"c", std::get<0>(key) + 1},
                      {"a", std::get<1>(key) + 1},
                      {"b", std::get<2>(key) + 1},
                      {"value", to_string(poly, names)}});
    root["connection"] = list;
  }
  if (!m.sections.empty()) {
    std::vector<std::string> tnames = names;
    tnames.push_back("t");
    json s = json::object();
    for (const auto& [key, spec] : m.sections) {
      json coeffs = json::array();
      for (const auto& p : spec.coefficients)
        coeffs.push_back(to_string(p, tnames));
      s[key] = {{"kind", spec.kind == SectionSpec::Kind::H ? "H" : "G"}, {"coefficients", coeffs}};
    }
    root["sections"] = s;
  }
  if (!m.algebras.empty()) {
    json s = json::object();
    for (const auto& [key, alg] : m.algebras) {
      json constants = json::array();
      const int d = alg.dim();
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int k = 0; k < d; ++k)
            if (!alg.constant(a, b, k).is_zero())
              constants.push_back({{"a", a + 1}, {"b", b + 1}, {"k", k + 1}, {"value", rstr(alg.constant(a, b, k))}});
      s[key] = {{"weights", alg.weights()}, {"constants", constants}};
    }
    root["algebras"] = s;
  }
  json run = json::object();
  if (m.run.point)
    run["point"] = vector_json(*m.run.point);
  if (!m.run.vectors.empty()) {
    json vs = json::array();
    for (const auto& v : m.run.vectors)
      vs.push_back(vector_json(v));
    run["vectors"] = vs;
  }
  if (m.run.t)
    run["t"] = rstr(*m.run.t);
  if (!m.run.t_sequence.empty()) {
    json ts = json::array();
    for (const auto& t : m.run.t_sequence)
      ts.push_back(rstr(t));
    run["t_sequence"] = ts;
  }
  if (m.run.seed)
    run["seed"] = *m.run.seed;
  if (m.run.steps)
    run["steps"] = *m.run.steps;
  if (m.run.tol)
    run["tol"] = *m.run.tol;
  if (m.run.radius)
    run["radius"] = *m.run.radius;
  if (!run.empty())
    root["run"] = run;
  return root.dump(2) + "\n";
}

namespace {

std::optional<int> abelian_dim(const std::string& name)
{
  const std::string prefix = "abelian-";
  if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size() || name.size() > prefix.size() + 2)
    return std::nullopt;
  int n = 0;
  for (std::size_t i = prefix.size(); i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i])))
      return std::nullopt;
    n = n * 10 + (name[i] - '0');
  }
  if (n < 1 || n > 16)
    return std::nullopt;
  return n;
}

std::string abelian_text(int n)
{
  json coords = json::array();
  json frame = json::array();
  for (int i = 0; i < n; ++i) {
    coords.push_back("x" + std::to_string(i + 1));
    json comps = json::array();
    for (int j = 0; j < n; ++j)
      comps.push_back(i == j ? "1" : "0");
    frame.push_back({{"order", 1}, {"components", comps}});
  }
  json root = {{"name", "abelian-" + std::to_string(n)},
               {"chart", {{"coordinates", coords}, {"depth", 1}, {"frame", frame}}}};
  return root.dump(2) + "\n";
}

} // namespace

std::vector<std::string> bundled_names()
{
  std::vector<std::string> names{"abelian-n"};
  for (const auto& entry : bundled::manifests)
    names.emplace_back(entry.name);
  return names;
}

std::string bundled_manifest_text(const std::string& name)
{
  if (name == "abelian-n")
    return abelian_text(3);
  if (const auto n = abelian_dim(name))
    return abelian_text(*n);
  for (const auto& entry : bundled::manifests)
    if (name == entry.name)
      return std::string(entry.text);
  throw std::invalid_argument("unknown bundled example '" + name + "'");
}

Manifest bundled_manifest(const std::string& name) { return parse_manifest(bundled_manifest_text(name)); }

} // namespace carnot
