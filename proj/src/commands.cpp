#include "carnot/commands.hpp"

#include "carnot/exponential.hpp"
#include "carnot/sampling.hpp"
#include "carnot/tangent_algebroid.hpp"

#include <chrono>
#include <functional>
#include <sstream>

namespace carnot {

using nlohmann::json;

namespace {

constexpr double kDefaultRadius = 2.0;

json vec_json(const VectorQ& v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(to_string(v[i]));
  return out;
}

json vec_json(const VectorX<double>& v)
{
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back(v[i]);
  return out;
}

std::string vec_arg(const VectorQ& v)
{
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + to_string(v[i]);
  return out;
}

json checks_json(const CheckReport& report)
{
  json out = json::array();
  for (const auto& c : report.checks) {
    json entry = {{"name", c.name}, {"passed", c.passed}};
    if (!c.witness.empty())
      entry["witness"] = c.witness;
    out.push_back(entry);
  }
  return out;
}

struct Context {
  const Manifest& m;
  const CommandOptions& opt;

  int dim() const { return m.require_chart().dim(); }

  VectorQ point() const
  {
    VectorQ p = opt.point ? *opt.point : m.run.point ? *m.run.point : VectorQ::Zero(dim());
    if (p.size() != dim())
      throw ParseError("point has " + std::to_string(p.size()) + " coordinates, chart has " + std::to_string(dim()));
    return p;
  }

  std::vector<VectorQ> vectors(std::size_t needed) const
  {
    std::vector<VectorQ> v = !opt.vectors.empty() ? opt.vectors : m.run.vectors;
    if (v.size() < needed)
      throw ParseError("command needs " + std::to_string(needed) + " --vector arguments");
    for (const auto& x : v)
      if (x.size() != dim())
        throw ParseError("vector has " + std::to_string(x.size()) + " coordinates, chart has " +
                         std::to_string(dim()));
    return v;
  }

  Rational t() const { return opt.t ? *opt.t : m.run.t ? *m.run.t : Rational(1); }

  std::vector<Rational> t_sequence() const
  {
    if (!opt.t_sequence.empty())
      return opt.t_sequence;
    if (!m.run.t_sequence.empty())
      return m.run.t_sequence;
    return {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)};
  }

  std::uint64_t seed() const { return opt.seed ? *opt.seed : m.run.seed ? *m.run.seed : kDefaultSampleSeed; }

  ChartDomain domain() const
  {
    ChartDomain d;
    d.radius = opt.radius ? *opt.radius : m.run.radius ? *m.run.radius : kDefaultRadius;
    d.steps = opt.steps ? *opt.steps : m.run.steps ? *m.run.steps : d.steps;
    d.tol = opt.tol ? *opt.tol : m.run.tol ? *m.run.tol : d.tol;
    d.check();
    return d;
  }

  Splitting splitting(const ValidatedChart& chart) const
  {
    if (opt.splitting.empty())
      return canonical_splitting(chart);
    auto it = m.splittings.find(opt.splitting);
    if (it == m.splittings.end())
      throw ParseError("manifest has no splitting named '" + opt.splitting + "'");
    return Splitting(chart, it->second);
  }

  GradedConnection connection(const ValidatedChart& chart) const
  {
    return m.connection ? GradedConnection(chart, *m.connection) : GradedConnection::flat(chart);
  }
};

std::string manifest_label(const Manifest& m, const CommandOptions& opt)
{
  if (!m.name.empty())
    return m.name;
  if (!opt.source.example.empty())
    return opt.source.example;
  return opt.source.path;
}

CommandResult finish(const std::string& command, const Manifest* m, const CommandOptions& opt, CheckReport checks,
                     json result, std::chrono::steady_clock::time_point start)
{
  CommandResult out;
  out.passed = checks.passed();
  json& r = out.report;
  r["command"] = command;
  if (m)
    r["manifest"] = manifest_label(*m, opt);
  r["checks"] = checks_json(checks);
  r["passed"] = out.passed;
  if (!checks.note.empty())
    r["note"] = checks.note;
  if (!result.is_null())
    r["result"] = std::move(result);
  r["reproduce"] = reproduce_line(command, opt);
  if (opt.timing)
    r["timing_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

// Runs body; library errors other than parse errors become a failed check.
CommandResult guarded(const std::string& command, const Manifest& m, const CommandOptions& opt,
                      const std::function<void(CheckReport&, json&)>& body)
{
  const auto start = std::chrono::steady_clock::now();
  CheckReport checks;
  json result;
  try {
    body(checks, result);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    checks.add("evaluation", false, e.what());
  }
  return finish(command, &m, opt, std::move(checks), std::move(result), start);
}

void add_prefixed(CheckReport& into, const CheckReport& from, const std::string& prefix)
{
  for (const auto& c : from.checks)
    into.add(prefix + c.name, c.passed, c.witness);
}

json algebra_json(const GradedLieAlgebra<Rational>& alg)
{
  json constants = json::array();
  for (int a = 0; a < alg.dim(); ++a)
    for (int b = a + 1; b < alg.dim(); ++b)
      for (int k = 0; k < alg.dim(); ++k)
        if (!alg.constant(a, b, k).is_zero())
          constants.push_back({{"a", a + 1}, {"b", b + 1}, {"k", k + 1}, {"value", to_string(alg.constant(a, b, k))}});
  return {{"weights", alg.weights()}, {"constants", constants}};
}

template <typename Scalar>
json element_json(const TangentGroupoidElement<Scalar>& g)
{
  if (const auto* p = std::get_if<PairArrow<Scalar>>(&g)) {
    if constexpr (is_exact_v<Scalar>)
      return {{"kind", "pair"}, {"range", vec_json(p->range)}, {"source", vec_json(p->source)}, {"t", to_string(p->t)}};
    else
      return {{"kind", "pair"}, {"range", vec_json(p->range)}, {"source", vec_json(p->source)}, {"t", p->t}};
  }
  const auto& o = std::get<OsculatingArrow<Scalar>>(g);
  return {{"kind", "osculating"}, {"base", vec_json(o.base)}, {"v", vec_json(o.v)}, {"t", 0}};
}

} // namespace

VectorQ parse_vector_arg(const std::string& text)
{
  std::vector<Rational> values;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    const std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    try {
      values.push_back(parse_rational(piece));
    } catch (const ParseError& e) {
      throw ParseError("in vector '" + text + "': " + e.what(), 0, static_cast<int>(start) + e.column());
    }
    if (comma == std::string::npos)
      break;
    start = comma + 1;
  }
  VectorQ v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

std::string reproduce_line(const std::string& command, const CommandOptions& opt)
{
  std::string line = "carnot " + command;
  if (!opt.source.example.empty())
    line += " --example " + opt.source.example;
  else if (!opt.source.path.empty())
    line += " --manifest " + opt.source.path;
  if (opt.point)
    line += " --point " + vec_arg(*opt.point);
  for (const auto& v : opt.vectors)
    line += " --vector " + vec_arg(v);
  if (opt.t)
    line += " --t " + to_string(*opt.t);
  if (!opt.t_sequence.empty()) {
    line += " --t-seq ";
    for (std::size_t i = 0; i < opt.t_sequence.size(); ++i)
      line += (i ? "," : "") + to_string(opt.t_sequence[i]);
  }
  if (opt.seed)
    line += " --seed " + std::to_string(*opt.seed);
  if (opt.steps)
    line += " --steps " + std::to_string(*opt.steps);
  if (opt.tol)
    line += " --tol " + format_double(*opt.tol);
  if (opt.radius)
    line += " --radius " + format_double(*opt.radius);
  if (!opt.splitting.empty())
    line += " --splitting " + opt.splitting;
  if (opt.exact)
    line += " --exact";
  if (opt.roundtrip)
    line += " --roundtrip";
  for (const auto& i : opt.inject)
    line += " --inject " + i;
  return line;
}

CommandResult cmd_validate(const Manifest& m, const CommandOptions& opt)
{
  return guarded("validate", m, opt, [&](CheckReport& checks, json& result) {
    const FilteredChart& fc = m.require_chart();
    const CheckReport filtration = validate_filtration(fc);
    add_prefixed(checks, filtration, "filtration.");
    checks.note = filtration.note;
    result["dim"] = fc.dim();
    result["depth"] = fc.depth();
    result["orders"] = fc.orders();
    result["ranks"] = fc.ranks();
    for (const auto& [name, alg] : m.algebras) {
      const CheckReport r = verify_algebra(alg);
      add_prefixed(checks, r, "algebra[" + name + "].");
    }
    if (!filtration.passed())
      return;
    const ValidatedChart chart = ValidatedChart::validate(fc);
    std::string witness;
    for (std::size_t i = 0; i < fc.sample_points().size() && witness.empty(); ++i) {
      const CheckReport r = verify_algebra(osculating_algebra_at(chart, fc.sample_points()[i]));
      if (const Check* bad = r.first_failure())
        witness = "sample point #" + std::to_string(i) + " " + to_string(fc.sample_points()[i]) + ": " + bad->name +
                  " " + bad->witness;
    }
    checks.add("osculating_algebras", witness.empty(), witness);
    result["unimodular"] = chart.unimodular();
    if (m.connection)
      add_prefixed(checks, validate_graded_connection(GradedConnection(chart, *m.connection)), "connection.");
    for (const auto& [name, spec] : m.sections) {
      if (spec.kind != SectionSpec::Kind::H)
        continue;
      const Membership mem = membership_XH(HSection(chart, spec.coefficients));
      result["sections"][name] = mem.describe();
    }
  });
}

CommandResult cmd_osculate(const Manifest& m, const CommandOptions& opt)
{
  return guarded("osculate", m, opt, [&](CheckReport& checks, json& result) {
    const Context ctx{m, opt};
    const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
    const VectorQ p = ctx.point();
    const auto alg = osculating_algebra_at(chart, p);
    result = algebra_json(alg);
    result["point"] = vec_json(p);
    add_prefixed(checks, verify_algebra(alg), "algebra.");
  });
}

CommandResult cmd_bch(const Manifest& m, const CommandOptions& opt)
{
  return guarded("bch", m, opt, [&](CheckReport& checks, json& result) {
    const Context ctx{m, opt};
    const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
    const VectorQ p = ctx.point();
    const auto vs = ctx.vectors(2);
    const auto alg = osculating_algebra_at(chart, p);
    add_prefixed(checks, verify_algebra(alg), "algebra.");
    result["point"] = vec_json(p);
    result["u"] = vec_json(vs[0]);
    result["v"] = vec_json(vs[1]);
    result["product"] = vec_json(bch_product(alg, vs[0], vs[1]));
  });
}

CommandResult cmd_chart(const Manifest& m, const CommandOptions& opt)
{
  return guarded("chart", m, opt, [&](CheckReport& checks, json& result) {
    const Context ctx{m, opt};
    const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
    const Splitting psi = ctx.splitting(chart);
    const GradedConnection conn = ctx.connection(chart);
    add_prefixed(checks, validate_graded_connection(conn), "connection.");
    const VectorQ x = ctx.point();
    const VectorQ v = ctx.vectors(1)[0];
    const Rational t = ctx.t();
    const ChartDomain domain = ctx.domain();
    result["convention"] = kProductConvention;
    result["x"] = vec_json(x);
    result["v"] = vec_json(v);
    result["t"] = to_string(t);
    result["splitting"] = opt.splitting.empty() ? "canonical" : opt.splitting;
    result["steps"] = domain.steps;
    if (opt.exact) {
      const ExponentialMap<Rational> map(conn, psi, domain);
      const auto g = map.global_chart(x, v, t);
      result["element"] = element_json(g);
      if (opt.roundtrip) {
        if (const auto* p = std::get_if<PairArrow<Rational>>(&g)) {
          const auto back = map.chart_log(*p);
          const VectorQ diff = back.v - v;
          result["roundtrip_v"] = vec_json(back.v);
          checks.add("roundtrip", is_zero_vector(diff), is_zero_vector(diff) ? "" : "difference " + to_string(diff));
        }
      }
      return;
    }
    const ExponentialMap<double> map(conn, psi, domain);
    const auto g = map.global_chart(vector_cast<double>(x), vector_cast<double>(v), t.convert_to<double>());
    result["element"] = element_json(g);
    if (opt.roundtrip) {
      if (const auto* p = std::get_if<PairArrow<double>>(&g)) {
        const auto back = map.chart_log(*p);
        const double err = (back.v - vector_cast<double>(v)).cwiseAbs().maxCoeff();
        result["roundtrip_v"] = vec_json(back.v);
        result["roundtrip_error"] = err;
        result["roundtrip_tolerance"] = 1e-10;
        checks.add("roundtrip", err <= 1e-10, err <= 1e-10 ? "" : "error " + format_double(err) + " > 1e-10");
      }
    }
  });
}

CommandResult cmd_deform(const Manifest& m, const CommandOptions& opt)
{
  return guarded("deform", m, opt, [&](CheckReport& checks, json& result) {
    const Context ctx{m, opt};
    const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
    const Splitting psi = ctx.splitting(chart);
    const GradedConnection conn = ctx.connection(chart);
    add_prefixed(checks, validate_graded_connection(conn), "connection.");
    const VectorQ x = ctx.point();
    const auto vs = ctx.vectors(2);
    const auto ts = ctx.t_sequence();
    const ChartDomain domain = ctx.domain();
    result["convention"] = kProductConvention;
    result["x"] = vec_json(x);
    result["v"] = vec_json(vs[0]);
    result["w"] = vec_json(vs[1]);
    result["splitting"] = opt.splitting.empty() ? "canonical" : opt.splitting;
    json rows = json::array();
    if (opt.exact) {
      const auto rep = deformation_limit_check<Rational>(conn, psi, x, vs[0], vs[1], ts, domain);
      result["limit"] = vec_json(rep.limit);
      for (const auto& r : rep.rows)
        rows.push_back({{"t", to_string(r.t)}, {"u", vec_json(r.u)}, {"error", r.error}});
      bool exact = true;
      for (const auto& r : rep.rows)
        exact = exact && r.u == rep.limit;
      checks.add("exact_limit", exact, exact ? "" : "u(t) differs from the osculating product");
      result["ratios"] = rep.ratios;
    } else {
      std::vector<double> td;
      for (const auto& t : ts)
        td.push_back(t.convert_to<double>());
      const auto rep = deformation_limit_check<double>(conn, psi, vector_cast<double>(x), vector_cast<double>(vs[0]),
                                                       vector_cast<double>(vs[1]), td, domain);
      result["limit"] = vec_json(rep.limit);
      for (std::size_t i = 0; i < rep.rows.size(); ++i)
        rows.push_back({{"t", to_string(ts[i])}, {"u", vec_json(rep.rows[i].u)}, {"error", rep.rows[i].error}});
      result["ratios"] = rep.ratios;
      add_prefixed(checks, rep.checks, "");
    }
    result["rows"] = rows;
  });
}

namespace {

// Jacobi fails on (e1, e2, e3) while every bracket respects the grading.
GradedLieAlgebra<Rational> jacobi_fixture()
{
  GradedLieAlgebra<Rational> g({1, 1, 1, 2, 2, 2, 3});
  auto e = [&](int k) { return basis_vector(g, k); };
  return g.with_bracket(0, 1, e(3)).with_bracket(1, 2, e(4)).with_bracket(2, 0, e(5)).with_bracket(0, 4, e(6));
}

GradedLieAlgebra<Rational> gradedness_fixture()
{
  GradedLieAlgebra<Rational> g({1, 1, 1});
  return g.with_bracket(0, 1, basis_vector(g, 2));
}

GradedLieAlgebra<Rational> antisymmetry_fixture()
{
  GradedLieAlgebra<Rational> g({1, 1, 2});
  return g.with_bracket(0, 1, basis_vector(g, 2)).with_constant(1, 0, 2, Rational(1));
}

std::string first_witness(const CheckReport& r)
{
  const Check* c = r.first_failure();
  return c ? c->name + ": " + c->witness : "";
}

void selftest_manifest(const std::string& name, std::uint64_t seed, CheckReport& checks, json& summary)
{
  const Manifest m = bundled_manifest(name);
  const std::string pre = name + ".";
  const FilteredChart& fc = m.require_chart();
  const CheckReport filtration = validate_filtration(fc);
  checks.add(pre + "filtration", filtration.passed(), first_witness(filtration));
  if (!filtration.passed())
    return;
  const ValidatedChart chart = ValidatedChart::validate(fc);
  const int n = chart.dim();
  Sampler rng(seed);

  std::string witness;
  for (std::size_t i = 0; i < fc.sample_points().size() && witness.empty(); ++i) {
    const CheckReport r = verify_algebra(osculating_algebra_at(chart, fc.sample_points()[i]));
    if (!r.passed())
      witness = "sample point #" + std::to_string(i) + ": " + first_witness(r);
  }
  checks.add(pre + "algebra_axioms", witness.empty(), witness);

  const auto alg = osculating_algebra_at(chart, VectorQ::Zero(n));
  witness.clear();
  const VectorQ zero = VectorQ::Zero(n);
  for (int i = 0; i < 20 && witness.empty(); ++i) {
    const VectorQ a = rng.vector(n), b = rng.vector(n), c = rng.vector(n);
    if (bch_product(alg, bch_product(alg, a, b), c) != bch_product(alg, a, bch_product(alg, b, c)))
      witness = "associativity fails for " + to_string(a) + ", " + to_string(b) + ", " + to_string(c);
    else if (bch_product(alg, a, zero) != a || bch_product(alg, zero, a) != a)
      witness = "identity fails for " + to_string(a);
    else if (!is_zero_vector(bch_product(alg, a, group_inverse(alg, a))))
      witness = "inverse fails for " + to_string(a);
  }
  checks.add(pre + "bch_group_axioms", witness.empty(), witness);

  witness.clear();
  for (int i = 0; i < 5 && witness.empty(); ++i) {
    const Rational lambda = rng.nonzero_rational();
    const VectorQ a = rng.vector(n), b = rng.vector(n);
    if (dilate(alg, lambda, bch_product(alg, a, b)) !=
            bch_product(alg, dilate(alg, lambda, a), dilate(alg, lambda, b)) ||
        dilate(alg, lambda, bracket(alg, a, b)) != bracket(alg, dilate(alg, lambda, a), dilate(alg, lambda, b)))
      witness = "lambda = " + to_string(lambda);
  }
  checks.add(pre + "dilation_homomorphism", witness.empty(), witness);

  if (chart.unimodular()) {
    std::string closure, morphism, roundtrip, leibniz;
    for (int i = 0; i < 5; ++i) {
      const Splitting psi = rng.splitting(chart);
      const GradedSection y1 = rng.graded_section(chart), y2 = rng.graded_section(chart);
      const HSection s1 = phi_psi(psi, y1), s2 = phi_psi(psi, y2);
      if (roundtrip.empty() && !(phi_psi_inverse(psi, s1) == y1))
        roundtrip = "sample " + std::to_string(i);
      const HSection br = algebroid_bracket(s1, s2);
      const Membership mem = membership_XH(br);
      if (closure.empty() && !mem)
        closure = "sample " + std::to_string(i) + ": " + mem.describe();
      if (mem && morphism.empty() && !(ev0H(br) == osculating_bracket(ev0H(s1), ev0H(s2))))
        morphism = "sample " + std::to_string(i);
      const Polynomial f = rng.polynomial(VariableLayout{n, false}, 1, 0, 2);
      for (const Rational& t0 : {Rational(1), Rational(1, 2)}) {
        const PolyVectorField lhs = ev_t(algebroid_bracket(s1, f.with_time() * s2), t0);
        const PolyVectorField x1 = ev_t(s1, t0), x2 = ev_t(s2, t0);
        const PolyVectorField rhs = f * ev_t(br, t0) + apply(x1, f) * x2;
        if (leibniz.empty() && !(lhs == rhs))
          leibniz = "sample " + std::to_string(i) + " at t = " + to_string(t0);
      }
    }
    checks.add(pre + "phi_psi_roundtrip", roundtrip.empty(), roundtrip);
    checks.add(pre + "bracket_closure", closure.empty(), closure);
    checks.add(pre + "ev0_morphism", morphism.empty(), morphism);
    checks.add(pre + "leibniz", leibniz.empty(), leibniz);

    witness.clear();
    for (int i = 0; i < 3 && witness.empty(); ++i) {
      const Splitting psi = rng.splitting(chart), phi = rng.splitting(chart);
      const VectorQ p = rng.vector(n);
      const TransitionMatrix tm = transition_matrix(psi, phi, p);
      if (!(tm.at(Rational(0)) == MatrixQ::Identity(n, n)))
        witness = "not the identity at t = 0 at " + to_string(p);
      for (int j = 0; j < n && witness.empty(); ++j)
        for (int k = 0; k < n && witness.empty(); ++k) {
          const Polynomial& e = tm(j, k);
          const bool ok = j == k ? e.is_constant() && e.constant_term() == 1
                                 : e.is_zero() || (chart.order(j) < chart.order(k) &&
                                                   e.terms().size() == 1 &&
                                                   e.time_valuation() == chart.order(k) - chart.order(j));
          if (!ok)
            witness = "entry (" + std::to_string(j + 1) + "," + std::to_string(k + 1) + ") = " +
                      to_string(e, {"t"});
        }
    }
    checks.add(pre + "transition_unitriangular", witness.empty(), witness);
  }

  const GradedConnection conn = GradedConnection::flat(chart);
  const Splitting psi = canonical_splitting(chart);
  ChartDomain domain;
  domain.radius = kDefaultRadius;
  const ExponentialMap<double> map(conn, psi, domain);
  witness.clear();
  std::string chart_witness;
  for (int i = 0; i < 10; ++i) {
    const VectorX<double> x = vector_cast<double>(rng.vector(n, 2, 2));
    const VectorX<double> v = rng.uniform_vector(n, 1.0);
    const double t = rng.uniform(0.1, 1.0);
    const auto at0 = map.global_chart(x, v, 0.0);
    const auto* o = std::get_if<OsculatingArrow<double>>(&at0);
    if (chart_witness.empty() && (!o || o->base != x || o->v != v))
      chart_witness = "t = 0 slice is not the identity";
    const auto g = std::get<PairArrow<double>>(map.global_chart(x, v, t));
    const auto back = map.chart_log(g);
    const double err = (back.v - v).cwiseAbs().maxCoeff();
    if (witness.empty() && err > 1e-10)
      witness = "round-trip error " + format_double(err);
  }
  checks.add(pre + "chart_t0_identity", chart_witness.empty(), chart_witness);
  checks.add(pre + "chart_log_roundtrip", witness.empty(), witness);

  if (m.run.vectors.size() >= 2 && !m.run.t_sequence.empty()) {
    std::vector<double> ts;
    for (const auto& t : m.run.t_sequence)
      ts.push_back(t.convert_to<double>());
    const VectorQ x = m.run.point ? *m.run.point : VectorQ::Zero(n);
    const auto rep = deformation_limit_check<double>(conn, psi, vector_cast<double>(x),
                                                     vector_cast<double>(m.run.vectors[0]),
                                                     vector_cast<double>(m.run.vectors[1]), ts, domain);
    checks.add(pre + "deformation_limit", rep.checks.passed(), first_witness(rep.checks));
    summary[name]["deformation_errors"] = json::array();
    for (const auto& r : rep.rows)
      summary[name]["deformation_errors"].push_back(r.error);
  }
}

} // namespace

CommandResult cmd_selftest(const CommandOptions& opt)
{
  const auto start = std::chrono::steady_clock::now();
  CheckReport checks;
  json summary = json::object();
  const std::uint64_t seed = opt.seed ? *opt.seed : kDefaultSampleSeed;
  for (const std::string name : {"abelian-3", "heisenberg3", "engel4", "twisted-heisenberg"}) {
    try {
      selftest_manifest(name, seed, checks, summary);
    } catch (const Error& e) {
      checks.add(name + ".evaluation", false, e.what());
    }
  }
  for (const auto& what : opt.inject) {
    if (what == "jacobi")
      add_prefixed(checks, verify_algebra(jacobi_fixture()), "injected.");
    else if (what == "gradedness")
      add_prefixed(checks, verify_algebra(gradedness_fixture()), "injected.");
    else if (what == "antisymmetry")
      add_prefixed(checks, verify_algebra(antisymmetry_fixture()), "injected.");
    else
      throw ParseError("unknown fault injection '" + what + "' (use jacobi, gradedness or antisymmetry)");
  }
  json result = {{"seed", seed}, {"manifests", summary}};
  return finish("selftest", nullptr, opt, std::move(checks), std::move(result), start);
}

CommandResult run_command(const std::string& command, const CommandOptions& opt)
{
  if (command == "selftest")
    return cmd_selftest(opt);
  Manifest m;
  if (!opt.source.path.empty())
    m = load_manifest(opt.source.path);
  else if (!opt.source.example.empty()) {
    try {
      m = bundled_manifest(opt.source.example);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what());
    }
  } else {
    throw ParseError("need --manifest PATH or --example NAME");
  }
  if (command == "validate")
    return cmd_validate(m, opt);
  if (command == "osculate")
    return cmd_osculate(m, opt);
  if (command == "bch")
    return cmd_bch(m, opt);
  if (command == "chart")
    return cmd_chart(m, opt);
  if (command == "deform")
    return cmd_deform(m, opt);
  throw std::invalid_argument("unknown command '" + command + "'");
}

std::string render_json(const json& report) { return report.dump(2) + "\n"; }

namespace {

void flatten(const json& value, const std::string& prefix, std::ostringstream& os)
{
  if (value.is_object() && !value.empty()) {
    for (const auto& [key, v] : value.items())
      flatten(v, prefix.empty() ? key : prefix + "." + key, os);
    return;
  }
  if (value.is_array() && !value.empty() && (value[0].is_object() || value[0].is_array())) {
    for (std::size_t i = 0; i < value.size(); ++i)
      flatten(value[i], prefix + "[" + std::to_string(i) + "]", os);
    return;
  }
  os << "  " << prefix << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
}

} // namespace

std::string render_text(const json& report)
{
  std::ostringstream os;
  os << "carnot " << report.value("command", std::string("?"));
  if (report.contains("manifest"))
    os << " [" << report["manifest"].get<std::string>() << "]";
  os << ": " << (report.value("passed", false) ? "PASS" : "FAIL") << '\n';
  if (report.contains("note"))
    os << "  note: " << report["note"].get<std::string>() << '\n';
  for (const auto& c : report["checks"]) {
    os << "  " << (c["passed"].get<bool>() ? "pass " : "FAIL ") << c["name"].get<std::string>();
    if (c.contains("witness"))
      os << ": " << c["witness"].get<std::string>();
    os << '\n';
  }
  if (report.contains("result"))
    flatten(report["result"], "", os);
  if (report.contains("timing_ms"))
    os << "  timing_ms: " << report["timing_ms"].dump() << '\n';
  os << "  reproduce: " << report["reproduce"].get<std::string>() << '\n';
  return os.str();
}

} // namespace carnot
