// Acceptance suite: one line per criterion, each with a pinned time budget.

#include "support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace carnot;
using test::vq;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void fail(const std::string& why)
  {
    if (passed)
      detail = why;
    passed = false;
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<Outcome()> body;
};

const std::vector<std::string> kCharts{"heisenberg3", "engel4", "twisted-heisenberg"};

std::string str(double x)
{
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

VectorX<double> dilated(const ValidatedChart& chart, const VectorX<double>& v, double t)
{
  VectorX<double> out = v;
  for (int a = 0; a < chart.dim(); ++a)
    out[a] *= std::pow(t, chart.order(a));
  return out;
}

double rel_err(const VectorX<double>& a, const VectorX<double>& b)
{
  return (a - b).cwiseAbs().maxCoeff() / std::max(1.0, b.cwiseAbs().maxCoeff());
}

Outcome algebra_axioms()
{
  Outcome out;
  int checked = 0;
  for (const std::string name : {"abelian-3", "abelian-5", "heisenberg3", "engel4", "twisted-heisenberg"}) {
    const ValidatedChart chart = test::bundled_chart(name);
    const auto& points = chart.chart().sample_points();
    if (points.size() < 17)
      out.fail(name + " has only " + std::to_string(points.size()) + " sample points");
    for (std::size_t i = 0; i < points.size(); ++i) {
      const CheckReport r = verify_algebra(osculating_algebra_at(chart, points[i]));
      ++checked;
      if (!r.passed())
        out.fail(name + " point #" + std::to_string(i) + ": " + r.first_failure()->name);
    }
  }
  const Manifest bad = load_manifest(test::fixture("corrupt-algebras.json"));
  struct Expected {
    std::string algebra, check, witness;
  };
  const std::vector<Expected> expected{
      {"jacobi", "jacobi", "(a,b,c)=(1,2,3) cyclic sum (0, 0, 0, 0, 0, 0, 1)"},
      {"gradedness", "gradedness", "(a,b,k)=(1,2,3)"},
      {"antisymmetry", "antisymmetry", "(a,b,k)=(1,2,3)"}};
  for (const auto& [algebra, check, witness] : expected) {
    const CheckReport r = verify_algebra(bad.algebras.at(algebra));
    const Check* c = r.first_failure();
    if (!c || c->name != check || c->witness != witness)
      out.fail("corrupted '" + algebra + "' gave " + (c ? c->name + " " + c->witness : "no failure"));
  }
  if (out.passed)
    out.detail = std::to_string(checked) + " osculating algebras exact, 3 corruptions caught";
  return out;
}

Outcome bch_group_axioms()
{
  Outcome out;
  const auto alg = osculating_algebra_at(test::bundled_chart("engel4"), VectorQ::Zero(4));
  if (alg.depth() != 3)
    out.fail("engel4 osculating algebra has depth " + std::to_string(alg.depth()));
  Sampler rng(1001);
  const VectorQ zero = VectorQ::Zero(4);
  for (int i = 0; i < 100; ++i) {
    const VectorQ a = rng.vector(4), b = rng.vector(4), c = rng.vector(4);
    if (bch_product(alg, bch_product(alg, a, b), c) != bch_product(alg, a, bch_product(alg, b, c)))
      out.fail("associativity, triple " + std::to_string(i));
    if (bch_product(alg, a, zero) != a || bch_product(alg, zero, a) != a)
      out.fail("identity, triple " + std::to_string(i));
    if (!is_zero_vector(bch_product(alg, a, group_inverse(alg, a))) ||
        !is_zero_vector(bch_product(alg, group_inverse(alg, a), a)))
      out.fail("inverse, triple " + std::to_string(i));
  }
  if (out.passed)
    out.detail = "100 triples exact";
  return out;
}

Outcome dilation_homomorphism()
{
  Outcome out;
  Sampler rng(1002);
  std::vector<GradedLieAlgebra<Rational>> algebras;
  for (const auto& name : kCharts)
    algebras.push_back(osculating_algebra_at(test::bundled_chart(name), VectorQ::Zero(test::bundled_chart(name).dim())));
  for (int i = 0; i < 20; ++i) {
    const Rational lambda = rng.nonzero_rational(5, 4);
    for (const auto& alg : algebras) {
      const VectorQ a = rng.vector(alg.dim()), b = rng.vector(alg.dim());
      const auto d = [&](const VectorQ& v) { return dilate(alg, lambda, v); };
      if (d(bracket(alg, a, b)) != bracket(alg, d(a), d(b)))
        out.fail("bracket, lambda = " + to_string(lambda));
      if (d(bch_product(alg, a, b)) != bch_product(alg, d(a), d(b)))
        out.fail("bch, lambda = " + to_string(lambda));
    }
  }
  if (out.passed)
    out.detail = "20 lambdas x 3 algebras exact";
  return out;
}

Outcome filtration_validation()
{
  Outcome out;
  for (const auto& name : kCharts)
    if (!validate_filtration(bundled_manifest(name).require_chart()).passed())
      out.fail(name + " rejected");
  const CheckReport neg = validate_filtration(load_manifest(test::fixture("heisenberg3-relabeled.json")).require_chart());
  const Check* c = neg.first_failure();
  if (!c)
    out.fail("relabeled fixture accepted");
  else if (c->name != "bracket_condition" || c->witness.find("pair (") != 0 ||
           c->witness.find("sample point #") == std::string::npos)
    out.fail("relabeled fixture: " + c->name + ": " + c->witness);
  if (out.passed)
    out.detail = "3 charts valid; relabeled fails at " + c->witness.substr(0, c->witness.find(" (", 6));
  return out;
}

struct SectionPair {
  std::string chart;
  HSection s1, s2, bracket;
};

const std::vector<SectionPair>& section_pairs()
{
  static const std::vector<SectionPair> pairs = [] {
    std::vector<SectionPair> out;
    Sampler rng(1005);
    for (int i = 0; i < 50; ++i) {
      const std::string& name = kCharts[static_cast<std::size_t>(i) % kCharts.size()];
      const ValidatedChart chart = test::bundled_chart(name);
      const Splitting psi = rng.splitting(chart);
      const HSection s1 = phi_psi(psi, rng.graded_section(chart));
      const HSection s2 = phi_psi(psi, rng.graded_section(chart));
      out.push_back({name, s1, s2, algebroid_bracket(s1, s2)});
    }
    return out;
  }();
  return pairs;
}

Outcome bracket_closure()
{
  Outcome out;
  const auto& pairs = section_pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Membership m = membership_XH(pairs[i].bracket);
    if (!m)
      out.fail("pair " + std::to_string(i) + " on " + pairs[i].chart + ": " + m.describe());
  }
  if (out.passed)
    out.detail = std::to_string(pairs.size()) + " brackets in the module";
  return out;
}

Outcome ev0_morphism()
{
  Outcome out;
  const auto& pairs = section_pairs();
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i];
    if (!membership_XH(p.bracket)) {
      out.fail("pair " + std::to_string(i) + " not in the module");
      continue;
    }
    if (!(ev0H(p.bracket) == osculating_bracket(ev0H(p.s1), ev0H(p.s2))))
      out.fail("pair " + std::to_string(i) + " on " + p.chart);
  }
  if (out.passed)
    out.detail = std::to_string(pairs.size()) + " pairs exact";
  return out;
}

Outcome splitting_independence()
{
  Outcome out;
  Sampler rng(1007);
  int roundtrips = 0;
  for (const auto& name : kCharts) {
    const ValidatedChart chart = test::bundled_chart(name);
    for (int i = 0; i < 10; ++i) {
      const Splitting psi = rng.splitting(chart, 2);
      const GradedSection y = rng.graded_section(chart, 2, 2, 3);
      ++roundtrips;
      if (!(phi_psi_inverse(psi, phi_psi(psi, y)) == y))
        out.fail("round trip on " + name + " sample " + std::to_string(i));
    }
  }
  for (int i = 0; i < 10; ++i) {
    const ValidatedChart chart = test::bundled_chart(kCharts[static_cast<std::size_t>(i) % kCharts.size()]);
    const int n = chart.dim();
    const Splitting psi = rng.splitting(chart, 2), phi = rng.splitting(chart, 2);
    const VectorQ p = rng.vector(n);
    const TransitionMatrix tm = transition_matrix(psi, phi, p);
    if (!(tm.at(Rational(0)) == MatrixQ::Identity(n, n)))
      out.fail("pair " + std::to_string(i) + " is not the identity at t = 0");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const Polynomial& e = tm(j, k);
        bool ok;
        if (j == k)
          ok = e.is_constant() && e.constant_term() == 1;
        else if (e.is_zero())
          ok = true;
        else
          ok = chart.order(j) < chart.order(k) && e.terms().size() == 1 &&
               e.terms().begin()->first == Exponents{chart.order(k) - chart.order(j)};
        if (!ok)
          out.fail("pair " + std::to_string(i) + " entry (" + std::to_string(j + 1) + "," + std::to_string(k + 1) +
                   ") = " + to_string(e, {"t"}));
      }
  }
  if (out.passed)
    out.detail = std::to_string(roundtrips) + " round trips, 10 transition matrices unitriangular";
  return out;
}

Outcome exponential_charts()
{
  Outcome out;
  Sampler rng(1008);
  double worst_closed = 0, worst_step = 0, worst_log = 0;

  // t = 0 slice and closed form for flat charts whose frame flows are straight lines
  for (const std::string name : {"abelian-3", "heisenberg3"}) {
    const ValidatedChart chart = test::bundled_chart(name);
    ChartDomain domain;
    domain.radius = 2.0;
    const ExponentialMap<double> map(GradedConnection::flat(chart), canonical_splitting(chart), domain);
    for (int i = 0; i < 50; ++i) {
      const VectorX<double> x = vector_cast<double>(rng.vector(3, 2, 2));
      const VectorX<double> v = rng.uniform_vector(3, 1.0);
      const double t = rng.uniform(0.05, 1.0);
      const auto at0 = map.global_chart(x, v, 0.0);
      const auto* o = std::get_if<OsculatingArrow<double>>(&at0);
      if (!o || o->base != x || o->v != v)
        out.fail(name + ": t = 0 slice is not the identity");
      const auto g = std::get<PairArrow<double>>(map.global_chart(x, v, t));
      const VectorX<double> closed = x + chart.chart().frame_matrix_at(x) * dilated(chart, v, t);
      worst_closed = std::max(worst_closed, rel_err(g.range, closed));
    }
  }
  // engel4 frame flows are polynomial but not straight; compare with its exact flow
  {
    const ValidatedChart chart = test::bundled_chart("engel4");
    const ExponentialMap<double> map(GradedConnection::flat(chart), canonical_splitting(chart));
    for (int i = 0; i < 50; ++i) {
      const VectorQ x = rng.vector(4, 2, 2), v = rng.vector(4, 1, 2);
      const Rational t(1, 1 + rng.integer(0, 3));
      VectorQ dv = v;
      for (int a = 0; a < 4; ++a)
        dv[a] *= pow(t, chart.order(a));
      const auto g = std::get<PairArrow<double>>(
          map.global_chart(vector_cast<double>(x), vector_cast<double>(v), t.convert_to<double>()));
      worst_closed = std::max(worst_closed, rel_err(g.range, vector_cast<double>(test::engel_flow(x, dv))));
    }
  }
  if (worst_closed > 1e-12)
    out.fail("flat chart error " + str(worst_closed));

  const Manifest cm = load_manifest(test::fixture("heisenberg3-curved.json"));
  const ValidatedChart chart = ValidatedChart::validate(cm.require_chart());
  const GradedConnection conn(chart, *cm.connection);
  const Splitting psi = canonical_splitting(chart);
  ChartDomain domain;
  domain.radius = cm.run.radius.value_or(1.0);
  ChartDomain fine = domain;
  fine.steps *= 2;
  const ExponentialMap<double> coarse(conn, psi, domain), halved(conn, psi, fine);
  for (int i = 0; i < 30; ++i) {
    const VectorX<double> x = rng.uniform_vector(3, 1.0), v = rng.uniform_vector(3, domain.radius);
    const double t = rng.uniform(0.1, 1.0);
    const auto a = std::get<PairArrow<double>>(coarse.global_chart(x, v, t));
    const auto b = std::get<PairArrow<double>>(halved.global_chart(x, v, t));
    worst_step = std::max(worst_step, rel_err(a.range, b.range));
  }
  if (worst_step > 1e-10)
    out.fail("curved step-halving difference " + str(worst_step));

  const InjectivityReport probe = injectivity_probe(conn, psi, domain, 200, 1009);
  if (probe.collision || probe.undefined > 0)
    out.fail("curved chart domain: " + probe.message);
  for (int i = 0; i < 200; ++i) {
    const VectorX<double> x = rng.uniform_vector(3, 1.0), v = rng.uniform_vector(3, domain.radius);
    const double t = rng.uniform(0.05, 1.0);
    const auto g = std::get<PairArrow<double>>(coarse.global_chart(x, v, t));
    try {
      const auto back = coarse.chart_log(g);
      worst_log = std::max(worst_log, (back.v - v).cwiseAbs().maxCoeff());
    } catch (const Error& e) {
      out.fail("chart_log sample " + std::to_string(i) + ": " + e.what());
    }
  }
  if (worst_log > 1e-10)
    out.fail("chart_log round-trip error " + str(worst_log));
  if (out.passed)
    out.detail = "flat " + str(worst_closed) + ", step-halving " + str(worst_step) + ", log " + str(worst_log);
  return out;
}

Outcome deformation()
{
  Outcome out;
  std::string detail;
  {
    const ValidatedChart chart = test::bundled_chart("heisenberg3");
    const VectorQ v = vq({1, 0, 0}), w = vq({0, 1, 0});
    const auto rep = deformation_limit_check<Rational>(GradedConnection::flat(chart), canonical_splitting(chart),
                                                       VectorQ::Zero(3), v, w,
                                                       {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)});
    // the right factor acts first: u = log(exp(w) exp(v)) in the matrix group
    const VectorQ expected = test::UpperTriangular(3).bch(w, v);
    if (rep.limit != expected)
      out.fail("heisenberg limit " + to_string(rep.limit));
    for (const auto& row : rep.rows)
      if (row.u != expected)
        out.fail("heisenberg at t = " + to_string(row.t) + ": " + to_string(row.u));
    detail = "(a) exact at 4 t";
  }
  {
    const ValidatedChart chart = test::bundled_chart("twisted-heisenberg");
    std::vector<double> ts;
    for (int k = 3; k <= 8; ++k)
      ts.push_back(std::ldexp(1.0, -k));
    ChartDomain domain;
    domain.radius = 2.0;
    const auto rep = deformation_limit_check<double>(GradedConnection::flat(chart), canonical_splitting(chart),
                                                     VectorX<double>::Zero(3), test::vd({1, 0, 0}),
                                                     test::vd({0, 1, 0}), ts, domain);
    double lo = 1, hi = 0;
    for (double r : rep.ratios) {
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      if (!(r >= 0.35 && r <= 0.65))
        out.fail("twisted ratio " + str(r));
    }
    if (rep.ratios.size() != 5)
      out.fail("twisted: " + std::to_string(rep.ratios.size()) + " ratios");
    detail += ", (b) ratios in [" + str(lo) + ", " + str(hi) + "]";
  }
  {
    const ValidatedChart chart = test::bundled_chart("abelian-4");
    Sampler rng(1009);
    double worst = 0;
    for (int i = 0; i < 5; ++i) {
      const VectorX<double> x = rng.uniform_vector(4, 1.0), v = rng.uniform_vector(4, 1.0),
                            w = rng.uniform_vector(4, 1.0);
      ChartDomain domain;
      domain.radius = 3.0;
      const auto rep = deformation_limit_check<double>(GradedConnection::flat(chart), canonical_splitting(chart), x, v,
                                                       w, {1.0, 0.5, 0.25, 0.125}, domain);
      for (const auto& row : rep.rows)
        worst = std::max(worst, (row.u - (v + w)).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-12)
      out.fail("abelian error " + str(worst));
    detail += ", (c) abelian " + str(worst);
  }
  if (out.passed)
    out.detail = detail;
  return out;
}

Outcome leibniz()
{
  Outcome out;
  Sampler rng(1010);
  for (int i = 0; i < 20; ++i) {
    // quadratic f times the twisted frame needs x-degree 9
    const ValidatedChart chart = test::bundled_chart(kCharts[static_cast<std::size_t>(i) % kCharts.size()], 12);
    const Splitting psi = rng.splitting(chart);
    const HSection s1 = phi_psi(psi, rng.graded_section(chart)), s2 = phi_psi(psi, rng.graded_section(chart));
    const Polynomial f = rng.polynomial(chart.chart().layout(), 2, 0, 3, 12);
    const HSection br = algebroid_bracket(s1, s2), brf = algebroid_bracket(s1, f.with_time() * s2);
    for (const Rational& t0 : {Rational(1), Rational(1, 2)}) {
      const PolyVectorField x = ev_t(s1, t0), y = ev_t(s2, t0);
      if (!(ev_t(brf, t0) == f * ev_t(br, t0) + apply(x, f) * y))
        out.fail("f #" + std::to_string(i) + " at t = " + to_string(t0));
    }
  }
  if (out.passed)
    out.detail = "20 polynomials x 2 t exact";
  return out;
}

} // namespace

int main()
{
  const std::vector<Criterion> criteria{
      {1, "algebra axioms", 2, algebra_axioms},
      {2, "bch group axioms", 5, bch_group_axioms},
      {3, "dilation homomorphism", 2, dilation_homomorphism},
      {4, "filtration validation", 2, filtration_validation},
      {5, "module closure", 5, bracket_closure},
      {6, "ev0 morphism", 5, ev0_morphism},
      {7, "splitting independence", 3, splitting_independence},
      {8, "exponential charts", 15, exponential_charts},
      {9, "deformation limit", 15, deformation},
      {10, "leibniz rule", 3, leibniz},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.body();
    } catch (const std::exception& e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s)
      out.fail("took " + str(secs) + " s, over budget; " + out.detail);
    failures += out.passed ? 0 : 1;
    std::printf("[%s] %2d %-24s %6.2f s / %4.0f s  %s\n", out.passed ? "PASS" : "FAIL", c.id, c.title.c_str(), secs,
                c.budget_s, out.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
