#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace carnot;
using test::vd;
using test::vq;

namespace {

VectorX<double> delta(const ValidatedChart& chart, const VectorX<double>& v, double t)
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

struct Curved {
  Manifest m = load_manifest(test::fixture("heisenberg3-curved.json"));
  ValidatedChart chart = ValidatedChart::validate(m.require_chart());
  GradedConnection conn{chart, *m.connection};
};

} // namespace

TEST_CASE("connection gradedness")
{
  CHECK(validate_graded_connection(Curved().conn).passed());
  const Manifest m = load_manifest(test::fixture("heisenberg3-ungraded.json"));
  const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
  const CheckReport r = validate_graded_connection(GradedConnection(chart, *m.connection));
  REQUIRE(!r.passed());
  CHECK(r.first_failure()->witness.rfind("(c,a,b)=(1,3,1)", 0) == 0);
}

TEST_CASE("domain parameters are checked")
{
  ChartDomain d;
  CHECK_NOTHROW(d.check());
  d.radius = 0;
  CHECK_THROWS_AS(d.check(), std::invalid_argument);
  d = {};
  d.steps = 0;
  CHECK_THROWS_AS(d.check(), std::invalid_argument);
}

TEST_CASE("flat exponential is affine on heisenberg, exactly")
{
  const ValidatedChart chart = test::bundled_chart("heisenberg3");
  const ExponentialMap<Rational> map(GradedConnection::flat(chart), canonical_splitting(chart));
  Sampler rng(51);
  for (int i = 0; i < 3; ++i) {
    const VectorQ x = rng.vector(3), v = rng.vector(3);
    const VectorQ expected = x + chart.chart().frame_matrix_at(x) * v;
    CHECK(map.exp(x, VectorQ(chart.chart().frame_matrix_at(x) * v)) == expected);
  }
}

TEST_CASE("flat engel exponential follows the exact frame flow")
{
  const ValidatedChart chart = test::bundled_chart("engel4");
  const ExponentialMap<double> map(GradedConnection::flat(chart), canonical_splitting(chart));
  Sampler rng(52);
  for (int i = 0; i < 20; ++i) {
    const VectorQ x = rng.vector(4), c = rng.vector(4);
    const VectorX<double> xd = vector_cast<double>(x);
    const VectorX<double> got = map.exp(xd, VectorX<double>(map.splitting_frame(xd) * vector_cast<double>(c)));
    CHECK(rel_err(got, vector_cast<double>(test::engel_flow(x, c))) <= 1e-12);
  }
}

TEST_CASE("global chart slices")
{
  const ValidatedChart chart = test::bundled_chart("heisenberg3");
  ChartDomain domain;
  domain.radius = 2.0;
  const ExponentialMap<double> map(GradedConnection::flat(chart), canonical_splitting(chart), domain);
  const VectorX<double> x = vd({0.5, -1, 2}), v = vd({0.3, -0.7, 1.1});
  const auto at0 = map.global_chart(x, v, 0.0);
  REQUIRE(std::holds_alternative<OsculatingArrow<double>>(at0));
  CHECK(std::get<OsculatingArrow<double>>(at0).v == v);
  CHECK(std::get<OsculatingArrow<double>>(at0).base == x);

  const double t = 0.5;
  const auto g = std::get<PairArrow<double>>(map.global_chart(x, v, t));
  const MatrixX<double> f = chart.chart().frame_matrix_at(x);
  CHECK(g.source == x);
  CHECK(rel_err(g.range, x + f * delta(chart, v, t)) <= 1e-12);

  CHECK_THROWS_AS(map.global_chart(x, vd({3, 0, 0}), 1.0), DomainError);
  CHECK_NOTHROW(map.global_chart(x, vd({3, 0, 0}), 0.5));
  CHECK_THROWS_AS(map.chart_log(PairArrow<double>{x, x, 0.0}), DomainError);
}

TEST_CASE("curved charts converge under step halving")
{
  const Curved c;
  const Splitting psi = canonical_splitting(c.chart);
  ChartDomain coarse;
  ChartDomain fine;
  fine.steps = 2 * coarse.steps;
  const ExponentialMap<double> a(c.conn, psi, coarse), b(c.conn, psi, fine);
  Sampler rng(53);
  for (int i = 0; i < 10; ++i) {
    const VectorX<double> x = rng.uniform_vector(3, 1.0), v = rng.uniform_vector(3, 0.5);
    CHECK(rel_err(a.exp(x, v), b.exp(x, v)) <= 1e-10);
  }
}

TEST_CASE("chart_log inverts the chart")
{
  const Curved c;
  const Splitting psi = canonical_splitting(c.chart);
  const ExponentialMap<double> map(c.conn, psi);
  Sampler rng(54);
  for (int i = 0; i < 20; ++i) {
    const VectorX<double> x = rng.uniform_vector(3, 1.0), v = rng.uniform_vector(3, 0.8);
    const double t = rng.uniform(0.1, 1.0);
    const auto g = std::get<PairArrow<double>>(map.global_chart(x, v, t));
    const ChartCoordinates<double> back = map.chart_log(g);
    CHECK(back.x == x);
    CHECK(back.t == t);
    CHECK((back.v - v).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("groupoid multiplication")
{
  const ValidatedChart chart = test::bundled_chart("heisenberg3");
  using E = TangentGroupoidElement<Rational>;
  const E g = PairArrow<Rational>{vq({3, 0, 0}), vq({2, 0, 0}), Rational(1, 2)};
  const E h = PairArrow<Rational>{vq({2, 0, 0}), vq({1, 0, 0}), Rational(1, 2)};
  const auto gh = std::get<PairArrow<Rational>>(multiply(chart, g, h));
  CHECK(gh.range == vq({3, 0, 0}));
  CHECK(gh.source == vq({1, 0, 0}));
  CHECK_THROWS_AS(multiply(chart, h, g), CompositionError);
  const E late = PairArrow<Rational>{vq({2, 0, 0}), vq({1, 0, 0}), Rational(1, 4)};
  CHECK_THROWS_AS(multiply(chart, g, late), CompositionError);

  const E a = OsculatingArrow<Rational>{VectorQ::Zero(3), vq({1, 0, 0})};
  const E b = OsculatingArrow<Rational>{VectorQ::Zero(3), vq({0, 1, 0})};
  CHECK(std::get<OsculatingArrow<Rational>>(multiply(chart, a, b)).v == vq({1, 1, Rational(-1, 2)}));
  CHECK_THROWS_AS(multiply(chart, a, g), CompositionError);
}

TEST_CASE("deformation: exact heisenberg product")
{
  const Manifest m = bundled_manifest("heisenberg3");
  const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
  const auto rep = deformation_limit_check<Rational>(
      GradedConnection::flat(chart), canonical_splitting(chart), VectorQ::Zero(3), vq({1, 0, 0}), vq({0, 1, 0}),
      {Rational(1), Rational(1, 2), Rational(1, 4), Rational(1, 8)});
  const test::UpperTriangular n3(3);
  CHECK(rep.limit == n3.bch(vq({0, 1, 0}), vq({1, 0, 0})));
  for (const auto& row : rep.rows)
    CHECK(row.u == rep.limit);
  CHECK(rep.checks.passed());
}

TEST_CASE("deformation: twisted heisenberg converges at first order")
{
  const Manifest m = bundled_manifest("twisted-heisenberg");
  const ValidatedChart chart = ValidatedChart::validate(m.require_chart());
  std::vector<double> ts;
  for (int k = 3; k <= 8; ++k)
    ts.push_back(std::ldexp(1.0, -k));
  ChartDomain domain;
  domain.radius = 2.0;
  const auto rep = deformation_limit_check<double>(GradedConnection::flat(chart), canonical_splitting(chart),
                                                   vd({0, 0, 0}), vd({1, 0, 0}), vd({0, 1, 0}), ts, domain);
  REQUIRE(rep.ratios.size() == 5);
  for (double r : rep.ratios)
    CHECK((r >= 0.35 && r <= 0.65));
  CHECK(rep.checks.passed());
}

TEST_CASE("injectivity probe finds the spiral's period")
{
  const ValidatedChart chart = ValidatedChart::validate(load_manifest(test::fixture("spiral.json")).require_chart());
  const GradedConnection conn = GradedConnection::flat(chart);
  const Splitting psi = canonical_splitting(chart);
  ChartDomain wide;
  wide.radius = 4.0;
  const InjectivityReport hit = injectivity_probe(conn, psi, wide, 400, 7);
  CHECK(hit.collision);
  REQUIRE(hit.v1.size() == 2);
  CHECK(std::abs(std::abs(hit.v1[1] - hit.v2[1]) - 2 * M_PI) < 1e-6);

  ChartDomain narrow;
  narrow.radius = 1.0;
  const InjectivityReport miss = injectivity_probe(conn, psi, narrow, 400, 7);
  CHECK(!miss.collision);
}
