#include "carnot/exponential.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace carnot {

GradedConnection::GradedConnection(ValidatedChart chart, Christoffels christoffels) : chart_(std::move(chart))
{
  const int n = chart_.dim();
  const VariableLayout layout = chart_.chart().layout();
  for (auto& [key, poly] : christoffels) {
    const auto [c, a, b] = key;
    if (c < 0 || a < 0 || b < 0 || c >= n || a >= n || b >= n)
      throw std::out_of_range("Christoffel index out of range");
    if (!(poly.layout() == layout))
      throw DimensionMismatch("Christoffel symbols must be polynomials in the chart coordinates");
    if (!poly.is_zero())
      christoffels_.emplace(key, std::move(poly));
  }
}

GradedConnection GradedConnection::flat(const ValidatedChart& chart) { return GradedConnection(chart, {}); }

CheckReport validate_graded_connection(const GradedConnection& conn)
{
  CheckReport report;
  std::string witness;
  for (const auto& [key, poly] : conn.christoffels()) {
    const auto [c, a, b] = key;
    if (conn.chart().order(a) != conn.chart().order(b)) {
      witness = "(c,a,b)=(" + std::to_string(c + 1) + "," + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                "): Gamma maps order " + std::to_string(conn.chart().order(a)) + " to order " +
                std::to_string(conn.chart().order(b));
      break;
    }
  }
  report.add("graded_connection", witness.empty(), witness);
  return report;
}

void ChartDomain::check() const
{
  if (!(radius > 0.0))
    throw std::invalid_argument("chart domain radius must be positive");
  if (steps < 1)
    throw std::invalid_argument("integrator needs at least one step");
  if (!(tol > 0.0))
    throw std::invalid_argument("tolerance must be positive");
  if (max_iterations < 1)
    throw std::invalid_argument("iteration budget must be positive");
}

namespace {

template <typename Scalar>
Scalar power(const Scalar& t, int k)
{
  Scalar out(1);
  for (int i = 0; i < k; ++i)
    out *= t;
  return out;
}

template <typename Scalar>
bool finite(const VectorX<Scalar>& v)
{
  if constexpr (is_exact_v<Scalar>)
    return true;
  else
    return v.allFinite();
}

template <typename Scalar>
bool same_point(const VectorX<Scalar>& a, const VectorX<Scalar>& b)
{
  if (a.size() != b.size())
    return false;
  if constexpr (is_exact_v<Scalar>) {
    return a == b;
  } else {
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (std::abs(a[i] - b[i]) > 1e-12 * (1.0 + std::abs(a[i])))
        return false;
    return true;
  }
}

} // namespace

template <typename Scalar>
ExponentialMap<Scalar>::ExponentialMap(const GradedConnection& conn, const Splitting& psi, ChartDomain domain)
    : chart_(psi.chart()), domain_(domain), n_(psi.chart().dim()), orders_(psi.chart().orders())
{
  if (!(conn.chart() == psi.chart()))
    throw ChartMismatch("connection and splitting live on different charts");
  domain_.check();
  const FilteredChart& c = chart_.chart();
  // B_ia = sum_b F_ib S_ba
  std::vector<Polynomial> b;
  for (int i = 0; i < n_; ++i) {
    for (int a = 0; a < n_; ++a) {
      Polynomial sum = c.frame(a)[i];
      for (const auto& [ab, s] : psi.corrections())
        if (ab.first == a)
          sum += c.frame(ab.second)[i] * s;
      b.push_back(std::move(sum));
    }
  }
  for (const auto& p : b) {
    b_.emplace_back(p);
    max_exponent_ = std::max(max_exponent_, b_.back().max_exponent());
  }
  for (int k = 0; k < n_; ++k)
    for (const auto& p : b)
      db_.emplace_back(p.derivative(k));
  for (const auto& [key, poly] : conn.christoffels()) {
    gamma_.emplace_back(std::get<0>(key), std::get<1>(key), std::get<2>(key), CompiledPolynomial<Scalar>(poly));
    max_exponent_ = std::max(max_exponent_, std::get<3>(gamma_.back()).max_exponent());
  }
}

template <typename Scalar>
MatrixX<Scalar> ExponentialMap<Scalar>::splitting_frame(const VectorX<Scalar>& x) const
{
  if (x.size() != n_)
    throw DimensionMismatch("splitting_frame: point dimension mismatch");
  const MatrixX<Scalar> powers = power_table(x, max_exponent_);
  MatrixX<Scalar> m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int a = 0; a < n_; ++a)
      m(i, a) = b_[static_cast<std::size_t>(i * n_ + a)].evaluate(powers);
  return m;
}

template <typename Scalar>
void ExponentialMap<Scalar>::derivative(const VectorX<Scalar>& state, VectorX<Scalar>& out) const
{
  const int n = n_;
  const VectorX<Scalar> x = state.head(n);
  const VectorX<Scalar> u = state.tail(n);
  const MatrixX<Scalar> powers = power_table(x, max_exponent_);
  MatrixX<Scalar> b(n, n);
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      b(i, a) = b_[static_cast<std::size_t>(i * n + a)].evaluate(powers);
  const auto w = solve(b, u);
  if (!w) {
    if constexpr (is_exact_v<Scalar>)
      throw SingularFrame("splitting frame is singular at " + to_string(x));
    else
      throw SingularFrame("splitting frame is singular along the geodesic");
  }
  VectorX<Scalar> acc = VectorX<Scalar>::Zero(n);
  for (int c = 0; c < n; ++c) {
    if (is_zero(u[c]))
      continue;
    for (int i = 0; i < n; ++i) {
      Scalar row(0);
      for (int a = 0; a < n; ++a) {
        const auto& p = db_[static_cast<std::size_t>((c * n + i) * n + a)];
        if (!p.is_zero() && !is_zero((*w)[a]))
          row += p.evaluate(powers) * (*w)[a];
      }
      acc[i] += u[c] * row;
    }
  }
  if (!gamma_.empty()) {
    VectorX<Scalar> gw = VectorX<Scalar>::Zero(n);
    for (const auto& [c, a, bb, p] : gamma_)
      if (!is_zero(u[c]) && !is_zero((*w)[a]))
        gw[bb] += u[c] * p.evaluate(powers) * (*w)[a];
    acc -= b * gw;
  }
  out.resize(2 * n);
  out.head(n) = u;
  out.tail(n) = acc;
}

template <typename Scalar>
VectorX<Scalar> ExponentialMap<Scalar>::exp(const VectorX<Scalar>& x, const VectorX<Scalar>& v) const
{
  if (x.size() != n_ || v.size() != n_)
    throw DimensionMismatch("exp: dimension mismatch");
  if (is_zero_vector(v))
    return x;
  VectorX<Scalar> state(2 * n_);
  state.head(n_) = x;
  state.tail(n_) = v;
  const Scalar h = Scalar(1) / Scalar(domain_.steps);
  const Scalar half = h / Scalar(2);
  const Scalar sixth = h / Scalar(6);
  VectorX<Scalar> k1, k2, k3, k4;
  for (int s = 0; s < domain_.steps; ++s) {
    derivative(state, k1);
    derivative(VectorX<Scalar>(state + half * k1), k2);
    derivative(VectorX<Scalar>(state + half * k2), k3);
    derivative(VectorX<Scalar>(state + h * k3), k4);
    state += sixth * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
    if (!finite(state))
      throw ConvergenceError("geodesic left every bounded region after step " + std::to_string(s + 1));
  }
  return state.head(n_);
}

template <typename Scalar>
TangentGroupoidElement<Scalar> ExponentialMap<Scalar>::global_chart(const VectorX<Scalar>& x,
                                                                    const VectorX<Scalar>& v, const Scalar& t) const
{
  if (x.size() != n_ || v.size() != n_)
    throw DimensionMismatch("global_chart: dimension mismatch");
  if (is_zero(t))
    return OsculatingArrow<Scalar>{x, v};
  VectorX<Scalar> dv = v;
  for (int a = 0; a < n_; ++a)
    dv[a] *= power(t, orders_[static_cast<std::size_t>(a)]);
  if (max_abs(dv) > domain_.radius)
    throw DomainError("delta_t v has size " + format_double(max_abs(dv)) + " beyond the chart radius " +
                      format_double(domain_.radius));
  const VectorX<Scalar> tangent = splitting_frame(x) * dv;
  return PairArrow<Scalar>{exp(x, tangent), x, t};
}

template <typename Scalar>
std::optional<VectorX<Scalar>> ExponentialMap<Scalar>::shoot(const VectorX<Scalar>& x, const VectorX<Scalar>& y,
                                                             const VectorX<Scalar>& seed, int* iterations,
                                                             double* residual) const
{
  VectorX<Scalar> v = seed;
  VectorX<Scalar> r = exp(x, v) - y;
  double norm = max_abs(r);
  int it = 0;
  auto done = [&] { return is_zero_vector(r) || norm <= domain_.tol; };
  while (!done() && it < domain_.max_iterations) {
    ++it;
    MatrixX<Scalar> jac(n_, n_);
    for (int j = 0; j < n_; ++j) {
      Scalar h;
      if constexpr (is_exact_v<Scalar>)
        h = Rational(1, 1 << 20);
      else
        h = 1e-6 * std::max(1.0, std::abs(v[j]));
      VectorX<Scalar> vp = v, vm = v;
      vp[j] += h;
      vm[j] -= h;
      jac.col(j) = (exp(x, vp) - exp(x, vm)) / (Scalar(2) * h);
    }
    const auto step = solve(jac, VectorX<Scalar>(-r));
    if (!step)
      break;
    Scalar lambda(1);
    bool improved = false;
    for (int k = 0; k < 30; ++k) {
      const VectorX<Scalar> candidate = v + lambda * *step;
      VectorX<Scalar> rc;
      try {
        rc = exp(x, candidate) - y;
      } catch (const Error&) {
        lambda /= Scalar(2);
        continue;
      }
      const double nc = max_abs(rc);
      if (finite(rc) && (nc < norm || is_zero_vector(rc))) {
        v = candidate;
        r = rc;
        norm = nc;
        improved = true;
        break;
      }
      lambda /= Scalar(2);
    }
    if (!improved)
      break;
  }
  if (iterations)
    *iterations = it;
  if (residual)
    *residual = norm;
  if (!done())
    return std::nullopt;
  return v;
}

template <typename Scalar>
ChartCoordinates<Scalar> ExponentialMap<Scalar>::chart_log(const PairArrow<Scalar>& g) const
{
  if (g.source.size() != n_ || g.range.size() != n_)
    throw DimensionMismatch("chart_log: dimension mismatch");
  if (is_zero(g.t))
    throw DomainError("chart_log needs a pair arrow with t != 0");
  ChartCoordinates<Scalar> out;
  out.x = g.source;
  out.t = g.t;
  const VectorX<Scalar> seed = g.range - g.source;
  const auto tangent = shoot(g.source, g.range, seed, &out.iterations, &out.residual);
  if (!tangent)
    throw ConvergenceError("chart_log: shooting did not reach tolerance " + format_double(domain_.tol) + " in " +
                           std::to_string(out.iterations) + " iterations (residual " +
                           format_double(out.residual) + ")");
  const auto dv = solve(splitting_frame(g.source), *tangent);
  if (!dv)
    throw SingularFrame("splitting frame is singular at the source point");
  if (max_abs(*dv) > domain_.radius * (1.0 + 1e-9))
    throw DomainError("arrow lies outside the chart domain: |delta_t v| = " + format_double(max_abs(*dv)));
  out.v = *dv;
  for (int a = 0; a < n_; ++a)
    out.v[a] /= power(g.t, orders_[static_cast<std::size_t>(a)]);
  return out;
}

template class ExponentialMap<double>;
template class ExponentialMap<Rational>;

VectorX<double> exp_geodesic(const GradedConnection& conn, const Splitting& psi, const VectorX<double>& x,
                             const VectorX<double>& v, const ChartDomain& domain)
{
  return ExponentialMap<double>(conn, psi, domain).exp(x, v);
}

PairArrow<double> groupoid_exp(const GradedConnection& conn, const Splitting& psi, const VectorX<double>& x,
                               const VectorX<double>& v, const ChartDomain& domain)
{
  return PairArrow<double>{exp_geodesic(conn, psi, x, v, domain), x, 1.0};
}

TangentGroupoidElement<double> global_chart(const GradedConnection& conn, const Splitting& psi,
                                            const VectorX<double>& x, const VectorX<double>& v, double t,
                                            const ChartDomain& domain)
{
  return ExponentialMap<double>(conn, psi, domain).global_chart(x, v, t);
}

ChartCoordinates<double> chart_log(const GradedConnection& conn, const Splitting& psi, const PairArrow<double>& g,
                                   const ChartDomain& domain)
{
  return ExponentialMap<double>(conn, psi, domain).chart_log(g);
}

template <typename Scalar>
TangentGroupoidElement<Scalar> multiply(const ValidatedChart& chart, const TangentGroupoidElement<Scalar>& g,
                                        const TangentGroupoidElement<Scalar>& h)
{
  if (const auto* pg = std::get_if<PairArrow<Scalar>>(&g)) {
    const auto* ph = std::get_if<PairArrow<Scalar>>(&h);
    if (!ph)
      throw CompositionError("cannot compose arrows at different t");
    if (!(pg->t == ph->t))
      throw CompositionError("cannot compose arrows at different t");
    if (!same_point(pg->source, ph->range))
      throw CompositionError("arrows are not composable: source of the left factor differs from range of the right");
    return PairArrow<Scalar>{pg->range, ph->source, pg->t};
  }
  const auto& og = std::get<OsculatingArrow<Scalar>>(g);
  const auto* oh = std::get_if<OsculatingArrow<Scalar>>(&h);
  if (!oh)
    throw CompositionError("cannot compose arrows at different t");
  if (!same_point(og.base, oh->base))
    throw CompositionError("osculating elements live over different base points");
  const auto alg = osculating_algebra_at(chart, to_rational(og.base)).template cast<Scalar>();
  return OsculatingArrow<Scalar>{og.base, bch_product(alg, oh->v, og.v)};
}

template TangentGroupoidElement<double> multiply(const ValidatedChart&, const TangentGroupoidElement<double>&,
                                                 const TangentGroupoidElement<double>&);
template TangentGroupoidElement<Rational> multiply(const ValidatedChart&, const TangentGroupoidElement<Rational>&,
                                                   const TangentGroupoidElement<Rational>&);

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi)
{
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

} // namespace

InjectivityReport injectivity_probe(const GradedConnection& conn, const Splitting& psi, const ChartDomain& domain,
                                    int samples, std::uint64_t seed, double tolerance)
{
  const ExponentialMap<double> map(conn, psi, domain);
  const int n = map.dim();
  std::vector<VectorX<double>> bases;
  for (const auto& p : psi.chart().chart().sample_points())
    if (!determinant_exact(psi.chart().chart().frame_matrix_at(p)).is_zero())
      bases.push_back(vector_cast<double>(p));
  InjectivityReport report;
  report.samples = samples;
  if (bases.empty() || samples < 2) {
    report.message = "no collision found at " + std::to_string(samples) + " samples";
    return report;
  }

  std::mt19937_64 rng(seed);
  struct Sample {
    std::size_t base;
    VectorX<double> v;
    VectorX<double> y;
  };
  std::vector<Sample> all;
  for (int s = 0; s < samples; ++s) {
    Sample smp;
    smp.base = static_cast<std::size_t>(rng() % bases.size());
    smp.v.resize(n);
    for (int a = 0; a < n; ++a)
      smp.v[a] = uniform(rng, -domain.radius, domain.radius);
    try {
      smp.y = map.exp(bases[smp.base], VectorX<double>(map.splitting_frame(bases[smp.base]) * smp.v));
    } catch (const Error&) {
      ++report.undefined;
      continue;
    }
    all.push_back(std::move(smp));
  }

  if (all.size() < 2) {
    report.message = "no collision found at " + std::to_string(samples) + " samples; " +
                     std::to_string(report.undefined) + " geodesics broke down inside the domain";
    return report;
  }

  auto record = [&](const VectorX<double>& x, const VectorX<double>& v1, const VectorX<double>& v2) {
    report.collision = true;
    report.x = x;
    report.v1 = v1;
    report.v2 = v2;
    std::string vs1, vs2;
    for (int a = 0; a < n; ++a) {
      vs1 += (a ? "," : "") + format_double(v1[a]);
      vs2 += (a ? "," : "") + format_double(v2[a]);
    }
    report.message = "collision: v=(" + vs1 + ") and v=(" + vs2 + ") give the same arrow";
  };

  // Near-coincident images among the samples.
  std::vector<std::size_t> order(all.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return std::tie(all[i].base, all[i].y[0]) < std::tie(all[j].base, all[j].y[0]);
  });
  for (std::size_t i = 0; i < order.size() && !report.collision; ++i) {
    const Sample& a = all[order[i]];
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const Sample& b = all[order[j]];
      if (b.base != a.base || b.y[0] - a.y[0] > tolerance)
        break;
      if ((a.y - b.y).cwiseAbs().maxCoeff() <= tolerance && (a.v - b.v).cwiseAbs().maxCoeff() > 1e-6) {
        record(bases[a.base], a.v, b.v);
        break;
      }
    }
  }

  // Shooting: aim at a sample's image starting from another sample's vector.
  const std::size_t shots = std::min<std::size_t>(all.size(), 256);
  for (std::size_t i = 0; i < shots && !report.collision; ++i) {
    const Sample& target = all[i];
    const Sample& from = all[(i * 7919 + 1) % all.size()];
    if (&from == &target)
      continue;
    const VectorX<double>& x = bases[target.base];
    const MatrixX<double> b = map.splitting_frame(x);
    try {
      const auto tangent = map.shoot(x, target.y, VectorX<double>(b * from.v));
      if (!tangent)
        continue;
      const auto v = solve(b, *tangent);
      if (!v || v->cwiseAbs().maxCoeff() > domain.radius)
        continue;
      if ((*v - target.v).cwiseAbs().maxCoeff() > 1e-6 &&
          (map.exp(x, *tangent) - target.y).cwiseAbs().maxCoeff() <= tolerance)
        record(x, target.v, *v);
    } catch (const Error&) {
      // shooting wandered out of the region where the geodesic exists
    }
  }
  if (!report.collision)
    report.message = "no collision found at " + std::to_string(samples) + " samples";
  if (report.undefined > 0)
    report.message += "; " + std::to_string(report.undefined) + " geodesics broke down inside the domain";
  return report;
}

template <typename Scalar>
DeformationReport<Scalar> deformation_limit_check(const GradedConnection& conn, const Splitting& psi,
                                                  const VectorX<Scalar>& x, const VectorX<Scalar>& v,
                                                  const VectorX<Scalar>& w, const std::vector<Scalar>& t_sequence,
                                                  const ChartDomain& domain)
{
  const ExponentialMap<Scalar> map(conn, psi, domain);
  const ValidatedChart& chart = psi.chart();
  DeformationReport<Scalar> report;
  const auto limit = multiply<Scalar>(chart, OsculatingArrow<Scalar>{x, v}, OsculatingArrow<Scalar>{x, w});
  report.limit = std::get<OsculatingArrow<Scalar>>(limit).v;
  for (const Scalar& t : t_sequence) {
    const auto h = map.global_chart(x, w, t);
    VectorX<Scalar> u;
    if (const auto* ph = std::get_if<PairArrow<Scalar>>(&h)) {
      const auto g = map.global_chart(ph->range, v, t);
      const auto product = multiply<Scalar>(chart, g, h);
      u = map.chart_log(std::get<PairArrow<Scalar>>(product)).v;
    } else {
      const auto g = map.global_chart(x, v, t);
      u = std::get<OsculatingArrow<Scalar>>(multiply<Scalar>(chart, g, h)).v;
    }
    const double err = max_abs(VectorX<Scalar>(u - report.limit));
    report.rows.push_back({t, u, err});
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    report.ratios.push_back(report.rows[i - 1].error > 0.0 ? report.rows[i].error / report.rows[i - 1].error : 0.0);

  const double scale = 1.0 + max_abs(report.limit);
  const bool negligible = std::all_of(report.rows.begin(), report.rows.end(),
                                      [&](const auto& r) { return r.error <= 1e-10 * scale; });
  bool decreasing = report.rows.size() >= 2;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    decreasing = decreasing && report.rows[i].error < report.rows[i - 1].error;
  std::string witness;
  if (!negligible && !decreasing) {
    witness = "errors do not decrease along the t sequence:";
    for (const auto& r : report.rows)
      witness += " " + format_double(r.error);
  }
  report.checks.add("deformation_limit", negligible || decreasing, witness);
  return report;
}

template DeformationReport<double> deformation_limit_check(const GradedConnection&, const Splitting&,
                                                           const VectorX<double>&, const VectorX<double>&,
                                                           const VectorX<double>&, const std::vector<double>&,
                                                           const ChartDomain&);
template DeformationReport<Rational> deformation_limit_check(const GradedConnection&, const Splitting&,
                                                             const VectorX<Rational>&, const VectorX<Rational>&,
                                                             const VectorX<Rational>&, const std::vector<Rational>&,
                                                             const ChartDomain&);

} // namespace carnot
