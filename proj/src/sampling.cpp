#include "carnot/sampling.hpp"

namespace carnot {

long Sampler::integer(long lo, long hi)
{
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<long>(rng_() % span);
}

Rational Sampler::rational(long num_bound, long den_max)
{
  const long num = integer(-num_bound, num_bound);
  const long den = integer(1, den_max);
  return Rational(num, den);
}

Rational Sampler::nonzero_rational(long num_bound, long den_max)
{
  Rational q;
  do
    q = rational(num_bound, den_max);
  while (q.is_zero());
  return q;
}

VectorQ Sampler::vector(int n, long num_bound, long den_max)
{
  VectorQ v(n);
  for (int i = 0; i < n; ++i)
    v[i] = rational(num_bound, den_max);
  return v;
}

double Sampler::uniform(double lo, double hi)
{
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

VectorX<double> Sampler::uniform_vector(int n, double radius)
{
  VectorX<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = uniform(-radius, radius);
  return v;
}

Polynomial Sampler::polynomial(VariableLayout layout, int max_degree, int max_time_degree, int terms, int degree_cap)
{
  Polynomial out(layout, degree_cap);
  for (int k = 0; k < terms; ++k) {
    Exponents e(static_cast<std::size_t>(layout.count()), 0);
    const long d = integer(0, max_degree);
    for (long i = 0; i < d && layout.space > 0; ++i)
      ++e[static_cast<std::size_t>(integer(0, layout.space - 1))];
    if (layout.time)
      e.back() = static_cast<int>(integer(0, max_time_degree));
    out += Polynomial::monomial(layout, std::move(e), rational(), degree_cap);
  }
  return out;
}

GradedSection Sampler::graded_section(const ValidatedChart& chart, int max_degree, int max_time_degree, int terms)
{
  std::vector<Polynomial> q;
  for (int a = 0; a < chart.dim(); ++a)
    q.push_back(polynomial(VariableLayout{chart.dim(), true}, max_degree, max_time_degree, terms,
                           chart.chart().degree_cap()));
  return GradedSection(chart, std::move(q));
}

Splitting Sampler::splitting(const ValidatedChart& chart, int max_degree)
{
  Splitting::Corrections corr;
  for (int a = 0; a < chart.dim(); ++a)
    for (int b = 0; b < chart.dim(); ++b)
      if (chart.order(b) < chart.order(a))
        corr.emplace(std::make_pair(a, b),
                     polynomial(VariableLayout{chart.dim(), false}, max_degree, 0, 2, chart.chart().degree_cap()));
  return Splitting(chart, std::move(corr));
}

} // namespace carnot
