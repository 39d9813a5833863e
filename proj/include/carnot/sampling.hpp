#pragma once

#include "carnot/tangent_algebroid.hpp"

#include <cstdint>
#include <random>

namespace carnot {

/// Seeded generator for random exact test data. The mapping from raw 64-bit
/// draws to values is fixed here so sequences do not depend on the standard
/// library's distributions.
class Sampler {
public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi);
  /// num / den with |num| <= num_bound and 1 <= den <= den_max.
  Rational rational(long num_bound = 3, long den_max = 4);
  Rational nonzero_rational(long num_bound = 3, long den_max = 4);
  VectorQ vector(int n, long num_bound = 3, long den_max = 4);
  double uniform(double lo, double hi);
  VectorX<double> uniform_vector(int n, double radius);

  /// Sum of up to `terms` random monomials with x-degree <= max_degree and
  /// t-degree <= max_time_degree (when the layout carries t).
  Polynomial polynomial(VariableLayout layout, int max_degree, int max_time_degree, int terms,
                        int degree_cap = kDefaultDegreeCap);

  GradedSection graded_section(const ValidatedChart& chart, int max_degree = 1, int max_time_degree = 1,
                               int terms = 2);
  /// Random polynomial corrections on every admissible (a, b).
  Splitting splitting(const ValidatedChart& chart, int max_degree = 1);

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
};

} // namespace carnot
