#pragma once

#include "carnot/exponential.hpp"
#include "carnot/filtration.hpp"
#include "carnot/graded_algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carnot {

struct SectionSpec {
  enum class Kind { H, Graded };
  Kind kind = Kind::H;
  std::vector<Polynomial> coefficients; // in x and t
};

struct RunParameters {
  std::optional<VectorQ> point;
  std::vector<VectorQ> vectors;
  std::optional<Rational> t;
  std::vector<Rational> t_sequence;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<double> tol;
  std::optional<double> radius;
};

/// Parsed manifest. Indices are 1-based in the file and 0-based here.
struct Manifest {
  std::string name;
  std::optional<FilteredChart> chart;
  std::map<std::string, Splitting::Corrections> splittings;
  std::optional<GradedConnection::Christoffels> connection;
  std::map<std::string, SectionSpec> sections;
  std::map<std::string, GradedLieAlgebra<Rational>> algebras;
  RunParameters run;

  const FilteredChart& require_chart() const;
};

/// Parses the JSON text. Syntax errors carry line and column; structural
/// errors name the offending JSON path.
Manifest parse_manifest(std::string_view text);
Manifest load_manifest(const std::string& path);

/// Canonical JSON (sorted keys, two-space indent); parse(dump(m)) == m.
std::string dump_manifest(const Manifest& m);

/// Names accepted by bundled_manifest, with abelian-n standing for any n >= 1.
std::vector<std::string> bundled_names();
/// Throws std::invalid_argument for unknown names.
Manifest bundled_manifest(const std::string& name);
std::string bundled_manifest_text(const std::string& name);

} // namespace carnot
