#pragma once

#include "carnot/manifest.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace carnot {

/// Where the manifest came from, for echoing and reproduce lines.
struct ManifestSource {
  std::string path;    // --manifest
  std::string example; // --example
};

/// Command-line overrides; unset fields fall back to the manifest's run
/// section and then to built-in defaults.
struct CommandOptions {
  ManifestSource source;
  std::optional<VectorQ> point;
  std::vector<VectorQ> vectors;
  std::optional<Rational> t;
  std::vector<Rational> t_sequence;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::optional<double> tol;
  std::optional<double> radius;
  std::string splitting; // name in the manifest, empty for canonical
  bool exact = false;
  bool roundtrip = false;
  bool timing = false;
  std::vector<std::string> inject; // selftest fault injection
};

struct CommandResult {
  nlohmann::json report;
  bool passed = true;
};

CommandResult cmd_validate(const Manifest& m, const CommandOptions& opt);
CommandResult cmd_osculate(const Manifest& m, const CommandOptions& opt);
CommandResult cmd_bch(const Manifest& m, const CommandOptions& opt);
CommandResult cmd_chart(const Manifest& m, const CommandOptions& opt);
CommandResult cmd_deform(const Manifest& m, const CommandOptions& opt);
/// Runs the invariant suite on every bundled manifest. Ignores m.
CommandResult cmd_selftest(const CommandOptions& opt);

/// Dispatch by name; the manifest is resolved from opt.source. Throws
/// ParseError for unreadable manifests and std::invalid_argument for unknown
/// commands.
CommandResult run_command(const std::string& command, const CommandOptions& opt);

std::string render_json(const nlohmann::json& report);
std::string render_text(const nlohmann::json& report);

/// Single shell command that reruns the given invocation.
std::string reproduce_line(const std::string& command, const CommandOptions& opt);

/// Comma-separated rationals, e.g. "1,0,-1/2".
VectorQ parse_vector_arg(const std::string& text);

} // namespace carnot
