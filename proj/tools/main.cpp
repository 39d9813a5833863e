#include "carnot/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace carnot;

int main(int argc, char** argv)
{
  CLI::App app{"carnot: filtered manifolds, osculating groups and tangent groupoid charts"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CommandOptions opt;
  std::string point, t;
  std::vector<std::string> vectors;
  std::string t_seq;
  std::uint64_t seed = 0;
  int steps = 0;
  double tol = 0.0, radius = 0.0;
  bool json_out = true;

  auto add_common = [&](CLI::App* sub, bool needs_manifest) {
    if (needs_manifest) {
      auto* path = sub->add_option("--manifest", opt.source.path, "manifest JSON file");
      auto* example = sub->add_option("--example", opt.source.example,
                                      "bundled example (abelian-N, heisenberg3, engel4, twisted-heisenberg)");
      path->excludes(example);
      sub->add_option("--point", point, "base point, comma-separated rationals");
      sub->add_option("--vector", vectors, "algebra vector (repeatable)");
      sub->add_option("--t", t, "deformation parameter");
      sub->add_option("--t-seq", t_seq, "comma-separated t values");
      sub->add_option("--steps", steps, "RK4 steps on [0,1]")->check(CLI::PositiveNumber);
      sub->add_option("--tol", tol, "shooting tolerance")->check(CLI::PositiveNumber);
      sub->add_option("--radius", radius, "chart domain radius")->check(CLI::PositiveNumber);
      sub->add_option("--splitting", opt.splitting, "named splitting from the manifest");
      sub->add_flag("--exact", opt.exact, "rational pipeline for chart and deform");
      sub->add_flag("--roundtrip", opt.roundtrip, "chart: also run chart_log and report the error");
    }
    sub->add_option("--seed", seed, "64-bit seed for random sampling");
    sub->add_flag("--timing", opt.timing, "add wall-clock time to the report");
    sub->add_flag("--json,!--text", json_out, "report format (default JSON)");
  };

  add_common(app.add_subcommand("validate", "check the filtration, osculating algebras and connection"), true);
  add_common(app.add_subcommand("osculate", "osculating algebra at a point"), true);
  add_common(app.add_subcommand("bch", "group product of two vectors in the osculating algebra"), true);
  add_common(app.add_subcommand("chart", "global exponential chart of the tangent groupoid"), true);
  add_common(app.add_subcommand("deform", "t -> 0 limit of the chart-pullback product"), true);
  auto* self = app.add_subcommand("selftest", "invariant suite on all bundled examples");
  add_common(self, false);
  self->add_option("--inject", opt.inject, "fault injection: jacobi, gradedness, antisymmetry");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (!point.empty())
      opt.point = parse_vector_arg(point);
    for (const auto& v : vectors)
      opt.vectors.push_back(parse_vector_arg(v));
    if (!t.empty())
      opt.t = parse_rational(t);
    if (!t_seq.empty()) {
      const VectorQ ts = parse_vector_arg(t_seq);
      for (Eigen::Index i = 0; i < ts.size(); ++i)
        opt.t_sequence.push_back(ts[i]);
    }
    if (sub->count("--seed"))
      opt.seed = seed;
    if (steps > 0)
      opt.steps = steps;
    if (tol > 0.0)
      opt.tol = tol;
    if (radius > 0.0)
      opt.radius = radius;
    const CommandResult result = run_command(command, opt);
    std::cout << (json_out ? render_json(result.report) : render_text(result.report));
    return result.passed ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "carnot " << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "carnot " << command << ": " << e.what() << '\n';
    return 2;
  }
}
