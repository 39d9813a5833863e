#include "support.hpp"

#include "carnot/commands.hpp"

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace carnot;
using test::vq;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args)
{
  const std::string cmd = std::string(CARNOT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0)
    out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

TEST_CASE("manifests round-trip through the canonical dump")
{
  std::vector<std::string> names = bundled_names();
  names.erase(std::remove(names.begin(), names.end(), "abelian-n"), names.end());
  names.push_back("abelian-4");
  for (const auto& name : names) {
    CAPTURE(name);
    const std::string once = dump_manifest(bundled_manifest(name));
    CHECK(dump_manifest(parse_manifest(once)) == once);
  }
  for (const std::string f : {"heisenberg3-curved.json", "corrupt-algebras.json", "spiral.json"}) {
    CAPTURE(f);
    const Manifest m = load_manifest(test::fixture(f));
    const std::string once = dump_manifest(m);
    CHECK(dump_manifest(parse_manifest(once)) == once);
  }
  const Manifest a3 = bundled_manifest("abelian-n");
  CHECK(a3.require_chart().dim() == 3);
  CHECK_THROWS_AS(bundled_manifest("no-such-example"), std::invalid_argument);
}

TEST_CASE("manifest errors carry positions")
{
  try {
    load_manifest(test::fixture("malformed.json"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 5);
    CHECK(e.column() > 0);
  }
  try {
    load_manifest(test::fixture("bad-polynomial.json"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string what = e.what();
    CHECK(what.find("/chart/frame/1/components/1") != std::string::npos);
    CHECK(what.find("column") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_manifest(R"({"chart": {"coordinates": ["x"], "depth": 1, "frame": [], "color": 3}})"),
                  ParseError);
  CHECK_THROWS_AS(parse_manifest(R"({"bogus": 1})"), ParseError);
  CHECK_THROWS_AS(load_manifest(test::fixture("does-not-exist.json")), ParseError);
}

TEST_CASE("reports are deterministic")
{
  CommandOptions opt;
  opt.source.example = "heisenberg3";
  for (const std::string cmd : {"validate", "osculate", "bch", "chart", "deform"}) {
    CAPTURE(cmd);
    const std::string a = render_json(run_command(cmd, opt).report);
    const std::string b = render_json(run_command(cmd, opt).report);
    CHECK(a == b);
  }
  const auto r = run_command("bch", opt).report;
  CHECK(r.at("command") == "bch");
  CHECK(r.contains("reproduce"));
  CHECK(!r.contains("timing_ms"));
}

TEST_CASE("command results")
{
  CommandOptions opt;
  opt.source.example = "engel4";
  opt.vectors = {vq({1, 0, 0, 0}), vq({0, 1, 0, 0})};
  const CommandResult bch = cmd_bch(bundled_manifest("engel4"), opt);
  CHECK(bch.passed);
  CHECK(bch.report.dump().find("1/12") != std::string::npos);

  CommandOptions rel;
  rel.source.path = test::fixture("heisenberg3-relabeled.json");
  const CommandResult v = run_command("validate", rel);
  CHECK(!v.passed);
  CHECK(render_text(v.report).find("bracket_condition") != std::string::npos);

  CHECK(parse_vector_arg("1,-1/2,0") == vq({1, Rational(-1, 2), 0}));
  CHECK_THROWS_AS(parse_vector_arg("1,,2"), ParseError);
}

TEST_CASE("cli exit codes")
{
  CHECK(run_cli("validate --example heisenberg3").code == 0);
  CHECK(run_cli("bch --example engel4 --vector 1,0,0,0 --vector 0,1,0,0 --text").code == 0);
  CHECK(run_cli("validate --manifest " + test::fixture("heisenberg3-relabeled.json")).code == 1);
  CHECK(run_cli("selftest --inject jacobi").code == 1);
  CHECK(run_cli("chart --example heisenberg3 --vector 9,0,0 --t 1").code == 1);
  CHECK(run_cli("validate --manifest " + test::fixture("malformed.json")).code == 2);
  CHECK(run_cli("validate --example nope").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("bch --example heisenberg3 --vector 1,x,0").code == 2);

  const Run a = run_cli("deform --example heisenberg3 --exact");
  const Run b = run_cli("deform --example heisenberg3 --exact");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("reproduce line reruns the same report")
{
  const Run first = run_cli("chart --example twisted-heisenberg --vector 1/2,1/3,1/4 --t 1/2 --roundtrip");
  REQUIRE(first.code == 0);
  const auto report = nlohmann::json::parse(first.out);
  std::string line = report.at("reproduce");
  REQUIRE(line.rfind("carnot ", 0) == 0);
  const Run second = run_cli(line.substr(7));
  CHECK(second.out == first.out);
}

TEST_CASE("selftest passes on the bundled examples")
{
  const CommandResult r = cmd_selftest(CommandOptions{});
  CHECK(r.passed);
  CHECK(read_file(test::fixture("spiral.json")).find("spiral") != std::string::npos);
}
