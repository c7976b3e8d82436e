#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "report.hpp"
#include "support.hpp"

using ilock::testing::fixture;

namespace {

struct Run {
  int status = -1;
  std::string out;  // stdout and stderr
};

Run run(const std::string& args) {
  std::string cmd = std::string(ILOCK_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) {
    r.out.append(buf.data(), n);
  }
  int raw = pclose(p);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string scenario_arg(const std::string& rel) {
  return "--scenario " + fixture(rel);
}

std::string files_arg(const std::string& layout, const std::string& table) {
  return "--layout " + fixture(layout) + " --table " + fixture(table);
}

}  // namespace

TEST_CASE("validate") {
  Run ok = run("validate " +
               files_arg("mini_panthong/mini_panthong.layout",
                         "mini_panthong/mini_panthong.table"));
  CHECK(ok.status == 0);
  CHECK(ok.out == "0 error(s), 0 warning(s)\n");

  Run bad = run("validate " + files_arg("invalid/tiny_loop.layout",
                                        "invalid/flank_on_own_route.table"));
  CHECK(bad.status == 1);
  CHECK(bad.out.find("ERROR flank-on-own-route") != std::string::npos);
  CHECK(bad.out.find("1 error(s), 0 warning(s)") != std::string::npos);

  Run warn = run("validate " + files_arg("invalid/mini_panthong.layout",
                                         "invalid/asymmetric_conflict.table"));
  CHECK(warn.status == 0);
  CHECK(warn.out.find("WARNING asymmetric-conflict") != std::string::npos);
  CHECK(warn.out.find("0 error(s), 1 warning(s)") != std::string::npos);

  Run missing = run("validate --layout /nonexistent.layout --table " +
                    fixture("tiny_loop/tiny_loop.table"));
  CHECK(missing.status == 1);
  CHECK(missing.out.find("/nonexistent.layout") != std::string::npos);

  Run syntax = run("validate " + files_arg("mini_panthong/mini_panthong.table",
                                           "mini_panthong/mini_panthong.table"));
  CHECK(syntax.status == 1);
  CHECK(syntax.out.find("line ") != std::string::npos);
}

TEST_CASE("explore") {
  Run d = run("explore " + scenario_arg("mini_panthong/case_d.scenario"));
  CHECK(d.status == 0);
  CHECK(d.out.find("State space: 4555 nodes, 6286 arcs") != std::string::npos);

  Run crash = run("explore " + scenario_arg("mini_panthong/flank_17.scenario") +
                  " --flank off");
  CHECK(crash.status == 2);
  CHECK(crash.out.find("Accidents (shortest traces):") != std::string::npos);
  CHECK(crash.out.find("Head2Side at 102T") != std::string::npos);

  Run capped = run("explore " + scenario_arg("mini_panthong/case_a.scenario") +
                   " --cap 10 --format machine");
  CHECK(capped.status == 3);
  CHECK(capped.out.find("incomplete=1") != std::string::npos);

  // Overrides on top of a scenario.
  Run manual = run("explore " + scenario_arg("mini_panthong/case_d.scenario") +
                   " --auto off --format machine");
  CHECK(manual.status == 0);
  auto parsed = ilock::parse_machine_report(manual.out);
  CHECK(parsed.nodes == 36979);

  Run files = run("explore " + files_arg("tiny_loop/tiny_loop.layout",
                                         "tiny_loop/tiny_loop.table") +
                  " --format machine");
  CHECK(files.status == 0);
  CHECK(files.out.rfind("nodes=", 0) == 0);
}

TEST_CASE("machine output is identical across runs apart from timing") {
  std::string args = "explore " + scenario_arg("mini_panthong/case_b.scenario") +
                     " --format machine";
  Run a = run(args);
  Run b = run(args);
  REQUIRE(a.status == 0);
  CHECK(ilock::strip_elapsed(a.out) == ilock::strip_elapsed(b.out));
}

TEST_CASE("flank-check") {
  Run pass = run("flank-check " + scenario_arg("mini_panthong/flank_17.scenario"));
  CHECK(pass.status == 0);
  CHECK(pass.out.find("Verdict: PASS") != std::string::npos);

  Run vacuous = run("flank-check " + scenario_arg("tiny_loop/flank_h1.scenario"));
  CHECK(vacuous.status == 5);
  CHECK(vacuous.out.find("Verdict: VACUOUS") != std::string::npos);

  Run fail = run("flank-check " +
                 scenario_arg("mini_panthong/flank_17.scenario") + " --cap 5");
  CHECK(fail.status == 4);

  Run usage = run("flank-check " + scenario_arg("mini_panthong/case_d.scenario"));
  CHECK(usage.status == 64);
}

TEST_CASE("trace") {
  std::string base =
      scenario_arg("mini_panthong/flank_17.scenario") + " --flank off";
  Run m = run("explore " + base + " --format machine");
  auto parsed = ilock::parse_machine_report(m.out);
  const std::string* digest = nullptr;
  for (const auto& r : parsed.records) {
    if (r.type == "accident" && *r.field("kind") == "Head2Side") {
      digest = r.field("digest");
    }
  }
  REQUIRE(digest);
  Run t = run("trace " + base + " --trace " + *digest);
  CHECK(t.status == 0);
  CHECK(t.out.find("trace to " + *digest) != std::string::npos);
  CHECK(t.out.find("Move train=T1") != std::string::npos);

  Run unknown = run("trace " + base + " --trace " + std::string(32, '0'));
  CHECK(unknown.status != 0);
  CHECK(unknown.out.find("unknown marking digest") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run("").status == 64);
  CHECK(run("frobnicate").status == 64);
  CHECK(run("explore").status == 64);
  CHECK(run("explore " + scenario_arg("tiny_loop/two_trains.scenario") +
            " --format xml")
            .status == 64);
  CHECK(run("explore " + scenario_arg("tiny_loop/two_trains.scenario") +
            " --priorities sometimes")
            .status == 64);
  CHECK(run("--help").status == 0);
}
