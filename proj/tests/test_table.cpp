#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "support.hpp"
#include "table.hpp"
#include "text_format.hpp"

using namespace ilock;
using namespace ilock::testing;

namespace {

std::string mini_text() {
  return read_file(fixture("mini_panthong/mini_panthong.table"));
}

// The mini table with the first occurrence of `from` replaced by `to`.
std::string mini_with(const std::string& from, const std::string& to) {
  std::string text = mini_text();
  auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

std::vector<std::string> codes_for(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& d : validate_table(parse_table(text), mini_layout())) {
    out.push_back(d.code);
  }
  return out;
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_CASE("a route with six conflicts keeps all six") {
  const char* text =
      "route 3-3(3) entry=3-3 exit=17 tracks=A points=- "
      "conflicts=16(2),32(2),3-3(1),3-3(2),18,4-4(3) approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n"
      "route 16(2) entry=16 exit=- tracks=A points=- conflicts=- approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n"
      "route 32(2) entry=32 exit=- tracks=A points=- conflicts=- approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n"
      "route 3-3(1) entry=3-3 exit=- tracks=A points=- conflicts=- approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n"
      "route 3-3(2) entry=3-3 exit=- tracks=A points=- conflicts=- approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n"
      "route 18 entry=18 exit=- tracks=A points=- conflicts=- approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n"
      "route 4-4(3) entry=4-4 exit=- tracks=A points=- conflicts=- approach=Z "
      "release_clear=- release_occ_clear=A release_final=A\n";
  InterlockingTable t = parse_table(text);
  const RouteSpec* r = t.find_route("3-3(3)");
  REQUIRE(r);
  CHECK(r->conflicts.size() == 6);
  CHECK(r->conflicts.count("4-4(3)") == 1);
  CHECK(conflicts_closed(t, "3-3(3)", "16(2)"));
  CHECK(conflicts_closed(t, "16(2)", "3-3(3)"));
  CHECK_FALSE(conflicts_closed(t, "16(2)", "18"));
}

TEST_CASE("minimal table: one route, no conflicts, no flank") {
  InterlockingTable t = parse_table(
      "route R1 entry=H1 exit=- tracks=JT,NT points=P1:N conflicts=- "
      "approach=BT release_clear=- release_occ_clear=JT release_final=NT\n");
  REQUIRE(t.routes.size() == 1);
  CHECK(t.flank.empty());
  CHECK(t.flank_of("R1").empty());
  CHECK(t.routes[0].aspect == AspectRule::kGreenIfExitClear);
  CHECK_FALSE(t.routes[0].exit_signal.has_value());
}

TEST_CASE("parse errors") {
  SUBCASE("self-conflict") {
    try {
      parse_table(mini_with("conflicts=3-3(2),4-4(1)", "conflicts=3-3(3),3-3(2),4-4(1)"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("self-conflict") != std::string::npos);
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate route") {
    CHECK_THROWS_AS(parse_table(mini_text() + mini_text()), ParseError);
  }
  SUBCASE("unresolvable conflict") {
    CHECK_THROWS_AS(parse_table(mini_with("conflicts=15(2),4-4(1)",
                                          "conflicts=15(9),4-4(1)")),
                    ParseError);
  }
  SUBCASE("flank for an unknown route") {
    CHECK_THROWS_AS(parse_table(mini_text() + "flank 99 tracks_clear=63T\n"),
                    ParseError);
  }
  SUBCASE("bad position and aspect") {
    CHECK_THROWS_AS(parse_table(mini_with("points=101:N", "points=101:X")),
                    ParseError);
    CHECK_THROWS_AS(parse_table(mini_with("aspect=green_if_exit",
                                          "aspect=purple")),
                    ParseError);
    CHECK_THROWS_AS(parse_table("route R1 entry=H1\n"), ParseError);
  }
}

TEST_CASE("validate_table") {
  SUBCASE("mini fixture is clean") {
    CHECK(validate_table(mini_table(), mini_layout()).empty());
  }
  SUBCASE("flank point also demanded by the route") {
    auto table =
        parse_table(read_file(fixture("invalid/flank_on_own_route.table")));
    auto layout =
        parse_layout(read_file(fixture("invalid/tiny_loop.layout")));
    auto d = validate_table(table, layout);
    REQUIRE(d.size() == 1);
    CHECK(d[0].severity == Severity::kError);
    CHECK(d[0].code == "flank-on-own-route");
    CHECK(d[0].message.find("flank element on own route") != std::string::npos);
    CHECK(has_errors(d));
  }
  SUBCASE("asymmetric conflict is a warning") {
    auto table =
        parse_table(read_file(fixture("invalid/asymmetric_conflict.table")));
    auto d = validate_table(table, mini_layout());
    REQUIRE(d.size() == 1);
    CHECK(d[0].severity == Severity::kWarning);
    CHECK(d[0].code == "asymmetric-conflict");
    CHECK_FALSE(has_errors(d));
    // The kernel relation stays symmetric.
    CHECK(conflicts_closed(table, "16", "3-3(2)"));
    CHECK(conflicts_closed(table, "3-3(2)", "16"));
  }
  SUBCASE("non-contiguous tracks") {
    CHECK(contains(codes_for(mini_with("tracks=3-3T,18T,63T",
                                       "tracks=3-3T,63T")),
                   "non-contiguous"));
  }
  SUBCASE("point demand contradicting the route geometry") {
    CHECK(contains(codes_for(mini_with("points=101:N conflicts=3-3(2)",
                                       "points=101:R conflicts=3-3(2)")),
                   "non-contiguous"));
  }
  SUBCASE("approach not behind the entry signal") {
    CHECK(contains(codes_for(mini_with("approach=3-1T", "approach=1T")),
                   "approach-not-behind-entry"));
  }
  SUBCASE("release track off the route") {
    CHECK(contains(codes_for(mini_with("release_final=63T",
                                       "release_final=61T")),
                   "release-outside-route"));
  }
  SUBCASE("dangling ids") {
    CHECK(contains(codes_for(mini_with("approach=3-1T", "approach=9T")),
                   "dangling-reference"));
    CHECK(contains(codes_for(mini_with("entry=3-3", "entry=99")),
                   "dangling-reference"));
    CHECK(contains(codes_for(mini_with("flank 3-3(3) points=102:N",
                                       "flank 3-3(3) points=999:N")),
                   "dangling-reference"));
  }
  SUBCASE("derailer crossed without demanding it") {
    CHECK(contains(codes_for(mini_with("points=101:R,202:R",
                                       "points=101:R")),
                   "derailer-not-passed"));
  }
  SUBCASE("diagnostic text names the route") {
    auto table =
        parse_table(read_file(fixture("invalid/flank_on_own_route.table")));
    auto layout =
        parse_layout(read_file(fixture("invalid/tiny_loop.layout")));
    std::string line = format_diagnostic(validate_table(table, layout)[0]);
    CHECK(line.rfind("ERROR flank-on-own-route route=R1:", 0) == 0);
  }
}

TEST_CASE("strip_flank") {
  InterlockingTable t = mini_table();
  InterlockingTable s = strip_flank(t);
  CHECK(s.routes == t.routes);
  for (const auto& r : s.routes) CHECK(s.flank_of(r.id).empty());
  CHECK(strip_flank(s) == s);
  CHECK_FALSE(t.flank.empty());

  // With flank protection 15(2) needs 63T clear, which 3-3(3) uses; without
  // it nothing links them.
  CHECK_FALSE(conflicts_closed(t, "3-3(3)", "15(2)"));
  Model with = mini_model({{"3-1T", "A1", Direction::kDown},
                           {"61T", "P2", Direction::kDown}});
  Modes off;
  off.flank = false;
  Model without = mini_model({{"3-1T", "A1", Direction::kDown},
                              {"61T", "P2", Direction::kDown}},
                             off);
  auto both_set = [](const Model& model) {
    bool found = false;
    int a = route(model, "3-3(3)");
    int b = route(model, "15(2)");
    for_each_reachable(model, [&](const Marking& m, const auto&) {
      if (m.routes[a].status == RouteStatus::kSet &&
          m.routes[b].status == RouteStatus::kSet) {
        found = true;
      }
    });
    return found;
  };
  CHECK(both_set(without));
  CHECK_FALSE(both_set(with));
}

TEST_CASE("conflicts_closed") {
  InterlockingTable t = mini_table();
  CHECK(conflicts_closed(t, "3-3(3)", "16"));
  CHECK_FALSE(conflicts_closed(t, "3-3(3)", "3-3(3)"));
  CHECK_FALSE(conflicts_closed(t, "3-3(3)", "15(2)"));
  CHECK_THROWS_AS(conflicts_closed(t, "3-3(3)", "nope"), ValidationError);
  for (const auto& a : t.routes) {
    for (const auto& b : t.routes) {
      CHECK(conflicts_closed(t, a.id, b.id) == conflicts_closed(t, b.id, a.id));
    }
  }
}

TEST_CASE("parse(serialize(table)) is the identity") {
  for (const auto& path :
       {"mini_panthong/mini_panthong.table", "tiny_loop/tiny_loop.table",
        "invalid/flank_on_own_route.table",
        "invalid/asymmetric_conflict.table"}) {
    InterlockingTable t = parse_table(read_file(fixture(path)));
    CHECK(parse_table(serialize_table(t)) == t);
    CHECK(parse_table(serialize_table(strip_flank(t))) == strip_flank(t));
  }
}
