#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "layout.hpp"
#include "support.hpp"
#include "text_format.hpp"

using namespace ilock;
using namespace ilock::testing;

namespace {

const char* kMinimal = R"(
[tracks]
T1
[borders]
B track=T1 inbound=down
)";

template <class Fn>
std::string validation_message(Fn fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("mini_panthong fixture parses with the counts it declares") {
  LayoutGraph g = mini_layout();
  CHECK(g.tracks.size() == 10);
  CHECK(g.points.size() == 2);
  CHECK(g.derailers.size() == 1);
  CHECK(g.signals.size() == 8);
  CHECK(g.borders.size() == 2);
  REQUIRE(g.find_point("101"));
  CHECK(g.find_point("101")->joint == "18T");
  CHECK(g.find_signal("3-1")->chained_to == std::optional<SignalId>("3-3"));
}

TEST_CASE("minimal layout: one track, one border, no equipment") {
  LayoutGraph g = parse_layout(kMinimal);
  CHECK(g.tracks.size() == 1);
  CHECK(g.signals.empty());
  CHECK(g.borders.size() == 1);
}

TEST_CASE("dangling point leg is reported by name") {
  std::string msg = validation_message([] {
    parse_layout(R"(
[tracks]
A
B
[edges]
A B
[points]
P joint=B normal=A reverse=99T
)");
  });
  CHECK(msg.find("99T") != std::string::npos);
  CHECK(msg.find("dangling") != std::string::npos);
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse_layout("[tracks]\nA\n[signals]\nS kind=home behind=A ahead=A colour=red\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
    CHECK(e.column() > 1);
    CHECK(e.detail().find("colour") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_layout("A\n"), ParseError);
  CHECK_THROWS_AS(parse_layout("[nowhere]\n"), ParseError);
  CHECK_THROWS_AS(parse_layout("[edges]\nA\n"), ParseError);
}

TEST_CASE("structural violations are rejected") {
  CHECK(validation_message([] { parse_layout("[tracks]\nA\nA\n"); })
            .find("duplicate track") != std::string::npos);
  CHECK(validation_message([] { parse_layout("[tracks]\nA\nB\n"); })
            .find("disconnected") != std::string::npos);
  // Point with a leg equal to its joint.
  CHECK_FALSE(validation_message([] {
                parse_layout(
                    "[tracks]\nA\nB\n[edges]\nA B\n[points]\nP joint=A "
                    "normal=A reverse=B\n");
              }).empty());
  // Two signals on the same boundary and direction.
  CHECK_FALSE(validation_message([] {
                parse_layout(
                    "[tracks]\nA\nB\n[edges]\nA B\n[signals]\n"
                    "S1 kind=home behind=A ahead=B facing=down chain=-\n"
                    "S2 kind=starter behind=A ahead=B facing=down chain=-\n");
              }).empty());
  // Queued trains must be unique across borders.
  CHECK_FALSE(validation_message([] {
                parse_layout(
                    "[tracks]\nA\nB\n[edges]\nA B\n[borders]\n"
                    "X track=A inbound=down queue=T1\n"
                    "Y track=B inbound=up queue=T1\n");
              }).empty());
}

TEST_CASE("section order does not matter") {
  LayoutGraph a = parse_layout(
      "[tracks]\nA\nB\n[edges]\nA B\n[borders]\nX track=A inbound=down\n");
  LayoutGraph b = parse_layout(
      "[borders]\nX track=A inbound=down\n[edges]\nA B\n[tracks]\nA\nB\n");
  CHECK(a == b);
}

TEST_CASE("parse(serialize(layout)) is the identity") {
  for (const auto& path : {"mini_panthong/mini_panthong.layout",
                           "tiny_loop/tiny_loop.layout"}) {
    LayoutGraph g = parse_layout(read_file(fixture(path)));
    CHECK(parse_layout(serialize_layout(g)) == g);
    for (const auto& s : g.signals) {
      LayoutGraph r = remove_signal(g, s.id);
      CHECK(parse_layout(serialize_layout(r)) == r);
    }
  }
  LayoutGraph minimal = parse_layout(kMinimal);
  CHECK(parse_layout(serialize_layout(minimal)) == minimal);
}

TEST_CASE("remove_signal") {
  LayoutGraph g = mini_layout();

  SUBCASE("starter 17: the move past its place is unsignalled") {
    auto before = moves_from(g, "63T", Direction::kDown);
    REQUIRE(before.size() == 1);
    CHECK(before[0].front_signal == std::optional<SignalId>("17"));
    LayoutGraph r = remove_signal(g, "17");
    auto after = moves_from(r, "63T", Direction::kDown);
    REQUIRE(after.size() == 1);
    CHECK_FALSE(after[0].front_signal.has_value());
    CHECK(after[0].to == "102T");
    CHECK(r.signals.size() == g.signals.size() - 1);
  }

  SUBCASE("home 3-3 clears the chain of warner 3-1") {
    LayoutGraph r = remove_signal(g, "3-3");
    REQUIRE(r.find_signal("3-1"));
    CHECK_FALSE(r.find_signal("3-1")->chained_to.has_value());
    CHECK(r.find_signal("4-2")->chained_to == std::optional<SignalId>("4-4"));
  }

  SUBCASE("unknown id") {
    CHECK_THROWS_AS(remove_signal(g, "99"), ValidationError);
  }

  SUBCASE("only signals change") {
    for (const auto& s : g.signals) {
      LayoutGraph r = remove_signal(g, s.id);
      CHECK(r.tracks == g.tracks);
      CHECK(r.edges == g.edges);
      CHECK(r.points == g.points);
      CHECK(r.derailers == g.derailers);
      CHECK(r.borders == g.borders);
      CHECK(r.signals.size() + 1 == g.signals.size());
      CHECK_FALSE(r.find_signal(s.id));
    }
  }
}

TEST_CASE("moves_from") {
  LayoutGraph g = mini_layout();

  SUBCASE("18T down: a facing point offers both legs") {
    auto mv = moves_from(g, "18T", Direction::kDown);
    REQUIRE(mv.size() == 2);
    CHECK(mv[0].kind == MoveKind::kPoint);
    CHECK(mv[0].to == "61T");
    CHECK(mv[0].leg == PointLeg::kReverse);
    CHECK(mv[1].to == "63T");
    CHECK(mv[1].leg == PointLeg::kNormal);
    CHECK(mv[0].facing);
    CHECK(mv[0].point == std::optional<PointId>("101"));
  }

  SUBCASE("border track heading out") {
    auto down = moves_from(g, "2T", Direction::kDown);
    REQUIRE(down.size() == 1);
    CHECK(down[0].kind == MoveKind::kBorderExit);
    CHECK(down[0].border == "S");
    auto up = moves_from(g, "1T", Direction::kUp);
    REQUIRE(up.size() == 1);
    CHECK(up[0].kind == MoveKind::kBorderExit);
  }

  SUBCASE("passing the back of a signal") {
    auto mv = moves_from(g, "4-4T", Direction::kDown);
    REQUIRE(mv.size() == 1);
    CHECK(mv[0].kind == MoveKind::kBehindSignal);
    CHECK(mv[0].to == "4-1T");
  }

  SUBCASE("front of a signal") {
    auto mv = moves_from(g, "3-1T", Direction::kDown);
    REQUIRE(mv.size() == 1);
    CHECK(mv[0].kind == MoveKind::kFrontSignal);
    CHECK(mv[0].front_signal == std::optional<SignalId>("3-3"));
  }

  SUBCASE("trailing point move") {
    auto mv = moves_from(g, "61T", Direction::kUp);
    REQUIRE(mv.size() == 1);
    CHECK(mv[0].kind == MoveKind::kPoint);
    CHECK_FALSE(mv[0].facing);
    CHECK(mv[0].to == "18T");
    CHECK(mv[0].leg == PointLeg::kReverse);
    CHECK(mv[0].front_signal == std::optional<SignalId>("18"));
  }

  SUBCASE("dead end") {
    LayoutGraph line = parse_layout(
        "[tracks]\nA\nB\n[edges]\nA B\n[borders]\nX track=A inbound=down\n");
    CHECK(moves_from(line, "B", Direction::kDown).empty());
  }
}

TEST_CASE("moves_from properties over both fixtures") {
  for (const auto& path : {"mini_panthong/mini_panthong.layout",
                           "tiny_loop/tiny_loop.layout"}) {
    LayoutGraph g = parse_layout(read_file(fixture(path)));
    for (const auto& t : g.tracks) {
      for (Direction d : {Direction::kUp, Direction::kDown}) {
        auto mv = moves_from(g, t, d);
        CHECK(mv == moves_from(g, t, d));
        for (std::size_t i = 0; i < mv.size(); ++i) {
          for (std::size_t j = i + 1; j < mv.size(); ++j) {
            CHECK_FALSE(mv[i] == mv[j]);
          }
          if (mv[i].kind != MoveKind::kPoint) continue;
          const PointSpec* p = g.find_point(*mv[i].point);
          REQUIRE(p);
          const TrackId& leg = p->leg(mv[i].leg);
          CHECK(leg != p->joint);
          CHECK((leg == p->normal_leg || leg == p->reverse_leg));
          CHECK((mv[i].facing ? mv[i].to : mv[i].from) == leg);
        }
      }
    }
  }
}
