#include "layout.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "text_format.hpp"

namespace ilock {

std::string_view to_string(Direction d) {
  return d == Direction::kUp ? "up" : "down";
}

std::optional<Direction> parse_direction(std::string_view text) {
  if (text == "up") return Direction::kUp;
  if (text == "down") return Direction::kDown;
  return std::nullopt;
}

std::string_view to_string(SignalKind k) {
  switch (k) {
    case SignalKind::kWarner:
      return "warner";
    case SignalKind::kHome:
      return "home";
    case SignalKind::kStarter:
      return "starter";
  }
  return "?";
}

std::string_view to_string(PointLeg leg) {
  return leg == PointLeg::kNormal ? "normal" : "reverse";
}

std::string_view to_string(MoveKind k) {
  switch (k) {
    case MoveKind::kPlain:
      return "plain";
    case MoveKind::kBehindSignal:
      return "behind-signal";
    case MoveKind::kFrontSignal:
      return "front-signal";
    case MoveKind::kPoint:
      return "point";
    case MoveKind::kBorderExit:
      return "border-exit";
  }
  return "?";
}

bool LayoutGraph::has_track(std::string_view id) const {
  return std::find(tracks.begin(), tracks.end(), id) != tracks.end();
}

const SignalSpec* LayoutGraph::find_signal(std::string_view id) const {
  for (const auto& s : signals) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

const PointSpec* LayoutGraph::find_point(std::string_view id) const {
  for (const auto& p : points) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const DerailerSpec* LayoutGraph::find_derailer(std::string_view id) const {
  for (const auto& d : derailers) {
    if (d.id == id) return &d;
  }
  return nullptr;
}

const Border* LayoutGraph::find_border(std::string_view id) const {
  for (const auto& b : borders) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

namespace {

enum class Section { kNone, kTracks, kEdges, kPoints, kDerailers, kSignals,
                     kBorders };

Direction require_direction(const KeyValues& kv, const Record& rec,
                            std::string_view key) {
  const std::string& text = kv.require(key);
  auto dir = parse_direction(text);
  if (!dir) {
    throw ParseError(rec.line, kv.column_of(key),
                     "expected up or down, got '" + text + "'");
  }
  return *dir;
}

struct Step {
  TrackId to;
  const PointSpec* point = nullptr;
  PointLeg leg = PointLeg::kNormal;
  bool facing = false;
};

// Geometric successors ignoring signals and borders.
std::vector<Step> raw_steps(const LayoutGraph& layout, std::string_view track,
                            Direction dir) {
  std::vector<Step> steps;
  for (const auto& e : layout.edges) {
    if (dir == Direction::kDown && e.first == track) {
      steps.push_back(Step{e.second});
    } else if (dir == Direction::kUp && e.second == track) {
      steps.push_back(Step{e.first});
    }
  }
  for (const auto& p : layout.points) {
    if (dir == p.facing && p.joint == track) {
      steps.push_back(Step{p.normal_leg, &p, PointLeg::kNormal, true});
      steps.push_back(Step{p.reverse_leg, &p, PointLeg::kReverse, true});
    } else if (dir != p.facing) {
      if (p.normal_leg == track) {
        steps.push_back(Step{p.joint, &p, PointLeg::kNormal, false});
      }
      if (p.reverse_leg == track) {
        steps.push_back(Step{p.joint, &p, PointLeg::kReverse, false});
      }
    }
  }
  return steps;
}

template <class T, class IdOf>
void check_unique(const std::vector<T>& items, IdOf id_of,
                  std::string_view kind) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    const std::string& id = id_of(item);
    if (id.empty()) {
      throw ValidationError("empty " + std::string(kind) + " id");
    }
    if (!seen.insert(id).second) {
      throw ValidationError("duplicate " + std::string(kind) + " id '" + id +
                            "'");
    }
  }
}

void require_track(const LayoutGraph& layout, const TrackId& t,
                   const std::string& context) {
  if (!layout.has_track(t)) {
    throw ValidationError("dangling reference '" + t + "' in " + context);
  }
}

}  // namespace

void check_layout(const LayoutGraph& layout) {
  check_unique(layout.tracks, [](const TrackId& t) -> const std::string& {
    return t;
  }, "track");
  check_unique(layout.points, [](const PointSpec& p) -> const std::string& {
    return p.id;
  }, "point");
  check_unique(layout.derailers,
               [](const DerailerSpec& d) -> const std::string& { return d.id; },
               "derailer");
  check_unique(layout.signals,
               [](const SignalSpec& s) -> const std::string& { return s.id; },
               "signal");
  check_unique(layout.borders,
               [](const Border& b) -> const std::string& { return b.id; },
               "border");
  if (layout.tracks.empty()) throw ValidationError("layout has no tracks");

  std::set<std::pair<std::string, std::string>> adjacency;
  auto add_adjacency = [&](const TrackId& a, const TrackId& b,
                           const std::string& context) {
    if (a == b) throw ValidationError(context + " joins a track to itself");
    auto key = std::minmax(a, b);
    if (!adjacency.insert({key.first, key.second}).second) {
      throw ValidationError("duplicate adjacency " + a + "/" + b + " in " +
                            context);
    }
  };
  for (const auto& e : layout.edges) {
    std::string ctx = "edge " + e.first + " " + e.second;
    require_track(layout, e.first, ctx);
    require_track(layout, e.second, ctx);
    add_adjacency(e.first, e.second, ctx);
  }
  for (const auto& p : layout.points) {
    std::string ctx = "point " + p.id;
    require_track(layout, p.joint, ctx);
    require_track(layout, p.normal_leg, ctx);
    require_track(layout, p.reverse_leg, ctx);
    if (p.joint == p.normal_leg || p.joint == p.reverse_leg ||
        p.normal_leg == p.reverse_leg) {
      throw ValidationError(ctx + ": joint and legs must be distinct tracks");
    }
    add_adjacency(p.joint, p.normal_leg, ctx);
    add_adjacency(p.joint, p.reverse_leg, ctx);
  }
  std::set<std::string> derailer_tracks;
  for (const auto& d : layout.derailers) {
    require_track(layout, d.on_track, "derailer " + d.id);
    if (!derailer_tracks.insert(d.on_track).second) {
      throw ValidationError("more than one derailer on track " + d.on_track);
    }
  }

  // A track may branch in a running direction only through one facing point.
  for (const auto& t : layout.tracks) {
    for (Direction dir : {Direction::kUp, Direction::kDown}) {
      auto steps = raw_steps(layout, t, dir);
      if (steps.size() <= 1) continue;
      bool single_facing = steps.size() == 2 && steps[0].facing &&
                           steps[1].facing && steps[0].point == steps[1].point;
      if (!single_facing) {
        throw ValidationError("track " + t + " has more than one successor "
                              "moving " + std::string(to_string(dir)) +
                              " outside a facing point");
      }
    }
  }

  std::set<std::tuple<std::string, std::string, Direction>> placements;
  for (const auto& s : layout.signals) {
    std::string ctx = "signal " + s.id;
    require_track(layout, s.behind, ctx);
    require_track(layout, s.ahead, ctx);
    bool adjacent = false;
    for (const auto& step : raw_steps(layout, s.behind, s.facing)) {
      if (step.to == s.ahead) adjacent = true;
    }
    if (!adjacent) {
      throw ValidationError(ctx + ": " + s.ahead + " is not reached from " +
                            s.behind + " moving " +
                            std::string(to_string(s.facing)));
    }
    if (!placements.insert({s.behind, s.ahead, s.facing}).second) {
      throw ValidationError(ctx + " shares its placement with another signal");
    }
    if (s.chained_to) {
      const SignalSpec* target = layout.find_signal(*s.chained_to);
      if (!target) {
        throw ValidationError("dangling reference '" + *s.chained_to +
                              "' in " + ctx);
      }
      bool ok = (s.kind == SignalKind::kWarner &&
                 target->kind == SignalKind::kHome) ||
                (s.kind == SignalKind::kHome &&
                 target->kind == SignalKind::kStarter);
      if (!ok) {
        throw ValidationError(ctx + ": a " + std::string(to_string(s.kind)) +
                              " cannot chain to a " +
                              std::string(to_string(target->kind)));
      }
    }
  }

  std::set<std::string> queued;
  for (const auto& b : layout.borders) {
    require_track(layout, b.attached_track, "border " + b.id);
    for (const auto& train : b.arrival_queue) {
      if (train.empty() || !queued.insert(train).second) {
        throw ValidationError("train '" + train +
                              "' queued more than once at borders");
      }
    }
  }

  // Connectivity over all adjacencies.
  std::map<std::string, std::vector<std::string>> neighbours;
  for (const auto& [a, b] : adjacency) {
    neighbours[a].push_back(b);
    neighbours[b].push_back(a);
  }
  std::set<std::string> reached{layout.tracks.front()};
  std::vector<std::string> stack{layout.tracks.front()};
  while (!stack.empty()) {
    std::string t = stack.back();
    stack.pop_back();
    for (const auto& n : neighbours[t]) {
      if (reached.insert(n).second) stack.push_back(n);
    }
  }
  if (reached.size() != layout.tracks.size()) {
    for (const auto& t : layout.tracks) {
      if (!reached.count(t)) {
        throw ValidationError("layout graph is disconnected: track " + t +
                              " is unreachable from " + layout.tracks.front());
      }
    }
  }
}

LayoutGraph parse_layout(std::string_view text) {
  LayoutGraph layout;
  Section section = Section::kNone;
  for (const Record& rec : split_records(text)) {
    const Token& head = rec.tokens.front();
    if (head.text.front() == '[') {
      if (rec.tokens.size() != 1) {
        throw ParseError(rec.line, rec.tokens[1].column,
                         "unexpected text after section header");
      }
      static const std::map<std::string, Section, std::less<>> kSections = {
          {"[tracks]", Section::kTracks},
          {"[edges]", Section::kEdges},
          {"[points]", Section::kPoints},
          {"[derailers]", Section::kDerailers},
          {"[signals]", Section::kSignals},
          {"[borders]", Section::kBorders}};
      auto it = kSections.find(head.text);
      if (it == kSections.end()) {
        throw ParseError(rec.line, head.column,
                         "unknown section " + head.text);
      }
      section = it->second;
      continue;
    }
    switch (section) {
      case Section::kNone:
        throw ParseError(rec.line, head.column,
                         "record outside of any section");
      case Section::kTracks:
        if (rec.tokens.size() != 1) {
          throw ParseError(rec.line, rec.tokens[1].column,
                           "expected one track id per line");
        }
        layout.tracks.push_back(head.text);
        break;
      case Section::kEdges:
        if (rec.tokens.size() != 2) {
          throw ParseError(rec.line, head.column,
                           "expected '<track> <track>'");
        }
        layout.edges.push_back(Edge{head.text, rec.tokens[1].text});
        break;
      case Section::kPoints: {
        KeyValues kv(rec, 1, {"joint", "normal", "reverse", "facing"});
        PointSpec p;
        p.id = head.text;
        p.joint = kv.require("joint");
        p.normal_leg = kv.require("normal");
        p.reverse_leg = kv.require("reverse");
        p.facing = kv.has("facing") ? require_direction(kv, rec, "facing")
                                    : Direction::kDown;
        layout.points.push_back(std::move(p));
        break;
      }
      case Section::kDerailers: {
        KeyValues kv(rec, 1, {"track"});
        layout.derailers.push_back(DerailerSpec{head.text, kv.require("track")});
        break;
      }
      case Section::kSignals: {
        KeyValues kv(rec, 1, {"kind", "behind", "ahead", "facing", "chain"});
        SignalSpec s;
        s.id = head.text;
        const std::string& kind = kv.require("kind");
        if (kind == "warner") {
          s.kind = SignalKind::kWarner;
        } else if (kind == "home") {
          s.kind = SignalKind::kHome;
        } else if (kind == "starter") {
          s.kind = SignalKind::kStarter;
        } else {
          throw ParseError(rec.line, kv.column_of("kind"),
                           "unknown signal kind '" + kind + "'");
        }
        s.behind = kv.require("behind");
        s.ahead = kv.require("ahead");
        s.facing = require_direction(kv, rec, "facing");
        auto chain = kv.get("chain");
        if (chain && *chain != "-" && !chain->empty()) s.chained_to = *chain;
        layout.signals.push_back(std::move(s));
        break;
      }
      case Section::kBorders: {
        KeyValues kv(rec, 1, {"track", "inbound", "queue"});
        Border b;
        b.id = head.text;
        b.attached_track = kv.require("track");
        b.inbound = require_direction(kv, rec, "inbound");
        b.arrival_queue = kv.list("queue");
        layout.borders.push_back(std::move(b));
        break;
      }
    }
  }
  check_layout(layout);
  return layout;
}

std::string serialize_layout(const LayoutGraph& layout) {
  std::ostringstream out;
  out << "[tracks]\n";
  for (const auto& t : layout.tracks) out << t << "\n";
  out << "\n[edges]\n";
  for (const auto& e : layout.edges) out << e.first << " " << e.second << "\n";
  out << "\n[points]\n";
  for (const auto& p : layout.points) {
    out << p.id << " joint=" << p.joint << " normal=" << p.normal_leg
        << " reverse=" << p.reverse_leg << " facing=" << to_string(p.facing)
        << "\n";
  }
  out << "\n[derailers]\n";
  for (const auto& d : layout.derailers) {
    out << d.id << " track=" << d.on_track << "\n";
  }
  out << "\n[signals]\n";
  for (const auto& s : layout.signals) {
    out << s.id << " kind=" << to_string(s.kind) << " behind=" << s.behind
        << " ahead=" << s.ahead << " facing=" << to_string(s.facing)
        << " chain=" << (s.chained_to ? *s.chained_to : "-") << "\n";
  }
  out << "\n[borders]\n";
  for (const auto& b : layout.borders) {
    out << b.id << " track=" << b.attached_track
        << " inbound=" << to_string(b.inbound);
    if (!b.arrival_queue.empty()) out << " queue=" << join(b.arrival_queue, ",");
    out << "\n";
  }
  return out.str();
}

LayoutGraph remove_signal(const LayoutGraph& layout, std::string_view id) {
  if (!layout.find_signal(id)) {
    throw ValidationError("unknown signal '" + std::string(id) + "'");
  }
  LayoutGraph result = layout;
  std::erase_if(result.signals,
                [&](const SignalSpec& s) { return s.id == id; });
  for (auto& s : result.signals) {
    if (s.chained_to && *s.chained_to == id) s.chained_to.reset();
  }
  return result;
}

std::vector<MoveTemplate> moves_from(const LayoutGraph& layout,
                                     std::string_view track, Direction dir) {
  std::vector<MoveTemplate> moves;
  for (const Step& step : raw_steps(layout, track, dir)) {
    MoveTemplate mv;
    mv.from = std::string(track);
    mv.to = step.to;
    bool behind = false;
    for (const auto& s : layout.signals) {
      if (s.behind == track && s.ahead == step.to && s.facing == dir) {
        mv.front_signal = s.id;
      } else if (s.behind == step.to && s.ahead == track &&
                 s.facing == opposite(dir)) {
        behind = true;
      }
    }
    if (step.point) {
      mv.kind = MoveKind::kPoint;
      mv.point = step.point->id;
      mv.leg = step.leg;
      mv.facing = step.facing;
    } else if (mv.front_signal) {
      mv.kind = MoveKind::kFrontSignal;
    } else if (behind) {
      mv.kind = MoveKind::kBehindSignal;
    }
    moves.push_back(std::move(mv));
  }
  std::stable_sort(moves.begin(), moves.end(),
                   [](const MoveTemplate& a, const MoveTemplate& b) {
                     return a.to < b.to;
                   });
  for (const auto& b : layout.borders) {
    if (b.attached_track == track && dir == opposite(b.inbound)) {
      MoveTemplate mv;
      mv.kind = MoveKind::kBorderExit;
      mv.from = std::string(track);
      mv.border = b.id;
      moves.push_back(std::move(mv));
    }
  }
  return moves;
}

}  // namespace ilock
