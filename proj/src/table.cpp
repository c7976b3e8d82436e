#include "table.hpp"

#include <algorithm>
#include <sstream>

#include "text_format.hpp"

namespace ilock {

const RouteSpec* InterlockingTable::find_route(std::string_view id) const {
  for (const auto& r : routes) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

const FlankSpec& InterlockingTable::flank_of(std::string_view id) const {
  static const FlankSpec kEmpty;
  auto it = flank.find(std::string(id));
  return it == flank.end() ? kEmpty : it->second;
}

namespace {

std::vector<PointDemand> parse_demands(const KeyValues& kv, const Record& rec,
                                       std::string_view key) {
  std::vector<PointDemand> demands;
  for (const auto& item : kv.list(key)) {
    auto colon = item.rfind(':');
    if (colon == std::string::npos || colon == 0 ||
        colon + 2 != item.size() ||
        (item.back() != 'N' && item.back() != 'R')) {
      throw ParseError(rec.line, kv.column_of(key),
                       "expected <device>:N or <device>:R, got '" + item + "'");
    }
    demands.push_back(PointDemand{
        item.substr(0, colon),
        item.back() == 'N' ? Position::kNormal : Position::kReverse});
  }
  return demands;
}

std::string format_demands(const std::vector<PointDemand>& demands) {
  std::vector<std::string> items;
  for (const auto& d : demands) {
    items.push_back(d.device +
                    (d.position == Position::kNormal ? ":N" : ":R"));
  }
  return items.empty() ? "-" : join(items, ",");
}

std::string format_list(const std::vector<std::string>& items) {
  return items.empty() ? "-" : join(items, ",");
}

}  // namespace

InterlockingTable parse_table(std::string_view text) {
  InterlockingTable table;
  struct PendingFlank {
    std::size_t line;
    RouteId route;
  };
  std::vector<PendingFlank> flank_records;
  std::map<RouteId, std::size_t> route_lines;

  for (const Record& rec : split_records(text)) {
    const Token& head = rec.tokens.front();
    if (rec.tokens.size() < 2) {
      throw ParseError(rec.line, head.column, "expected 'route <id> ...' or "
                                              "'flank <route> ...'");
    }
    const std::string& id = rec.tokens[1].text;
    if (head.text == "route") {
      KeyValues kv(rec, 2,
                   {"entry", "exit", "tracks", "points", "conflicts",
                    "approach", "release_clear", "release_occ_clear",
                    "release_final", "aspect"});
      RouteSpec r;
      r.id = id;
      r.entry_signal = kv.require("entry");
      const std::string& exit = kv.require("exit");
      if (exit != "-" && !exit.empty()) r.exit_signal = exit;
      r.tracks = kv.list("tracks");
      if (r.tracks.empty()) {
        throw ParseError(rec.line, kv.column_of("tracks"),
                         "route " + id + " has no tracks");
      }
      r.point_demands = parse_demands(kv, rec, "points");
      for (const auto& c : kv.list("conflicts")) {
        if (c == id) {
          throw ParseError(rec.line, kv.column_of("conflicts"),
                           "self-conflict: route " + id +
                               " lists itself as a conflict");
        }
        r.conflicts.insert(c);
      }
      r.approach_track = kv.require("approach");
      r.release.clear_group = kv.list("release_clear");
      r.release.occ_then_clear = kv.require("release_occ_clear");
      r.release.final_occ = kv.require("release_final");
      const std::string aspect =
          kv.has("aspect") ? kv.require("aspect") : "green_if_exit";
      if (aspect == "green_if_exit") {
        r.aspect = AspectRule::kGreenIfExitClear;
      } else if (aspect == "always_green") {
        r.aspect = AspectRule::kAlwaysGreen;
      } else {
        throw ParseError(rec.line, kv.column_of("aspect"),
                         "unknown aspect rule '" + aspect + "'");
      }
      if (!route_lines.emplace(id, rec.line).second) {
        throw ParseError(rec.line, rec.tokens[1].column,
                         "duplicate route id '" + id + "'");
      }
      table.routes.push_back(std::move(r));
    } else if (head.text == "flank") {
      KeyValues kv(rec, 2, {"points", "tracks_clear", "derailers"});
      FlankSpec f;
      f.points = parse_demands(kv, rec, "points");
      f.tracks_clear = kv.list("tracks_clear");
      f.derailers_derail = kv.list("derailers");
      if (!table.flank.emplace(id, std::move(f)).second) {
        throw ParseError(rec.line, rec.tokens[1].column,
                         "duplicate flank record for route '" + id + "'");
      }
      flank_records.push_back({rec.line, id});
    } else {
      throw ParseError(rec.line, head.column,
                       "unknown record type '" + head.text + "'");
    }
  }

  for (const auto& r : table.routes) {
    for (const auto& c : r.conflicts) {
      if (!table.find_route(c)) {
        throw ParseError(route_lines[r.id], 0,
                         "route " + r.id + " conflicts with unknown route '" +
                             c + "'");
      }
    }
  }
  for (const auto& f : flank_records) {
    if (!table.find_route(f.route)) {
      throw ParseError(f.line, 0,
                       "flank record for unknown route '" + f.route + "'");
    }
  }
  return table;
}

std::string serialize_table(const InterlockingTable& table) {
  std::ostringstream out;
  for (const auto& r : table.routes) {
    out << "route " << r.id << " entry=" << r.entry_signal
        << " exit=" << (r.exit_signal ? *r.exit_signal : "-")
        << " tracks=" << format_list(r.tracks)
        << " points=" << format_demands(r.point_demands) << " conflicts="
        << format_list({r.conflicts.begin(), r.conflicts.end()})
        << " approach=" << r.approach_track
        << " release_clear=" << format_list(r.release.clear_group)
        << " release_occ_clear=" << r.release.occ_then_clear
        << " release_final=" << r.release.final_occ << " aspect="
        << (r.aspect == AspectRule::kGreenIfExitClear ? "green_if_exit"
                                                      : "always_green")
        << "\n";
  }
  for (const auto& [id, f] : table.flank) {
    out << "flank " << id << " points=" << format_demands(f.points)
        << " tracks_clear=" << format_list(f.tracks_clear)
        << " derailers=" << format_list(f.derailers_derail) << "\n";
  }
  return out.str();
}

std::string format_diagnostic(const Diagnostic& d) {
  std::string out = d.severity == Severity::kError ? "ERROR " : "WARNING ";
  out += d.code;
  if (!d.route.empty()) out += " route=" + d.route;
  out += ": " + d.message;
  return out;
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) {
                       return d.severity == Severity::kError;
                     });
}

std::vector<Diagnostic> validate_table(const InterlockingTable& table,
                                       const LayoutGraph& layout) {
  std::vector<Diagnostic> out;
  auto error = [&](const RouteId& route, std::string code, std::string msg) {
    out.push_back(Diagnostic{Severity::kError, std::move(code), route,
                             std::move(msg)});
  };
  auto check_track = [&](const RouteId& route, const TrackId& t,
                         std::string_view where) {
    if (layout.has_track(t)) return true;
    error(route, "dangling-reference",
          "unknown track '" + t + "' in " + std::string(where));
    return false;
  };
  auto check_device = [&](const RouteId& route, const std::string& device,
                          std::string_view where) {
    if (layout.find_point(device) || layout.find_derailer(device)) return true;
    error(route, "dangling-reference",
          "unknown point or derailer '" + device + "' in " +
              std::string(where));
    return false;
  };

  for (const auto& r : table.routes) {
    bool tracks_ok = true;
    for (const auto& t : r.tracks) tracks_ok &= check_track(r.id, t, "tracks");
    bool approach_ok = check_track(r.id, r.approach_track, "approach");
    for (const auto& t : r.release.clear_group) {
      check_track(r.id, t, "release_clear");
    }
    check_track(r.id, r.release.occ_then_clear, "release_occ_clear");
    check_track(r.id, r.release.final_occ, "release_final");
    for (const auto& d : r.point_demands) check_device(r.id, d.device, "points");

    const SignalSpec* entry = layout.find_signal(r.entry_signal);
    if (!entry) {
      error(r.id, "dangling-reference",
            "unknown entry signal '" + r.entry_signal + "'");
    } else if (entry->kind == SignalKind::kWarner) {
      error(r.id, "entry-not-stop-signal",
            "entry signal " + entry->id + " is a warner");
    }
    if (r.exit_signal) {
      const SignalSpec* exit = layout.find_signal(*r.exit_signal);
      if (!exit) {
        error(r.id, "dangling-reference",
              "unknown exit signal '" + *r.exit_signal + "'");
      } else if (tracks_ok && exit->behind != r.tracks.back()) {
        error(r.id, "exit-not-at-route-end",
              "exit signal " + exit->id + " does not stand at the end of " +
                  r.tracks.back());
      }
    }

    if (entry && tracks_ok) {
      if (entry->ahead != r.tracks.front()) {
        error(r.id, "non-contiguous",
              "first route track " + r.tracks.front() +
                  " is not in front of entry signal " + entry->id);
      }
      for (std::size_t i = 0; i + 1 < r.tracks.size(); ++i) {
        const auto moves = moves_from(layout, r.tracks[i], entry->facing);
        auto it = std::find_if(moves.begin(), moves.end(),
                               [&](const MoveTemplate& m) {
                                 return m.to == r.tracks[i + 1];
                               });
        if (it == moves.end()) {
          error(r.id, "non-contiguous",
                r.tracks[i + 1] + " does not follow " + r.tracks[i] +
                    " moving " + std::string(to_string(entry->facing)));
          continue;
        }
        if (it->point) {
          PointDemand want{*it->point, it->leg == PointLeg::kNormal
                                           ? Position::kNormal
                                           : Position::kReverse};
          if (std::find(r.point_demands.begin(), r.point_demands.end(),
                        want) == r.point_demands.end()) {
            error(r.id, "non-contiguous",
                  "crossing point " + *it->point + " from " + r.tracks[i] +
                      " to " + r.tracks[i + 1] + " needs demand " +
                      *it->point +
                      (want.position == Position::kNormal ? ":N" : ":R"));
          }
        }
      }
      for (const auto& d : layout.derailers) {
        if (std::find(r.tracks.begin(), r.tracks.end(), d.on_track) ==
            r.tracks.end()) {
          continue;
        }
        if (std::find(r.point_demands.begin(), r.point_demands.end(),
                      PointDemand{d.id, Position::kReverse}) ==
            r.point_demands.end()) {
          error(r.id, "derailer-not-passed",
                "route crosses derailer " + d.id + " on " + d.on_track +
                    " without demanding " + d.id + ":R");
        }
      }
    }
    if (entry && approach_ok && r.approach_track != entry->behind) {
      error(r.id, "approach-not-behind-entry",
            "approach track " + r.approach_track +
                " is not behind entry signal " + entry->id);
    }

    auto on_route = [&](const TrackId& t) {
      return std::find(r.tracks.begin(), r.tracks.end(), t) != r.tracks.end();
    };
    std::vector<TrackId> release_tracks = r.release.clear_group;
    release_tracks.push_back(r.release.occ_then_clear);
    release_tracks.push_back(r.release.final_occ);
    std::set<TrackId> seen;
    for (const auto& t : release_tracks) {
      if (!on_route(t)) {
        error(r.id, "release-outside-route",
              "release track " + t + " is not on the route");
      }
      if (!seen.insert(t).second) {
        error(r.id, "release-overlap",
              "release track " + t + " appears in more than one phase");
      }
    }

    const FlankSpec& f = table.flank_of(r.id);
    auto demanded_device = [&](const std::string& device) {
      return std::any_of(
          r.point_demands.begin(), r.point_demands.end(),
          [&](const PointDemand& d) { return d.device == device; });
    };
    for (const auto& d : f.points) {
      if (!layout.find_point(d.device)) {
        error(r.id, "dangling-reference",
              "unknown flank point '" + d.device + "'");
      } else if (demanded_device(d.device)) {
        error(r.id, "flank-on-own-route",
              "flank element on own route: point " + d.device);
      }
    }
    for (const auto& t : f.tracks_clear) {
      if (check_track(r.id, t, "flank tracks_clear") && on_route(t)) {
        error(r.id, "flank-on-own-route",
              "flank element on own route: track " + t);
      }
    }
    for (const auto& d : f.derailers_derail) {
      const DerailerSpec* spec = layout.find_derailer(d);
      if (!spec) {
        error(r.id, "dangling-reference",
              "unknown flank derailer '" + d + "'");
      } else if (demanded_device(d) || on_route(spec->on_track)) {
        error(r.id, "flank-on-own-route",
              "flank element on own route: derailer " + d);
      }
    }

    for (const auto& c : r.conflicts) {
      const RouteSpec* other = table.find_route(c);
      if (!other) {
        error(r.id, "dangling-reference", "unknown conflicting route " + c);
      } else if (!other->conflicts.count(r.id)) {
        out.push_back(Diagnostic{Severity::kWarning, "asymmetric-conflict",
                                 r.id,
                                 r.id + " lists " + c + " as a conflict but " +
                                     c + " does not list " + r.id});
      }
    }
  }
  return out;
}

InterlockingTable strip_flank(const InterlockingTable& table) {
  InterlockingTable result = table;
  result.flank.clear();
  return result;
}

bool conflicts_closed(const InterlockingTable& table, std::string_view a,
                      std::string_view b) {
  const RouteSpec* ra = table.find_route(a);
  const RouteSpec* rb = table.find_route(b);
  if (!ra || !rb) {
    throw ValidationError("unknown route '" +
                          std::string(ra ? b : a) + "'");
  }
  if (a == b) return false;
  return ra->conflicts.count(std::string(b)) > 0 ||
         rb->conflicts.count(std::string(a)) > 0;
}

}  // namespace ilock
