#ifndef ILOCK_TABLE_HPP_
#define ILOCK_TABLE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "layout.hpp"

namespace ilock {

// Position demanded of a point or a derailer. For derailers kNormal is the
// derailing position and kReverse lets trains pass.
enum class Position : std::uint8_t { kNormal = 0, kReverse = 1 };

struct PointDemand {
  std::string device;  // point or derailer id
  Position position = Position::kNormal;

  bool operator==(const PointDemand&) const = default;
  auto operator<=>(const PointDemand&) const = default;
};

// Route release: every clear_group track clear and occ_then_clear occupied,
// then occ_then_clear clear and final_occ occupied.
struct ReleaseSpec {
  std::vector<TrackId> clear_group;
  TrackId occ_then_clear;
  TrackId final_occ;

  bool operator==(const ReleaseSpec&) const = default;
};

struct FlankSpec {
  std::vector<PointDemand> points;
  std::vector<TrackId> tracks_clear;
  std::vector<DerailerId> derailers_derail;

  bool empty() const {
    return points.empty() && tracks_clear.empty() && derailers_derail.empty();
  }
  bool operator==(const FlankSpec&) const = default;
};

enum class AspectRule : std::uint8_t { kGreenIfExitClear, kAlwaysGreen };

struct RouteSpec {
  RouteId id;
  SignalId entry_signal;
  std::optional<SignalId> exit_signal;
  std::vector<TrackId> tracks;  // entry to exit
  std::vector<PointDemand> point_demands;
  std::set<RouteId> conflicts;
  TrackId approach_track;
  ReleaseSpec release;
  AspectRule aspect = AspectRule::kGreenIfExitClear;

  bool operator==(const RouteSpec&) const = default;
};

struct InterlockingTable {
  std::vector<RouteSpec> routes;
  std::map<RouteId, FlankSpec> flank;

  const RouteSpec* find_route(std::string_view id) const;
  // Empty spec when the route has no flank record.
  const FlankSpec& flank_of(std::string_view id) const;

  bool operator==(const InterlockingTable&) const = default;
};

// Throws ParseError (syntax, duplicate route, self-conflict, unresolvable
// conflict or flank reference).
InterlockingTable parse_table(std::string_view text);
std::string serialize_table(const InterlockingTable& table);

enum class Severity : std::uint8_t { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string code;
  RouteId route;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string format_diagnostic(const Diagnostic& d);

// Layout-dependent checks. An empty result means the table is fully valid
// against the layout.
std::vector<Diagnostic> validate_table(const InterlockingTable& table,
                                       const LayoutGraph& layout);

bool has_errors(const std::vector<Diagnostic>& diagnostics);

InterlockingTable strip_flank(const InterlockingTable& table);

// Symmetric closure of the conflict relation; irreflexive. Throws
// ValidationError for unknown ids.
bool conflicts_closed(const InterlockingTable& table, std::string_view a,
                      std::string_view b);

}  // namespace ilock

#endif  // ILOCK_TABLE_HPP_
