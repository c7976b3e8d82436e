#ifndef ILOCK_LAYOUT_HPP_
#define ILOCK_LAYOUT_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ilock {

using TrackId = std::string;
using PointId = std::string;
using DerailerId = std::string;
using SignalId = std::string;
using RouteId = std::string;
using TrainId = std::string;

enum class Direction : std::uint8_t { kUp = 0, kDown = 1 };

constexpr Direction opposite(Direction d) {
  return d == Direction::kUp ? Direction::kDown : Direction::kUp;
}
std::string_view to_string(Direction d);
std::optional<Direction> parse_direction(std::string_view text);

enum class SignalKind : std::uint8_t { kWarner, kHome, kStarter };
std::string_view to_string(SignalKind k);

// A signal stands on the boundary between two adjacent tracks. A train
// moving `facing` from `behind` to `ahead` passes its front.
struct SignalSpec {
  SignalId id;
  SignalKind kind = SignalKind::kHome;
  TrackId behind;
  TrackId ahead;
  Direction facing = Direction::kDown;
  std::optional<SignalId> chained_to;

  bool operator==(const SignalSpec&) const = default;
};

enum class PointLeg : std::uint8_t { kNormal = 0, kReverse = 1 };
std::string_view to_string(PointLeg leg);

// Moving `facing` from the joint is a facing move that splits onto a leg;
// moving the opposite way from a leg onto the joint is a trailing move.
struct PointSpec {
  PointId id;
  TrackId joint;
  TrackId normal_leg;
  TrackId reverse_leg;
  Direction facing = Direction::kDown;

  const TrackId& leg(PointLeg l) const {
    return l == PointLeg::kNormal ? normal_leg : reverse_leg;
  }
  bool operator==(const PointSpec&) const = default;
};

struct DerailerSpec {
  DerailerId id;
  TrackId on_track;

  bool operator==(const DerailerSpec&) const = default;
};

// Trains enter on `attached_track` moving `inbound`; a train on the attached
// track moving the other way leaves the layout here.
struct Border {
  std::string id;
  TrackId attached_track;
  Direction inbound = Direction::kDown;
  std::vector<TrainId> arrival_queue;
  std::size_t departed_count = 0;

  bool operator==(const Border&) const = default;
};

// Plain adjacency. A train moving Down goes from `first` to `second`; a train
// moving Up goes the other way.
struct Edge {
  TrackId first;
  TrackId second;

  bool operator==(const Edge&) const = default;
};

struct LayoutGraph {
  std::vector<TrackId> tracks;
  std::vector<Edge> edges;
  std::vector<PointSpec> points;
  std::vector<DerailerSpec> derailers;
  std::vector<SignalSpec> signals;
  std::vector<Border> borders;

  bool has_track(std::string_view id) const;
  const SignalSpec* find_signal(std::string_view id) const;
  const PointSpec* find_point(std::string_view id) const;
  const DerailerSpec* find_derailer(std::string_view id) const;
  const Border* find_border(std::string_view id) const;

  bool operator==(const LayoutGraph&) const = default;
};

enum class MoveKind : std::uint8_t {
  kPlain,
  kBehindSignal,
  kFrontSignal,
  kPoint,
  kBorderExit,
};
std::string_view to_string(MoveKind k);

// One geometric successor of a track in a running direction. Point moves may
// also cross a signal boundary; `front_signal` is then set as well, and the
// aspect guard applies exactly as for kFrontSignal.
struct MoveTemplate {
  MoveKind kind = MoveKind::kPlain;
  TrackId from;
  TrackId to;  // empty for kBorderExit
  std::optional<SignalId> front_signal;
  std::optional<PointId> point;
  PointLeg leg = PointLeg::kNormal;
  bool facing = false;
  std::string border;

  bool operator==(const MoveTemplate&) const = default;
};

// Parses the sectioned layout format documented in docs/file-formats.md.
// Throws ParseError for syntax problems and ValidationError for dangling
// references, duplicates and structural violations.
LayoutGraph parse_layout(std::string_view text);
std::string serialize_layout(const LayoutGraph& layout);

// Throws ValidationError if the layout breaks a structural invariant.
void check_layout(const LayoutGraph& layout);

// Fault injection: the layout without `id`. Warners and homes chained to the
// removed signal lose their chain. Throws ValidationError on unknown id.
LayoutGraph remove_signal(const LayoutGraph& layout, std::string_view id);

// Sorted by destination id; border exits come last.
std::vector<MoveTemplate> moves_from(const LayoutGraph& layout,
                                     std::string_view track, Direction dir);

}  // namespace ilock

#endif  // ILOCK_LAYOUT_HPP_
