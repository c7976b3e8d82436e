#ifndef ILOCK_MODEL_HPP_
#define ILOCK_MODEL_HPP_

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "layout.hpp"
#include "table.hpp"

namespace ilock {

// Hard limits of the compact marking encoding.
inline constexpr std::size_t kMaxRoutes = 64;
inline constexpr std::size_t kMaxDemandsPerRoute = 64;

using RouteMask = std::uint64_t;
using DemandMask = std::uint64_t;

struct Modes {
  bool auto_route = true;
  bool priorities = true;
  bool flank = true;
  std::vector<SignalId> removed_signals;

  bool operator==(const Modes&) const = default;
};

struct InitialTrain {
  TrackId track;
  TrainId train;
  Direction dir = Direction::kDown;

  bool operator==(const InitialTrain&) const = default;
};

// ---------------------------------------------------------------------------
// Marking

struct DeviceState {
  Position position = Position::kNormal;
  RouteMask locked_by = 0;

  auto operator<=>(const DeviceState&) const = default;
};

enum class RouteStatus : std::uint8_t { kNormal, kSetting, kSet };
enum class ReleaseStage : std::uint8_t {
  kInactive,
  kWaitingPassage,
  kPartiallyCleared,
};

struct RouteState {
  RouteStatus status = RouteStatus::kNormal;
  DemandMask pending_normal = 0;
  DemandMask pending_reverse = 0;
  ReleaseStage stage = ReleaseStage::kInactive;
  // Entry signal put back to red after the train entered the route.
  bool replaced = false;

  auto operator<=>(const RouteState&) const = default;
};

enum class TrainPhase : std::uint8_t { kQueued, kActive, kDeparted };

struct TrainState {
  TrainPhase phase = TrainPhase::kQueued;
  std::int16_t track = -1;
  Direction dir = Direction::kDown;
  bool frozen = false;

  auto operator<=>(const TrainState&) const = default;
};

enum class AccidentKind : std::uint8_t {
  kHeadToTailHeadToHead,
  kHeadToSide,
  kDerailment,
};
std::string_view to_string(AccidentKind k);

struct AccidentRecord {
  AccidentKind kind = AccidentKind::kDerailment;
  std::int16_t train_a = -1;  // lower train index
  std::int16_t train_b = -1;  // -1 for derailments
  std::int16_t track = -1;

  auto operator<=>(const AccidentRecord&) const = default;
};

// One global state. Ordering and equality are structural.
struct Marking {
  std::vector<DeviceState> points;
  std::vector<DeviceState> derailers;
  std::vector<RouteState> routes;
  std::int16_t setting = -1;  // route in status Setting, if any
  std::vector<TrainState> trains;
  std::vector<std::uint16_t> queue_head;
  std::vector<std::uint16_t> departed;
  std::vector<AccidentRecord> accidents;  // sorted

  auto operator<=>(const Marking&) const = default;
};

// 128-bit digest of the canonical encoding.
struct Digest {
  std::uint64_t hi = 0;
  std::uint64_t lo = 0;

  auto operator<=>(const Digest&) const = default;
  std::string hex() const;
  static bool parse(std::string_view text, Digest* out);
};

struct DigestHash {
  std::size_t operator()(const Digest& d) const {
    return static_cast<std::size_t>(d.lo ^ (d.hi * 0x9e3779b97f4a7c15ULL));
  }
};

Digest digest_bytes(std::string_view bytes);

// ---------------------------------------------------------------------------
// Compiled model: layout and table resolved to dense indices.

struct CompiledMove {
  MoveKind kind = MoveKind::kPlain;
  int to = -1;  // -1 for border exits
  int front_signal = -1;
  int point = -1;
  PointLeg leg = PointLeg::kNormal;
  bool facing = false;
  int border = -1;
};

enum class DeviceKind : std::uint8_t { kPoint, kDerailer };

struct CompiledDemand {
  DeviceKind kind = DeviceKind::kPoint;
  int device = -1;
  Position position = Position::kNormal;
  bool flank = false;
};

struct CompiledRoute {
  RouteId id;
  int entry_signal = -1;  // -1 when removed from the layout
  int exit_signal = -1;
  std::vector<int> tracks;
  std::vector<CompiledDemand> demands;  // route demands, then flank demands
  DemandMask normal_demands = 0;
  DemandMask reverse_demands = 0;
  RouteMask conflicts = 0;  // symmetric closure
  int approach = -1;
  std::vector<int> release_clear;
  int release_occ_clear = -1;
  int release_final = -1;
  std::vector<int> flank_tracks;
  AspectRule aspect = AspectRule::kGreenIfExitClear;
};

struct CompiledSignal {
  SignalId id;
  SignalKind kind = SignalKind::kHome;
  int behind = -1;
  int ahead = -1;
  Direction facing = Direction::kDown;
  int chained_to = -1;
  std::vector<int> routes;  // routes with this entry signal
};

struct CompiledBorder {
  std::string id;
  int track = -1;
  Direction inbound = Direction::kDown;
  std::vector<int> queue;  // train indices
  // Tracks from the border up to the first stop signal; a train is admitted
  // only while all of them are clear and unreserved.
  std::vector<int> block_tracks;
};

class Model {
 public:
  // `layout` and `table` are taken as written; removed signals and flank
  // stripping requested in `modes` are applied here. Throws ValidationError.
  static Model build(const LayoutGraph& layout, const InterlockingTable& table,
                     const Modes& modes,
                     const std::vector<InitialTrain>& initial,
                     const std::vector<std::pair<std::string,
                                                 std::vector<TrainId>>>&
                         border_queues);

  const LayoutGraph& layout() const { return layout_; }
  const InterlockingTable& table() const { return table_; }
  const Modes& modes() const { return modes_; }

  std::size_t track_count() const { return tracks_.size(); }
  const TrackId& track_name(int t) const { return tracks_[t]; }
  const std::vector<TrackId>& track_names() const { return tracks_; }
  const std::vector<PointSpec>& points() const { return layout_.points; }
  const std::vector<DerailerSpec>& derailers() const {
    return layout_.derailers;
  }
  const std::vector<CompiledSignal>& signals() const { return signals_; }
  const std::vector<CompiledRoute>& routes() const { return routes_; }
  const std::vector<CompiledBorder>& borders() const { return borders_; }
  const std::vector<TrainId>& trains() const { return trains_; }
  const std::vector<int>& derailer_on_track() const {
    return derailer_on_track_;
  }
  const std::vector<int>& point_joint() const { return point_joint_; }
  const std::vector<std::array<int, 2>>& point_legs() const {
    return point_legs_;
  }
  const std::vector<CompiledMove>& moves(int track, Direction dir) const {
    return moves_[static_cast<std::size_t>(track) * 2 +
                  static_cast<std::size_t>(dir)];
  }

  int track_index(std::string_view id) const;
  int route_index(std::string_view id) const;
  int signal_index(std::string_view id) const;  // -1 if absent
  int point_index(std::string_view id) const;
  int derailer_index(std::string_view id) const;
  int train_index(std::string_view id) const;
  int border_index(std::string_view id) const;

  Marking initial_marking() const;

  // Canonical, order-independent byte encoding of a marking.
  std::string encode(const Marking& m) const;
  Marking decode(std::string_view bytes) const;
  Digest digest(const Marking& m) const { return digest_bytes(encode(m)); }

 private:
  LayoutGraph layout_;
  InterlockingTable table_;
  Modes modes_;
  std::vector<TrackId> tracks_;
  std::vector<CompiledSignal> signals_;
  std::vector<CompiledRoute> routes_;
  std::vector<CompiledBorder> borders_;
  std::vector<TrainId> trains_;
  std::vector<InitialTrain> initial_;
  std::vector<int> derailer_on_track_;
  std::vector<int> point_joint_;
  std::vector<std::array<int, 2>> point_legs_;
  std::vector<std::vector<CompiledMove>> moves_;
  std::size_t route_mask_bytes_ = 1;
  std::size_t demand_mask_bytes_ = 1;
};

// Occupancy view of a marking.
class Occupancy {
 public:
  Occupancy(const Model& model, const Marking& m);

  bool occupied(int track) const { return count_[track] > 0; }
  bool clear(int track) const { return count_[track] == 0; }
  // Lowest-indexed train on the track, or -1.
  int first_train(int track) const { return first_[track]; }
  int count(int track) const { return count_[track]; }

 private:
  std::vector<int> first_;
  std::vector<int> count_;
};

}  // namespace ilock

#endif  // ILOCK_MODEL_HPP_
