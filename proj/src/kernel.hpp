#ifndef ILOCK_KERNEL_HPP_
#define ILOCK_KERNEL_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "model.hpp"

namespace ilock {

enum class Aspect : std::uint8_t { kRed, kYellow, kGreen };
std::string_view to_string(Aspect a);

// Priority classes, highest first. Only the order is significant.
enum class Priority : std::uint8_t {
  kCancel = 0,
  kTrainMove = 1,
  kRouteRequest = 2,
  kComplete = 3,
  kLockReverse = 4,
  kLockNormal = 5,
  kInterlockInternal = 6,
};
inline constexpr int kPriorityLevels = 7;

enum class TransitionKind : std::uint8_t {
  kReleaseStep,       // subject: route
  kReplaceSignal,     // subject: signal
  kLockNormal,        // subject: route, detail: demand
  kLockReverse,       // subject: route, detail: demand
  kCompleteSetting,   // subject: route
  kSetRoute,          // subject: route
  kSignalmanCancel,   // subject: route
  kMove,              // subject: train, detail: move template
  kSpawn,             // subject: border
  kCancelSetting,     // subject: route being set
};
std::string_view to_string(TransitionKind k);

struct TransitionInstance {
  TransitionKind kind = TransitionKind::kSetRoute;
  std::uint16_t subject = 0;
  std::uint16_t detail = 0;

  auto operator<=>(const TransitionInstance&) const = default;
};

// A signalman working by hand is an actor like the trains: in manual mode
// route requests and cancels share the train-move class, otherwise they would
// preempt every train move whenever some route is free.
Priority priority_of(TransitionKind k, bool auto_route = true);
std::string describe(const Model& model, const TransitionInstance& t);

// All functions below are pure: markings in, markings out. Guards assume
// `occ` was built from the same marking.

Aspect aspect_of(const Model& model, const Marking& m, int signal);

bool approach_locked(const Model& model, const Marking& m,
                     const Occupancy& occ, int route);

bool guard_set_route(const Model& model, const Marking& m,
                     const Occupancy& occ, int route);
Marking fire_set_route(const Model& model, const Marking& m, int route);

bool lock_step_enabled(const Model& model, const Marking& m, int route,
                       int demand);
Marking fire_lock_step_normal(const Model& model, const Marking& m, int route,
                              int demand);
Marking fire_lock_step_reverse(const Model& model, const Marking& m,
                               int route, int demand);

bool complete_setting_enabled(const Model& model, const Marking& m,
                              const Occupancy& occ, int route);
Marking fire_complete_setting(const Model& model, const Marking& m,
                              int route);

// Enabledness ignoring priorities; the explorer applies the global filter.
bool cancel_setting_enabled(const Marking& m);
Marking fire_cancel_setting(const Model& model, const Marking& m);

bool signalman_cancel_enabled(const Model& model, const Marking& m,
                              const Occupancy& occ, int route);
Marking fire_signalman_cancel(const Model& model, const Marking& m,
                              int route);

bool release_step_enabled(const Model& model, const Marking& m,
                          const Occupancy& occ, int route);
Marking fire_release_step(const Model& model, const Marking& m,
                          const Occupancy& occ, int route);

bool signal_replacement_enabled(const Model& model, const Marking& m,
                                const Occupancy& occ, int signal);
Marking fire_signal_replacement(const Model& model, const Marking& m,
                                const Occupancy& occ, int signal);

// Appends every enabled interlocking transition of class `p`, with classes
// assigned by priority_of under the model's modes.
void interlocking_enabled(const Model& model, const Marking& m,
                          const Occupancy& occ, Priority p,
                          std::vector<TransitionInstance>* out);

}  // namespace ilock

#endif  // ILOCK_KERNEL_HPP_
