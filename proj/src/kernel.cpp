#include "kernel.hpp"

#include <bit>

namespace ilock {

std::string_view to_string(Aspect a) {
  switch (a) {
    case Aspect::kRed:
      return "red";
    case Aspect::kYellow:
      return "yellow";
    case Aspect::kGreen:
      return "green";
  }
  return "?";
}

std::string_view to_string(TransitionKind k) {
  switch (k) {
    case TransitionKind::kReleaseStep:
      return "ReleaseStep";
    case TransitionKind::kReplaceSignal:
      return "ReplaceSignal";
    case TransitionKind::kLockNormal:
      return "SetNormalLock";
    case TransitionKind::kLockReverse:
      return "SetReverseLock";
    case TransitionKind::kCompleteSetting:
      return "CompleteSetting";
    case TransitionKind::kSetRoute:
      return "SetRoute";
    case TransitionKind::kSignalmanCancel:
      return "SignalmanCancel";
    case TransitionKind::kMove:
      return "Move";
    case TransitionKind::kSpawn:
      return "Spawn";
    case TransitionKind::kCancelSetting:
      return "CancelRouteSetting";
  }
  return "?";
}

Priority priority_of(TransitionKind k, bool auto_route) {
  switch (k) {
    case TransitionKind::kReleaseStep:
    case TransitionKind::kReplaceSignal:
      return Priority::kInterlockInternal;
    case TransitionKind::kLockNormal:
      return Priority::kLockNormal;
    case TransitionKind::kLockReverse:
      return Priority::kLockReverse;
    case TransitionKind::kCompleteSetting:
      return Priority::kComplete;
    case TransitionKind::kSetRoute:
    case TransitionKind::kSignalmanCancel:
      return auto_route ? Priority::kRouteRequest : Priority::kTrainMove;
    case TransitionKind::kMove:
    case TransitionKind::kSpawn:
      return Priority::kTrainMove;
    case TransitionKind::kCancelSetting:
      return Priority::kCancel;
  }
  return Priority::kCancel;
}

namespace {

constexpr RouteMask bit(int route) { return RouteMask{1} << route; }

DeviceState& device(Marking& m, const CompiledDemand& d) {
  return d.kind == DeviceKind::kPoint ? m.points[d.device]
                                      : m.derailers[d.device];
}

const DeviceState& device(const Marking& m, const CompiledDemand& d) {
  return d.kind == DeviceKind::kPoint ? m.points[d.device]
                                      : m.derailers[d.device];
}

std::string device_name(const Model& model, const CompiledDemand& d) {
  return d.kind == DeviceKind::kPoint ? model.points()[d.device].id
                                      : model.derailers()[d.device].id;
}

void unlock_all(Marking& m, int route) {
  for (auto* devices : {&m.points, &m.derailers}) {
    for (auto& d : *devices) d.locked_by &= ~bit(route);
  }
}

// The route currently holding `signal` off red, or -1.
int cleared_route(const Model& model, const Marking& m, int signal) {
  for (int r : model.signals()[signal].routes) {
    const RouteState& rs = m.routes[r];
    if (rs.status == RouteStatus::kSet && !rs.replaced) return r;
  }
  return -1;
}

bool all_clear(const Occupancy& occ, const std::vector<int>& tracks) {
  for (int t : tracks) {
    if (occ.occupied(t)) return false;
  }
  return true;
}

bool conflicts_normal(const Model& model, const Marking& m, int route) {
  RouteMask c = model.routes()[route].conflicts;
  while (c) {
    int other = std::countr_zero(c);
    c &= c - 1;
    if (m.routes[other].status != RouteStatus::kNormal) return false;
  }
  return true;
}

}  // namespace

std::string describe(const Model& model, const TransitionInstance& t) {
  std::string out(to_string(t.kind));
  switch (t.kind) {
    case TransitionKind::kReleaseStep:
    case TransitionKind::kCompleteSetting:
    case TransitionKind::kSetRoute:
    case TransitionKind::kSignalmanCancel:
    case TransitionKind::kCancelSetting:
      out += " route=" + model.routes()[t.subject].id;
      break;
    case TransitionKind::kReplaceSignal:
      out += " signal=" + model.signals()[t.subject].id;
      break;
    case TransitionKind::kLockNormal:
    case TransitionKind::kLockReverse: {
      const CompiledRoute& r = model.routes()[t.subject];
      const CompiledDemand& d = r.demands[t.detail];
      out += " route=" + r.id + " device=" + device_name(model, d) +
             (d.position == Position::kNormal ? ":N" : ":R");
      if (d.flank) out += " (flank)";
      break;
    }
    case TransitionKind::kMove: {
      // Detail indexes the template list of the train's current track, which
      // is not known here; name the train only.
      out += " train=" + model.trains()[t.subject] +
             " template=" + std::to_string(t.detail);
      break;
    }
    case TransitionKind::kSpawn:
      out += " border=" + model.borders()[t.subject].id;
      break;
  }
  return out;
}

Aspect aspect_of(const Model& model, const Marking& m, int signal) {
  const CompiledSignal& s = model.signals()[signal];
  switch (s.kind) {
    case SignalKind::kStarter:
      return cleared_route(model, m, signal) >= 0 ? Aspect::kGreen
                                                  : Aspect::kRed;
    case SignalKind::kHome: {
      int r = cleared_route(model, m, signal);
      if (r < 0) return Aspect::kRed;
      const CompiledRoute& route = model.routes()[r];
      if (route.aspect == AspectRule::kAlwaysGreen) return Aspect::kGreen;
      int next = route.exit_signal >= 0 ? route.exit_signal : s.chained_to;
      if (next >= 0 && aspect_of(model, m, next) == Aspect::kGreen) {
        return Aspect::kGreen;
      }
      return Aspect::kYellow;
    }
    case SignalKind::kWarner:
      if (s.chained_to >= 0 &&
          aspect_of(model, m, s.chained_to) == Aspect::kGreen) {
        return Aspect::kGreen;
      }
      return Aspect::kYellow;
  }
  return Aspect::kRed;
}

bool approach_locked(const Model& model, const Marking& m,
                     const Occupancy& occ, int route) {
  const CompiledRoute& r = model.routes()[route];
  if (m.routes[route].status != RouteStatus::kSet) return false;
  if (r.entry_signal < 0 ||
      aspect_of(model, m, r.entry_signal) == Aspect::kRed) {
    return false;
  }
  return occ.occupied(r.approach);
}

bool guard_set_route(const Model& model, const Marking& m,
                     const Occupancy& occ, int route) {
  const CompiledRoute& r = model.routes()[route];
  if (m.routes[route].status != RouteStatus::kNormal) return false;
  if (m.setting >= 0) return false;
  if (r.entry_signal < 0) return false;
  if (!conflicts_normal(model, m, route)) return false;
  if (!all_clear(occ, r.tracks) || !all_clear(occ, r.flank_tracks)) {
    return false;
  }
  if (model.modes().auto_route) {
    int train = occ.first_train(r.approach);
    if (train < 0) return false;
    const Direction facing = model.signals()[r.entry_signal].facing;
    bool waiting = false;
    for (std::size_t i = 0; i < m.trains.size(); ++i) {
      const TrainState& t = m.trains[i];
      if (t.phase == TrainPhase::kActive && t.track == r.approach &&
          !t.frozen && t.dir == facing) {
        waiting = true;
      }
    }
    if (!waiting) return false;
  }
  return true;
}

Marking fire_set_route(const Model& model, const Marking& m, int route) {
  const CompiledRoute& r = model.routes()[route];
  Marking next = m;
  RouteState& rs = next.routes[route];
  rs.status = RouteStatus::kSetting;
  rs.pending_normal = r.normal_demands;
  rs.pending_reverse = r.reverse_demands;
  next.setting = static_cast<std::int16_t>(route);
  return next;
}

bool lock_step_enabled(const Model& model, const Marking& m, int route,
                       int demand) {
  const RouteState& rs = m.routes[route];
  if (rs.status != RouteStatus::kSetting) return false;
  DemandMask b = DemandMask{1} << demand;
  if (!((rs.pending_normal | rs.pending_reverse) & b)) return false;
  const CompiledDemand& d = model.routes()[route].demands[demand];
  const DeviceState& dev = device(m, d);
  return dev.locked_by == 0 || dev.position == d.position;
}

namespace {

Marking fire_lock_step(const Model& model, const Marking& m, int route,
                       int demand) {
  const CompiledDemand& d = model.routes()[route].demands[demand];
  Marking next = m;
  DeviceState& dev = device(next, d);
  dev.position = d.position;
  dev.locked_by |= bit(route);
  RouteState& rs = next.routes[route];
  DemandMask b = DemandMask{1} << demand;
  rs.pending_normal &= ~b;
  rs.pending_reverse &= ~b;
  return next;
}

}  // namespace

Marking fire_lock_step_normal(const Model& model, const Marking& m, int route,
                              int demand) {
  return fire_lock_step(model, m, route, demand);
}

Marking fire_lock_step_reverse(const Model& model, const Marking& m,
                               int route, int demand) {
  return fire_lock_step(model, m, route, demand);
}

bool complete_setting_enabled(const Model& model, const Marking& m,
                              const Occupancy& occ, int route) {
  const RouteState& rs = m.routes[route];
  if (rs.status != RouteStatus::kSetting || m.setting != route) return false;
  if (rs.pending_normal || rs.pending_reverse) return false;
  const CompiledRoute& r = model.routes()[route];
  if (!conflicts_normal(model, m, route)) return false;
  if (!all_clear(occ, r.tracks) || !all_clear(occ, r.flank_tracks)) {
    return false;
  }
  for (const auto& d : r.demands) {
    const DeviceState& dev = device(m, d);
    if (dev.position != d.position || !(dev.locked_by & bit(route))) {
      return false;
    }
  }
  return true;
}

Marking fire_complete_setting(const Model&, const Marking& m, int route) {
  Marking next = m;
  RouteState& rs = next.routes[route];
  rs.status = RouteStatus::kSet;
  rs.stage = ReleaseStage::kWaitingPassage;
  rs.replaced = false;
  next.setting = -1;
  return next;
}

bool cancel_setting_enabled(const Marking& m) { return m.setting >= 0; }

Marking fire_cancel_setting(const Model&, const Marking& m) {
  Marking next = m;
  int route = next.setting;
  RouteState& rs = next.routes[route];
  rs = RouteState{};
  unlock_all(next, route);
  next.setting = -1;
  return next;
}

bool signalman_cancel_enabled(const Model& model, const Marking& m,
                              const Occupancy& occ, int route) {
  if (model.modes().auto_route) return false;
  const RouteState& rs = m.routes[route];
  return rs.status == RouteStatus::kSet &&
         rs.stage == ReleaseStage::kWaitingPassage && !rs.replaced &&
         !approach_locked(model, m, occ, route);
}

Marking fire_signalman_cancel(const Model&, const Marking& m, int route) {
  Marking next = m;
  next.routes[route] = RouteState{};
  unlock_all(next, route);
  return next;
}

bool release_step_enabled(const Model& model, const Marking& m,
                          const Occupancy& occ, int route) {
  const RouteState& rs = m.routes[route];
  if (rs.status != RouteStatus::kSet) return false;
  const CompiledRoute& r = model.routes()[route];
  switch (rs.stage) {
    case ReleaseStage::kWaitingPassage:
      return all_clear(occ, r.release_clear) &&
             occ.occupied(r.release_occ_clear);
    case ReleaseStage::kPartiallyCleared:
      return occ.clear(r.release_occ_clear) && occ.occupied(r.release_final);
    case ReleaseStage::kInactive:
      return false;
  }
  return false;
}

Marking fire_release_step(const Model&, const Marking& m, const Occupancy&,
                          int route) {
  Marking next = m;
  RouteState& rs = next.routes[route];
  if (rs.stage == ReleaseStage::kWaitingPassage) {
    rs.stage = ReleaseStage::kPartiallyCleared;
  } else {
    rs = RouteState{};
    unlock_all(next, route);
  }
  return next;
}

bool signal_replacement_enabled(const Model& model, const Marking& m,
                                const Occupancy& occ, int signal) {
  for (int r : model.signals()[signal].routes) {
    const RouteState& rs = m.routes[r];
    if (rs.status == RouteStatus::kSet && !rs.replaced &&
        occ.occupied(model.routes()[r].tracks.front())) {
      return true;
    }
  }
  return false;
}

Marking fire_signal_replacement(const Model& model, const Marking& m,
                                const Occupancy& occ, int signal) {
  Marking next = m;
  for (int r : model.signals()[signal].routes) {
    RouteState& rs = next.routes[r];
    if (rs.status == RouteStatus::kSet && !rs.replaced &&
        occ.occupied(model.routes()[r].tracks.front())) {
      rs.replaced = true;
    }
  }
  return next;
}

void interlocking_enabled(const Model& model, const Marking& m,
                          const Occupancy& occ, Priority p,
                          std::vector<TransitionInstance>* out) {
  const int routes = static_cast<int>(model.routes().size());
  auto push = [&](TransitionKind k, int subject, int detail = 0) {
    out->push_back(TransitionInstance{k, static_cast<std::uint16_t>(subject),
                                      static_cast<std::uint16_t>(detail)});
  };
  switch (p) {
    case Priority::kInterlockInternal:
      for (int r = 0; r < routes; ++r) {
        if (release_step_enabled(model, m, occ, r)) {
          push(TransitionKind::kReleaseStep, r);
        }
      }
      for (int s = 0; s < static_cast<int>(model.signals().size()); ++s) {
        if (signal_replacement_enabled(model, m, occ, s)) {
          push(TransitionKind::kReplaceSignal, s);
        }
      }
      break;
    case Priority::kLockNormal:
    case Priority::kLockReverse: {
      if (m.setting < 0) break;
      const RouteState& rs = m.routes[m.setting];
      DemandMask pending = p == Priority::kLockNormal ? rs.pending_normal
                                                      : rs.pending_reverse;
      TransitionKind kind = p == Priority::kLockNormal
                                ? TransitionKind::kLockNormal
                                : TransitionKind::kLockReverse;
      while (pending) {
        int d = std::countr_zero(pending);
        pending &= pending - 1;
        if (lock_step_enabled(model, m, m.setting, d)) push(kind, m.setting, d);
      }
      break;
    }
    case Priority::kComplete:
      if (m.setting >= 0 &&
          complete_setting_enabled(model, m, occ, m.setting)) {
        push(TransitionKind::kCompleteSetting, m.setting);
      }
      break;
    case Priority::kRouteRequest:
    case Priority::kTrainMove:
      // Manual commands compete with train moves; see priority_of.
      if ((p == Priority::kRouteRequest) != model.modes().auto_route) break;
      for (int r = 0; r < routes; ++r) {
        if (guard_set_route(model, m, occ, r)) {
          push(TransitionKind::kSetRoute, r);
        }
      }
      for (int r = 0; r < routes; ++r) {
        if (signalman_cancel_enabled(model, m, occ, r)) {
          push(TransitionKind::kSignalmanCancel, r);
        }
      }
      break;
    case Priority::kCancel:
      if (cancel_setting_enabled(m)) {
        push(TransitionKind::kCancelSetting, m.setting);
      }
      break;
  }
}

}  // namespace ilock
