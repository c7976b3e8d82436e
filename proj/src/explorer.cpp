#include "explorer.hpp"

#include <chrono>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "motion.hpp"
#include "text_format.hpp"

namespace ilock {

class TraceIndex {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  // Returns the node index and whether it was newly inserted.
  std::pair<std::uint32_t, bool> insert(const Digest& d, std::uint32_t parent,
                                        const TransitionInstance& via) {
    auto [it, fresh] =
        ids_.try_emplace(d, static_cast<std::uint32_t>(parent_.size()));
    if (fresh) {
      parent_.push_back(parent);
      via_.push_back(via);
    }
    return {it->second, fresh};
  }

  std::vector<TransitionInstance> path(std::uint32_t node) const {
    std::vector<TransitionInstance> out;
    while (parent_[node] != kNone) {
      out.push_back(via_[node]);
      node = parent_[node];
    }
    return {out.rbegin(), out.rend()};
  }

  std::uint32_t find(const Digest& d) const {
    auto it = ids_.find(d);
    return it == ids_.end() ? kNone : it->second;
  }

  void reserve(std::size_t n) {
    ids_.reserve(n);
    parent_.reserve(n);
    via_.reserve(n);
  }

 private:
  std::unordered_map<Digest, std::uint32_t, DigestHash> ids_;
  std::vector<std::uint32_t> parent_;
  std::vector<TransitionInstance> via_;
};

namespace {

void collect(const Model& model, const Marking& m, const Occupancy& occ,
             Priority p, std::vector<TransitionInstance>* out) {
  interlocking_enabled(model, m, occ, p, out);
  if (p == Priority::kTrainMove) enabled_moves(model, m, occ, out);
}

}  // namespace

std::vector<TransitionInstance> enabled(const Model& model, const Marking& m) {
  Occupancy occ(model, m);
  std::vector<TransitionInstance> out;
  for (int p = kPriorityLevels - 1; p >= 0; --p) {
    collect(model, m, occ, static_cast<Priority>(p), &out);
    if (model.modes().priorities && !out.empty()) break;
  }
  return out;
}

Marking apply(const Model& model, const Marking& m,
              const TransitionInstance& t) {
  Occupancy occ(model, m);
  switch (t.kind) {
    case TransitionKind::kReleaseStep:
      return fire_release_step(model, m, occ, t.subject);
    case TransitionKind::kReplaceSignal:
      return fire_signal_replacement(model, m, occ, t.subject);
    case TransitionKind::kLockNormal:
      return fire_lock_step_normal(model, m, t.subject, t.detail);
    case TransitionKind::kLockReverse:
      return fire_lock_step_reverse(model, m, t.subject, t.detail);
    case TransitionKind::kCompleteSetting:
      return fire_complete_setting(model, m, t.subject);
    case TransitionKind::kSetRoute:
      return fire_set_route(model, m, t.subject);
    case TransitionKind::kSignalmanCancel:
      return fire_signalman_cancel(model, m, t.subject);
    case TransitionKind::kMove:
      return fire_move(model, m, occ, t.subject, t.detail);
    case TransitionKind::kSpawn:
      return fire_spawn(model, m, t.subject);
    case TransitionKind::kCancelSetting:
      return fire_cancel_setting(model, m);
  }
  throw std::logic_error("unknown transition kind");
}

std::vector<Successor> successors(const Model& model, const Marking& m) {
  std::vector<Successor> out;
  for (const auto& t : enabled(model, m)) {
    out.emplace_back(t, apply(model, m, t));
  }
  return out;
}

std::string describe_fired(const Model& model, const Marking& before,
                           const TransitionInstance& t) {
  if (t.kind == TransitionKind::kMove || t.kind == TransitionKind::kSpawn) {
    return describe_motion(model, before, t);
  }
  return describe(model, t);
}

std::string_view to_string(TerminalClass c) {
  switch (c) {
    case TerminalClass::kEmptyOfTrains:
      return "empty";
    case TerminalClass::kSafeDeadlock:
      return "deadlock";
    case TerminalClass::kAccident:
      return "accident";
  }
  return "?";
}

TerminalClass classify(const Marking& m) {
  if (!m.accidents.empty()) return TerminalClass::kAccident;
  for (const auto& t : m.trains) {
    if (t.phase != TrainPhase::kDeparted) return TerminalClass::kSafeDeadlock;
  }
  return TerminalClass::kEmptyOfTrains;
}

TerminalSummary classify_terminals(const StateSpaceReport& report) {
  TerminalSummary s;
  for (const auto& t : report.terminals) {
    switch (t.cls) {
      case TerminalClass::kEmptyOfTrains:
        ++s.empty_of_trains;
        break;
      case TerminalClass::kSafeDeadlock:
        s.safe_deadlock.push_back(&t);
        break;
      case TerminalClass::kAccident:
        s.accident_terminal.push_back(&t);
        break;
    }
  }
  return s;
}

StateSpaceReport explore(const Model& model, std::size_t cap) {
  auto start = std::chrono::steady_clock::now();
  StateSpaceReport report;
  report.modes = model.modes();
  auto index = std::make_shared<TraceIndex>();
  index->reserve(std::min<std::size_t>(cap, 1 << 16));

  std::set<AccidentRecord> seen_accidents;
  std::vector<std::pair<AccidentRecord, std::uint32_t>> first_accidents;
  auto note_accidents = [&](const Marking& m, std::uint32_t node) {
    if (m.accidents.empty()) return;
    ++report.accident_markings;
    bool derailed = false;
    for (const auto& a : m.accidents) {
      if (a.kind == AccidentKind::kDerailment) derailed = true;
      if (seen_accidents.insert(a).second) first_accidents.emplace_back(a, node);
    }
    if (derailed) ++report.derailment_markings;
  };

  Marking init = model.initial_marking();
  std::string init_bytes = model.encode(init);
  report.initial = digest_bytes(init_bytes);
  index->insert(report.initial, TraceIndex::kNone, TransitionInstance{});
  report.nodes = 1;
  note_accidents(init, 0);

  std::deque<std::pair<std::string, std::uint32_t>> frontier;
  frontier.emplace_back(std::move(init_bytes), 0);
  while (!frontier.empty() && !report.incomplete) {
    auto [bytes, node] = std::move(frontier.front());
    frontier.pop_front();
    Marking m = model.decode(bytes);
    auto next = successors(model, m);
    if (next.empty()) {
      report.terminals.push_back(
          TerminalInfo{digest_bytes(bytes), m, classify(m)});
      continue;
    }
    for (auto& [t, succ] : next) {
      std::string enc = model.encode(succ);
      Digest d = digest_bytes(enc);
      if (index->find(d) == TraceIndex::kNone && report.nodes >= cap) {
        report.incomplete = true;
        break;
      }
      ++report.arcs;
      auto [id, fresh] = index->insert(d, node, t);
      if (!fresh) continue;
      ++report.nodes;
      note_accidents(succ, id);
      frontier.emplace_back(std::move(enc), id);
    }
  }

  for (const auto& [rec, node] : first_accidents) {
    report.accidents.push_back(AccidentInfo{rec, Digest{}, index->path(node)});
  }
  report.index = index;
  // Accident digests are recovered by replay, which also checks the trace.
  for (auto& a : report.accidents) {
    a.digest = model.digest(replay(model, a.trace));
  }
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

std::vector<TransitionInstance> trace_to(const StateSpaceReport& report,
                                         const Digest& target) {
  if (!report.index) throw ValidationError("report carries no trace index");
  std::uint32_t node = report.index->find(target);
  if (node == TraceIndex::kNone) {
    throw ValidationError("unknown marking digest " + target.hex());
  }
  return report.index->path(node);
}

Marking replay(const Model& model,
               const std::vector<TransitionInstance>& trace) {
  Marking m = model.initial_marking();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    auto allowed = enabled(model, m);
    if (std::find(allowed.begin(), allowed.end(), trace[i]) == allowed.end()) {
      throw ValidationError("trace step " + std::to_string(i + 1) +
                            " is not enabled");
    }
    m = apply(model, m, trace[i]);
  }
  return m;
}

std::string_view to_string(FlankVerdictKind v) {
  switch (v) {
    case FlankVerdictKind::kPass:
      return "PASS";
    case FlankVerdictKind::kFail:
      return "FAIL";
    case FlankVerdictKind::kVacuous:
      return "VACUOUS";
  }
  return "?";
}

FlankVerdict flank_check(const Model& with_flank, const Model& without_flank,
                         std::size_t cap) {
  if (with_flank.modes().removed_signals.empty() ||
      without_flank.modes().removed_signals.empty()) {
    throw std::invalid_argument("flank check needs at least one removed signal");
  }
  FlankVerdict v;
  v.with_flank = explore(with_flank, cap);
  v.without_flank = explore(without_flank, cap);
  if (v.with_flank.accident_markings > 0 || v.with_flank.incomplete ||
      v.without_flank.incomplete) {
    v.verdict = FlankVerdictKind::kFail;
  } else if (v.without_flank.accident_markings == 0) {
    v.verdict = FlankVerdictKind::kVacuous;
  } else {
    v.verdict = FlankVerdictKind::kPass;
  }
  return v;
}

namespace {

TransitionInstance make(TransitionKind k, int subject, int detail = 0) {
  return TransitionInstance{k, static_cast<std::uint16_t>(subject),
                            static_cast<std::uint16_t>(detail)};
}

// Every candidate instance of every kind, filtered only by its own guard.
std::vector<TransitionInstance> oracle_candidates(const Model& model,
                                                  const Marking& m) {
  Occupancy occ(model, m);
  std::vector<TransitionInstance> out;
  const int routes = static_cast<int>(model.routes().size());
  for (int r = 0; r < routes; ++r) {
    if (release_step_enabled(model, m, occ, r)) {
      out.push_back(make(TransitionKind::kReleaseStep, r));
    }
    if (complete_setting_enabled(model, m, occ, r)) {
      out.push_back(make(TransitionKind::kCompleteSetting, r));
    }
    if (guard_set_route(model, m, occ, r)) {
      out.push_back(make(TransitionKind::kSetRoute, r));
    }
    if (signalman_cancel_enabled(model, m, occ, r)) {
      out.push_back(make(TransitionKind::kSignalmanCancel, r));
    }
    const auto& demands = model.routes()[r].demands;
    for (int d = 0; d < static_cast<int>(demands.size()); ++d) {
      if (!lock_step_enabled(model, m, r, d)) continue;
      out.push_back(make(demands[d].position == Position::kNormal
                             ? TransitionKind::kLockNormal
                             : TransitionKind::kLockReverse,
                         r, d));
    }
  }
  for (int s = 0; s < static_cast<int>(model.signals().size()); ++s) {
    if (signal_replacement_enabled(model, m, occ, s)) {
      out.push_back(make(TransitionKind::kReplaceSignal, s));
    }
  }
  for (int t = 0; t < static_cast<int>(m.trains.size()); ++t) {
    if (m.trains[t].phase != TrainPhase::kActive) continue;
    const auto& moves = model.moves(m.trains[t].track, m.trains[t].dir);
    for (int k = 0; k < static_cast<int>(moves.size()); ++k) {
      if (move_enabled(model, m, t, k)) {
        out.push_back(make(TransitionKind::kMove, t, k));
      }
    }
  }
  for (int b = 0; b < static_cast<int>(model.borders().size()); ++b) {
    if (spawn_enabled(model, m, occ, b)) {
      out.push_back(make(TransitionKind::kSpawn, b));
    }
  }
  if (cancel_setting_enabled(m)) {
    out.push_back(make(TransitionKind::kCancelSetting, m.setting));
  }
  if (model.modes().priorities && !out.empty()) {
    Priority top = Priority::kCancel;
    for (const auto& t : out) top = std::max(top, priority_of(t.kind, model.modes().auto_route));
    std::erase_if(out, [&](const TransitionInstance& t) {
      return priority_of(t.kind, model.modes().auto_route) != top;
    });
  }
  return out;
}

}  // namespace

OracleCounts brute_force_oracle(const Model& model, std::size_t cap) {
  OracleCounts c;
  std::set<Marking> visited;
  std::vector<Marking> work;
  Marking init = model.initial_marking();
  visited.insert(init);
  work.push_back(std::move(init));
  while (!work.empty()) {
    Marking m = std::move(work.back());
    work.pop_back();
    if (!m.accidents.empty()) ++c.accident_markings;
    auto candidates = oracle_candidates(model, m);
    if (candidates.empty()) ++c.terminals;
    for (const auto& t : candidates) {
      ++c.arcs;
      Marking next = apply(model, m, t);
      if (visited.count(next)) continue;
      if (visited.size() >= cap) {
        throw std::length_error("oracle state cap exceeded");
      }
      visited.insert(next);
      work.push_back(std::move(next));
    }
  }
  c.nodes = visited.size();
  return c;
}

}  // namespace ilock
