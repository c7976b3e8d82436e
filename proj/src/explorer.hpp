#ifndef ILOCK_EXPLORER_HPP_
#define ILOCK_EXPLORER_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kernel.hpp"
#include "model.hpp"

namespace ilock {

inline constexpr std::size_t kDefaultStateCap = 10'000'000;

using Successor = std::pair<TransitionInstance, Marking>;

// Enabled transitions of `m` after the priority filter, in a fixed order.
std::vector<TransitionInstance> enabled(const Model& model, const Marking& m);
Marking apply(const Model& model, const Marking& m,
              const TransitionInstance& t);
std::vector<Successor> successors(const Model& model, const Marking& m);

std::string describe_fired(const Model& model, const Marking& before,
                           const TransitionInstance& t);

enum class TerminalClass : std::uint8_t {
  kEmptyOfTrains,
  kSafeDeadlock,
  kAccident,
};
std::string_view to_string(TerminalClass c);
TerminalClass classify(const Marking& m);

struct TerminalInfo {
  Digest digest;
  Marking marking;
  TerminalClass cls = TerminalClass::kSafeDeadlock;
};

// First BFS occurrence of each distinct accident record.
struct AccidentInfo {
  AccidentRecord record;
  Digest digest;
  std::vector<TransitionInstance> trace;
};

// Parent links of the BFS tree, kept for trace reconstruction.
class TraceIndex;

struct StateSpaceReport {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::size_t accident_markings = 0;
  std::size_t derailment_markings = 0;
  bool incomplete = false;
  std::vector<TerminalInfo> terminals;  // BFS order
  std::vector<AccidentInfo> accidents;
  double elapsed_seconds = 0;
  Modes modes;
  Digest initial;
  std::shared_ptr<const TraceIndex> index;
};

struct TerminalSummary {
  std::size_t empty_of_trains = 0;
  std::vector<const TerminalInfo*> safe_deadlock;
  std::vector<const TerminalInfo*> accident_terminal;
};
TerminalSummary classify_terminals(const StateSpaceReport& report);

StateSpaceReport explore(const Model& model,
                         std::size_t cap = kDefaultStateCap);

// Shortest firing sequence from the initial marking. Throws
// ValidationError for digests not in the report.
std::vector<TransitionInstance> trace_to(const StateSpaceReport& report,
                                         const Digest& target);

// Replays `trace` from the initial marking through `successors`, returning
// the marking reached; throws if a step is not enabled.
Marking replay(const Model& model, const std::vector<TransitionInstance>& trace);

enum class FlankVerdictKind : std::uint8_t { kPass, kFail, kVacuous };
std::string_view to_string(FlankVerdictKind v);

struct FlankVerdict {
  FlankVerdictKind verdict = FlankVerdictKind::kFail;
  StateSpaceReport with_flank;
  StateSpaceReport without_flank;
};

// Explores the scenario with flank protection on and off. Both models must
// already carry the removed signals. Throws std::invalid_argument when no
// signal is removed.
FlankVerdict flank_check(const Model& with_flank, const Model& without_flank,
                         std::size_t cap = kDefaultStateCap);

// Naive reference exploration: ordered set of full markings, enabling
// recomputed from scratch for every candidate instance. Throws
// std::length_error above `cap` states.
struct OracleCounts {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::size_t terminals = 0;
  std::size_t accident_markings = 0;

  bool operator==(const OracleCounts&) const = default;
};
inline constexpr std::size_t kOracleCap = 200'000;
OracleCounts brute_force_oracle(const Model& model,
                                std::size_t cap = kOracleCap);

}  // namespace ilock

#endif  // ILOCK_EXPLORER_HPP_
