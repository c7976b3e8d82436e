#ifndef ILOCK_REPORT_HPP_
#define ILOCK_REPORT_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "explorer.hpp"
#include "model.hpp"

namespace ilock {

std::string render_text(const Model& model, const StateSpaceReport& report);

// First line: nodes= arcs= terminals= accidents= incomplete=. Then a mode
// line, terminal and accident records, and finally an elapsed= line that is
// the only run-dependent content.
std::string render_machine(const Model& model, const StateSpaceReport& report);

// One row per safe-deadlock terminal listing the occupancy of every approach
// track; trains elsewhere are listed in a trailing column.
std::string render_terminal_table(const Model& model,
                                  const StateSpaceReport& report);

std::string render_trace(const Model& model,
                         const std::vector<TransitionInstance>& trace);

std::string render_flank_verdict(const Model& model, const FlankVerdict& v);

// Parsed machine-format report. Each record keeps its key/value fields in
// file order.
struct MachineRecord {
  std::string type;  // "mode", "terminal" or "accident"
  std::vector<std::pair<std::string, std::string>> fields;

  const std::string* field(std::string_view key) const;
  bool operator==(const MachineRecord&) const = default;
};

struct MachineReport {
  std::size_t nodes = 0;
  std::size_t arcs = 0;
  std::size_t terminals = 0;
  std::size_t accidents = 0;
  bool incomplete = false;
  std::vector<MachineRecord> records;
  double elapsed_seconds = -1;  // -1 when absent

  bool operator==(const MachineReport&) const = default;
};

// Throws ParseError.
MachineReport parse_machine_report(std::string_view text);
std::string write_machine_report(const MachineReport& report);

// Drops the elapsed= line so two runs can be compared byte for byte.
std::string strip_elapsed(std::string_view machine_text);

}  // namespace ilock

#endif  // ILOCK_REPORT_HPP_
