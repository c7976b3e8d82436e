#ifndef ILOCK_SCENARIO_HPP_
#define ILOCK_SCENARIO_HPP_

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layout.hpp"
#include "model.hpp"
#include "table.hpp"

namespace ilock {

struct Scenario {
  std::string layout_path;
  std::string table_path;
  LayoutGraph layout;
  InterlockingTable table;
  std::vector<InitialTrain> occupancy;
  std::vector<std::pair<std::string, std::vector<TrainId>>> border_queues;
  Modes modes;
};

// Parses scenario text. Paths are returned as written; nothing is loaded.
Scenario parse_scenario(std::string_view text);

// Reads and parses a scenario file, resolving layout/table paths relative to
// the scenario file, then loads both. Throws ParseError, ValidationError or
// IoError.
Scenario load_scenario(const std::string& path);

// A scenario with no trains beyond those queued in the layout file.
Scenario scenario_from_files(const std::string& layout_path,
                             const std::string& table_path);

Model build_model(const Scenario& s);

std::string read_file(const std::string& path);

// "on" or "off".
bool parse_switch(std::string_view text, std::string_view what);

}  // namespace ilock

#endif  // ILOCK_SCENARIO_HPP_
