// Command-line front end. Talks to the verifier only through ilock.h.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ilock.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitAccidents = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitFlankFail = 4;
constexpr int kExitFlankVacuous = 5;
constexpr int kExitUsage = 64;

struct Options {
  std::string layout;
  std::string table;
  std::string scenario;
  std::string auto_mode;
  std::string priorities;
  std::string flank;
  std::vector<std::string> remove_signal;
  std::uint64_t cap = 0;
  std::string format = "text";
  std::string trace;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int report_error(ilock_status status) {
  std::cerr << "ilock: " << ilock_status_name(status) << " error: "
            << ilock_last_error() << "\n";
  return status == ILOCK_ERR_ARGUMENT ? kExitUsage : kExitInput;
}

// Owns a string returned by the library.
struct CString {
  char* p = nullptr;
  ~CString() { ilock_string_free(p); }
  const char* get() const { return p ? p : ""; }
};

struct ScenarioHandle {
  ilock_scenario* p = nullptr;
  ~ScenarioHandle() { ilock_scenario_free(p); }
};

struct ReportHandle {
  ilock_report* p = nullptr;
  ~ReportHandle() { ilock_report_free(p); }
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

// Loads the scenario named on the command line and applies overrides.
ilock_status open_scenario(const Options& o, ScenarioHandle* h) {
  ilock_status st;
  if (!o.scenario.empty()) {
    if (!o.layout.empty() || !o.table.empty()) {
      throw UsageError("--scenario cannot be combined with --layout/--table");
    }
    st = ilock_scenario_load(o.scenario.c_str(), &h->p);
  } else if (!o.layout.empty() && !o.table.empty()) {
    st = ilock_scenario_from_files(o.layout.c_str(), o.table.c_str(), &h->p);
  } else {
    throw UsageError("need --scenario, or both --layout and --table");
  }
  if (st != ILOCK_OK) return st;
  auto set = [&](const char* key, const std::string& value) {
    return value.empty() ? ILOCK_OK
                         : ilock_scenario_set_mode(h->p, key, value.c_str());
  };
  for (auto [key, value] : {std::pair{"auto", o.auto_mode},
                            std::pair{"priorities", o.priorities},
                            std::pair{"flank", o.flank},
                            std::pair{"remove_signal", join(o.remove_signal)}}) {
    if ((st = set(key, value)) != ILOCK_OK) return st;
  }
  return ILOCK_OK;
}

int run_validate(const Options& o) {
  if (o.layout.empty() || o.table.empty()) {
    throw UsageError("validate needs --layout and --table");
  }
  CString diags;
  std::size_t errors = 0;
  std::size_t warnings = 0;
  ilock_status st = ilock_validate_files(o.layout.c_str(), o.table.c_str(),
                                         &diags.p, &errors, &warnings);
  if (st != ILOCK_OK) return report_error(st);
  std::cout << diags.get();
  std::cout << errors << " error(s), " << warnings << " warning(s)\n";
  return errors > 0 ? kExitInput : kExitOk;
}

int run_explore(const Options& o) {
  ScenarioHandle s;
  if (ilock_status st = open_scenario(o, &s); st != ILOCK_OK) {
    return report_error(st);
  }
  ReportHandle r;
  if (ilock_status st = ilock_explore(s.p, o.cap, &r.p); st != ILOCK_OK) {
    return report_error(st);
  }
  CString text;
  ilock_status st = ilock_report_render(
      r.p, o.format == "machine" ? ILOCK_FORMAT_MACHINE : ILOCK_FORMAT_TEXT,
      &text.p);
  if (st != ILOCK_OK) return report_error(st);
  std::cout << text.get();
  ilock_counts c;
  if ((st = ilock_report_counts(r.p, &c)) != ILOCK_OK) return report_error(st);
  if (c.accident_markings > 0) return kExitAccidents;
  if (c.incomplete) return kExitIncomplete;
  return kExitOk;
}

int run_flank_check(const Options& o) {
  ScenarioHandle s;
  if (ilock_status st = open_scenario(o, &s); st != ILOCK_OK) {
    return report_error(st);
  }
  ilock_flank_verdict verdict;
  CString text;
  ilock_status st = ilock_flank_check(s.p, o.cap, &verdict, &text.p);
  if (st != ILOCK_OK) return report_error(st);
  std::cout << text.get();
  switch (verdict) {
    case ILOCK_FLANK_PASS:
      return kExitOk;
    case ILOCK_FLANK_FAIL:
      return kExitFlankFail;
    case ILOCK_FLANK_VACUOUS:
      return kExitFlankVacuous;
  }
  return kExitFlankFail;
}

int run_trace(const Options& o) {
  if (o.trace.empty()) throw UsageError("trace needs --trace=<digest>");
  ScenarioHandle s;
  if (ilock_status st = open_scenario(o, &s); st != ILOCK_OK) {
    return report_error(st);
  }
  ReportHandle r;
  if (ilock_status st = ilock_explore(s.p, o.cap, &r.p); st != ILOCK_OK) {
    return report_error(st);
  }
  CString text;
  ilock_status st = ilock_report_trace(r.p, o.trace.c_str(), &text.p);
  if (st != ILOCK_OK) return report_error(st);
  std::cout << text.get();
  return kExitOk;
}

void add_inputs(CLI::App* cmd, Options* o, bool with_modes) {
  cmd->add_option("--layout", o->layout, "Layout file");
  cmd->add_option("--table", o->table, "Interlocking table file");
  if (!with_modes) return;
  cmd->add_option("--scenario", o->scenario, "Scenario file");
  auto on_off = CLI::IsMember({"on", "off"});
  cmd->add_option("--auto", o->auto_mode, "Automatic route setting")
      ->check(on_off);
  cmd->add_option("--priorities", o->priorities, "Transition priorities")
      ->check(on_off);
  cmd->add_option("--flank", o->flank, "Flank protection")->check(on_off);
  cmd->add_option("--remove-signal", o->remove_signal,
                  "Remove a signal from the layout (repeatable)");
  cmd->add_option("--cap", o->cap, "State cap (0 = default)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explicit-state verifier for railway interlocking tables"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "Check a table against a layout");
  add_inputs(validate, &o, false);

  auto* explore = app.add_subcommand("explore", "Explore the reachable state space");
  add_inputs(explore, &o, true);
  explore->add_option("--format", o.format, "Report format")
      ->check(CLI::IsMember({"text", "machine"}));

  auto* flank = app.add_subcommand(
      "flank-check", "Explore with and without flank protection");
  add_inputs(flank, &o, true);

  auto* trace = app.add_subcommand("trace", "Shortest trace to a marking");
  add_inputs(trace, &o, true);
  trace->add_option("--trace", o.trace, "Marking digest (32 hex digits)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*validate) return run_validate(o);
    if (*explore) return run_explore(o);
    if (*flank) return run_flank_check(o);
    if (*trace) return run_trace(o);
  } catch (const UsageError& e) {
    std::cerr << "ilock: usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
