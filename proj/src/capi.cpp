#include <cstdlib>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <string>

#include "explorer.hpp"
#include "ilock.h"
#include "report.hpp"
#include "scenario.hpp"
#include "text_format.hpp"

struct ilock_scenario {
  ilock::Scenario scenario;
};

struct ilock_report {
  std::shared_ptr<const ilock::Model> model;
  ilock::StateSpaceReport report;
};

namespace {

thread_local std::string g_last_error;

ilock_status fail(ilock_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, mapping library exceptions onto status codes.
template <class Body>
ilock_status guarded(Body body) {
  g_last_error.clear();
  try {
    return body();
  } catch (const ilock::ParseError& e) {
    return fail(ILOCK_ERR_PARSE, e.what());
  } catch (const ilock::ValidationError& e) {
    return fail(ILOCK_ERR_INVALID, e.what());
  } catch (const ilock::IoError& e) {
    return fail(ILOCK_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(ILOCK_ERR_ARGUMENT, e.what());
  } catch (const std::length_error& e) {
    return fail(ILOCK_ERR_CAP, e.what());
  } catch (const std::exception& e) {
    return fail(ILOCK_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ILOCK_ERR_INTERNAL, "unknown exception");
  }
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw std::invalid_argument(std::string(what) + " is null");
}

std::size_t effective_cap(uint64_t cap, std::size_t fallback) {
  return cap == 0 ? fallback : static_cast<std::size_t>(cap);
}

}  // namespace

extern "C" {

const char* ilock_last_error(void) { return g_last_error.c_str(); }

const char* ilock_status_name(ilock_status status) {
  switch (status) {
    case ILOCK_OK:
      return "ok";
    case ILOCK_ERR_IO:
      return "io";
    case ILOCK_ERR_PARSE:
      return "parse";
    case ILOCK_ERR_INVALID:
      return "invalid";
    case ILOCK_ERR_ARGUMENT:
      return "argument";
    case ILOCK_ERR_NOT_FOUND:
      return "not-found";
    case ILOCK_ERR_CAP:
      return "cap";
    case ILOCK_ERR_INTERNAL:
      return "internal";
  }
  return "unknown";
}

void ilock_string_free(char* s) { std::free(s); }

ilock_status ilock_validate_files(const char* layout_path,
                                  const char* table_path, char** diagnostics,
                                  size_t* error_count, size_t* warning_count) {
  return guarded([&] {
    require(layout_path, "layout_path");
    require(table_path, "table_path");
    require(diagnostics, "diagnostics");
    ilock::Scenario s = ilock::scenario_from_files(layout_path, table_path);
    std::string text;
    std::size_t errors = 0;
    std::size_t warnings = 0;
    for (const auto& d : ilock::validate_table(s.table, s.layout)) {
      (d.severity == ilock::Severity::kError ? errors : warnings) += 1;
      text += ilock::format_diagnostic(d) + "\n";
    }
    *diagnostics = duplicate(text);
    if (error_count) *error_count = errors;
    if (warning_count) *warning_count = warnings;
    return ILOCK_OK;
  });
}

ilock_status ilock_scenario_load(const char* path, ilock_scenario** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ilock_scenario{ilock::load_scenario(path)};
    return ILOCK_OK;
  });
}

ilock_status ilock_scenario_from_files(const char* layout_path,
                                       const char* table_path,
                                       ilock_scenario** out) {
  return guarded([&] {
    require(layout_path, "layout_path");
    require(table_path, "table_path");
    require(out, "out");
    *out = new ilock_scenario{
        ilock::scenario_from_files(layout_path, table_path)};
    return ILOCK_OK;
  });
}

ilock_status ilock_scenario_set_mode(ilock_scenario* s, const char* key,
                                     const char* value) {
  return guarded([&] {
    require(s, "scenario");
    require(key, "key");
    require(value, "value");
    ilock::Modes& modes = s->scenario.modes;
    std::string k = key;
    auto to_bool = [&](const char* what) {
      try {
        return ilock::parse_switch(value, what);
      } catch (const ilock::ValidationError& e) {
        throw std::invalid_argument(e.what());
      }
    };
    if (k == "auto") {
      modes.auto_route = to_bool("auto");
    } else if (k == "priorities") {
      modes.priorities = to_bool("priorities");
    } else if (k == "flank") {
      modes.flank = to_bool("flank");
    } else if (k == "remove_signal") {
      modes.removed_signals = ilock::split_list(value);
      if (modes.removed_signals.size() == 1 &&
          modes.removed_signals[0] == "-") {
        modes.removed_signals.clear();
      }
    } else {
      throw std::invalid_argument("unknown mode key '" + k + "'");
    }
    return ILOCK_OK;
  });
}

void ilock_scenario_free(ilock_scenario* s) { delete s; }

ilock_status ilock_explore(const ilock_scenario* s, uint64_t cap,
                           ilock_report** out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    auto model =
        std::make_shared<const ilock::Model>(ilock::build_model(s->scenario));
    auto report = ilock::explore(*model, effective_cap(cap, ilock::kDefaultStateCap));
    *out = new ilock_report{model, std::move(report)};
    return ILOCK_OK;
  });
}

ilock_status ilock_report_counts(const ilock_report* r, ilock_counts* out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    ilock::TerminalSummary t = ilock::classify_terminals(r->report);
    *out = ilock_counts{};
    out->nodes = r->report.nodes;
    out->arcs = r->report.arcs;
    out->terminals = r->report.terminals.size();
    out->empty_of_trains = t.empty_of_trains;
    out->safe_deadlocks = t.safe_deadlock.size();
    out->accident_terminals = t.accident_terminal.size();
    out->accident_markings = r->report.accident_markings;
    out->derailment_markings = r->report.derailment_markings;
    out->incomplete = r->report.incomplete ? 1 : 0;
    out->elapsed_seconds = r->report.elapsed_seconds;
    return ILOCK_OK;
  });
}

ilock_status ilock_report_render(const ilock_report* r, ilock_format format,
                                 char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    if (format != ILOCK_FORMAT_TEXT && format != ILOCK_FORMAT_MACHINE) {
      throw std::invalid_argument("unknown report format");
    }
    *out = duplicate(format == ILOCK_FORMAT_TEXT
                         ? ilock::render_text(*r->model, r->report)
                         : ilock::render_machine(*r->model, r->report));
    return ILOCK_OK;
  });
}

ilock_status ilock_report_terminal_table(const ilock_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    *out = duplicate(ilock::render_terminal_table(*r->model, r->report));
    return ILOCK_OK;
  });
}

ilock_status ilock_report_trace(const ilock_report* r, const char* digest_hex,
                                char** out) {
  return guarded([&] {
    require(r, "report");
    require(digest_hex, "digest_hex");
    require(out, "out");
    ilock::Digest d;
    if (!ilock::Digest::parse(digest_hex, &d)) {
      throw std::invalid_argument("digest must be 32 hex digits");
    }
    std::vector<ilock::TransitionInstance> trace;
    try {
      trace = ilock::trace_to(r->report, d);
    } catch (const ilock::ValidationError& e) {
      return fail(ILOCK_ERR_NOT_FOUND, e.what());
    }
    ilock::Marking end = ilock::replay(*r->model, trace);
    if (r->model->digest(end) != d) {
      return fail(ILOCK_ERR_INTERNAL, "trace replay reached another marking");
    }
    *out = duplicate("trace to " + d.hex() + " (" +
                     std::to_string(trace.size()) + " steps)\n" +
                     ilock::render_trace(*r->model, trace));
    return ILOCK_OK;
  });
}

void ilock_report_free(ilock_report* r) { delete r; }

ilock_status ilock_flank_check(const ilock_scenario* s, uint64_t cap,
                               ilock_flank_verdict* verdict,
                               char** rendering) {
  return guarded([&] {
    require(s, "scenario");
    require(verdict, "verdict");
    if (s->scenario.modes.removed_signals.empty()) {
      throw std::invalid_argument(
          "flank check needs at least one removed signal");
    }
    ilock::Scenario on = s->scenario;
    on.modes.flank = true;
    ilock::Scenario off = s->scenario;
    off.modes.flank = false;
    ilock::Model with_flank = ilock::build_model(on);
    ilock::Model without_flank = ilock::build_model(off);
    ilock::FlankVerdict v = ilock::flank_check(
        with_flank, without_flank, effective_cap(cap, ilock::kDefaultStateCap));
    switch (v.verdict) {
      case ilock::FlankVerdictKind::kPass:
        *verdict = ILOCK_FLANK_PASS;
        break;
      case ilock::FlankVerdictKind::kFail:
        *verdict = ILOCK_FLANK_FAIL;
        break;
      case ilock::FlankVerdictKind::kVacuous:
        *verdict = ILOCK_FLANK_VACUOUS;
        break;
    }
    if (rendering) {
      *rendering = duplicate(ilock::render_flank_verdict(with_flank, v));
    }
    return ILOCK_OK;
  });
}

ilock_status ilock_oracle_counts(const ilock_scenario* s, uint64_t cap,
                                 ilock_counts* out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    ilock::Model model = ilock::build_model(s->scenario);
    ilock::OracleCounts c =
        ilock::brute_force_oracle(model, effective_cap(cap, ilock::kOracleCap));
    *out = ilock_counts{};
    out->nodes = c.nodes;
    out->arcs = c.arcs;
    out->terminals = c.terminals;
    out->accident_markings = c.accident_markings;
    out->elapsed_seconds = -1;
    return ILOCK_OK;
  });
}

}  // extern "C"
