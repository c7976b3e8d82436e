#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "text_format.hpp"

namespace ilock {

namespace {

std::string on_off(bool b) { return b ? "on" : "off"; }

std::string removed_list(const Modes& modes) {
  return modes.removed_signals.empty() ? "-"
                                       : join(modes.removed_signals, ",");
}

std::string train_list(const Model& model, const Marking& m) {
  std::vector<std::string> items;
  for (std::size_t i = 0; i < m.trains.size(); ++i) {
    const TrainState& t = m.trains[i];
    if (t.phase != TrainPhase::kActive) continue;
    items.push_back(model.trains()[i] + "@" + model.track_name(t.track) + "/" +
                    std::string(to_string(t.dir)));
  }
  return items.empty() ? "-" : join(items, ",");
}

std::string accident_trains(const Model& model, const AccidentRecord& a) {
  std::string out = model.trains()[a.train_a];
  if (a.train_b >= 0) out += "," + model.trains()[a.train_b];
  return out;
}

std::vector<int> approach_tracks(const Model& model) {
  std::set<int> tracks;
  for (const auto& r : model.routes()) {
    if (r.entry_signal >= 0) tracks.insert(r.approach);
  }
  std::vector<int> out(tracks.begin(), tracks.end());
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    return model.track_name(a) < model.track_name(b);
  });
  return out;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

const std::string* MachineRecord::field(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string render_machine(const Model& model, const StateSpaceReport& report) {
  MachineReport out;
  out.nodes = report.nodes;
  out.arcs = report.arcs;
  out.terminals = report.terminals.size();
  out.accidents = report.accident_markings;
  out.incomplete = report.incomplete;
  out.records.push_back(MachineRecord{
      "mode",
      {{"auto", on_off(report.modes.auto_route)},
       {"priorities", on_off(report.modes.priorities)},
       {"flank", on_off(report.modes.flank)},
       {"remove_signal", removed_list(report.modes)}}});
  for (const auto& t : report.terminals) {
    out.records.push_back(MachineRecord{
        "terminal",
        {{"digest", t.digest.hex()},
         {"class", std::string(to_string(t.cls))},
         {"trains", train_list(model, t.marking)}}});
  }
  for (const auto& a : report.accidents) {
    out.records.push_back(MachineRecord{
        "accident",
        {{"kind", std::string(to_string(a.record.kind))},
         {"trains", accident_trains(model, a.record)},
         {"track", model.track_name(a.record.track)},
         {"digest", a.digest.hex()},
         {"steps", std::to_string(a.trace.size())}}});
  }
  out.elapsed_seconds = report.elapsed_seconds;
  return write_machine_report(out);
}

std::string write_machine_report(const MachineReport& r) {
  std::ostringstream out;
  out << "nodes=" << r.nodes << " arcs=" << r.arcs
      << " terminals=" << r.terminals << " accidents=" << r.accidents
      << " incomplete=" << (r.incomplete ? 1 : 0) << "\n";
  for (const auto& rec : r.records) {
    out << rec.type;
    for (const auto& [k, v] : rec.fields) out << " " << k << "=" << v;
    out << "\n";
  }
  if (r.elapsed_seconds >= 0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "elapsed=%.6f\n", r.elapsed_seconds);
    out << buf;
  }
  return out.str();
}

MachineReport parse_machine_report(std::string_view text) {
  MachineReport r;
  auto records = split_records(text);
  if (records.empty()) throw ParseError(1, 0, "empty report");
  {
    KeyValues kv(records[0], 0,
                 {"nodes", "arcs", "terminals", "accidents", "incomplete"});
    auto number = [&](std::string_view key) -> std::size_t {
      const std::string& v = kv.require(key);
      std::size_t pos = 0;
      unsigned long long n = 0;
      try {
        n = std::stoull(v, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos != v.size() || v.empty() || v[0] == '-') {
        throw ParseError(records[0].line, kv.column_of(key),
                         "bad number '" + v + "'");
      }
      return static_cast<std::size_t>(n);
    };
    r.nodes = number("nodes");
    r.arcs = number("arcs");
    r.terminals = number("terminals");
    r.accidents = number("accidents");
    std::size_t inc = number("incomplete");
    if (inc > 1) {
      throw ParseError(records[0].line, kv.column_of("incomplete"),
                       "incomplete must be 0 or 1");
    }
    r.incomplete = inc == 1;
  }
  for (std::size_t i = 1; i < records.size(); ++i) {
    const Record& rec = records[i];
    const std::string& head = rec.tokens[0].text;
    if (head.rfind("elapsed=", 0) == 0 && rec.tokens.size() == 1) {
      try {
        r.elapsed_seconds = std::stod(head.substr(8));
      } catch (const std::exception&) {
        throw ParseError(rec.line, rec.tokens[0].column, "bad elapsed value");
      }
      continue;
    }
    if (head != "mode" && head != "terminal" && head != "accident") {
      throw ParseError(rec.line, rec.tokens[0].column,
                       "unknown record '" + head + "'");
    }
    MachineRecord mr;
    mr.type = head;
    for (std::size_t k = 1; k < rec.tokens.size(); ++k) {
      const Token& tok = rec.tokens[k];
      auto eq = tok.text.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ParseError(rec.line, tok.column, "expected key=value");
      }
      mr.fields.emplace_back(tok.text.substr(0, eq), tok.text.substr(eq + 1));
    }
    r.records.push_back(std::move(mr));
  }
  return r;
}

std::string strip_elapsed(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    std::size_t next = end == std::string_view::npos ? text.size() : end + 1;
    std::string_view line = text.substr(pos, next - pos);
    if (line.rfind("elapsed=", 0) != 0) out.append(line);
    pos = next;
  }
  return out;
}

std::string render_terminal_table(const Model& model,
                                  const StateSpaceReport& report) {
  TerminalSummary summary = classify_terminals(report);
  if (summary.safe_deadlock.empty()) return "no deadlocks\n";
  std::vector<int> columns = approach_tracks(model);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header = {"No."};
  for (int t : columns) header.push_back(model.track_name(t));
  header.push_back("other tracks");
  header.push_back("marking");
  rows.push_back(header);
  std::size_t n = 0;
  for (const TerminalInfo* info : summary.safe_deadlock) {
    std::vector<std::string> row = {std::to_string(++n)};
    std::vector<std::string> cells(columns.size(), ".");
    std::vector<std::string> other;
    for (std::size_t i = 0; i < info->marking.trains.size(); ++i) {
      const TrainState& t = info->marking.trains[i];
      if (t.phase != TrainPhase::kActive) continue;
      std::string cell = model.trains()[i] + "(" +
                         std::string(to_string(t.dir)) + ")";
      auto col = std::find(columns.begin(), columns.end(), t.track);
      if (col == columns.end()) {
        other.push_back(model.track_name(t.track) + "=" + cell);
      } else {
        std::string& c = cells[col - columns.begin()];
        c = c == "." ? cell : c + "+" + cell;
      }
    }
    row.insert(row.end(), cells.begin(), cells.end());
    row.push_back(other.empty() ? "clear" : join(other, " "));
    row.push_back(info->digest.hex());
    rows.push_back(std::move(row));
  }
  std::vector<std::size_t> width(rows[0].size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += i + 1 == row.size() ? row[i] : pad(row[i], width[i] + 2);
    }
    out += line + "\n";
  }
  return out;
}

std::string render_trace(const Model& model,
                         const std::vector<TransitionInstance>& trace) {
  std::string out;
  Marking m = model.initial_marking();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out += "  " + std::to_string(i + 1) + ". " +
           describe_fired(model, m, trace[i]) + "\n";
    m = apply(model, m, trace[i]);
  }
  if (trace.empty()) out += "  (initial marking)\n";
  return out;
}

std::string render_text(const Model& model, const StateSpaceReport& report) {
  std::ostringstream out;
  TerminalSummary s = classify_terminals(report);
  out << "State space: " << report.nodes << " nodes, " << report.arcs
      << " arcs" << (report.incomplete ? " (INCOMPLETE: state cap reached)" : "")
      << "\n";
  out << "Modes: auto=" << on_off(report.modes.auto_route)
      << " priorities=" << on_off(report.modes.priorities)
      << " flank=" << on_off(report.modes.flank)
      << " removed signals=" << removed_list(report.modes) << "\n";
  out << "Terminal markings: " << report.terminals.size()
      << " (empty of trains: " << s.empty_of_trains
      << ", safe deadlocks: " << s.safe_deadlock.size()
      << ", with accidents: " << s.accident_terminal.size() << ")\n";
  out << "Accident markings: " << report.accident_markings
      << " (with derailments: " << report.derailment_markings << ")\n";
  out << "\nSafe deadlocks:\n" << render_terminal_table(model, report);
  if (!report.accidents.empty()) {
    out << "\nAccidents (shortest traces):\n";
    for (const auto& a : report.accidents) {
      out << to_string(a.record.kind) << " at "
          << model.track_name(a.record.track) << " trains "
          << accident_trains(model, a.record) << " marking " << a.digest.hex()
          << "\n"
          << render_trace(model, a.trace);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "\nElapsed: %.3f s\n", report.elapsed_seconds);
  out << buf;
  return out.str();
}

std::string render_flank_verdict(const Model& model, const FlankVerdict& v) {
  std::ostringstream out;
  auto line = [&](const char* name, const StateSpaceReport& r) {
    std::size_t head_to_side = 0;
    for (const auto& a : r.accidents) {
      if (a.record.kind == AccidentKind::kHeadToSide) ++head_to_side;
    }
    out << name << ": " << r.nodes << " nodes, " << r.accident_markings
        << " accident markings, " << head_to_side
        << " distinct Head2Side collisions"
        << (r.incomplete ? " (INCOMPLETE)" : "") << "\n";
  };
  out << "Flank check, removed signals: " << removed_list(v.with_flank.modes)
      << "\n";
  line("flank on ", v.with_flank);
  line("flank off", v.without_flank);
  for (const auto& a : v.without_flank.accidents) {
    out << "  without flank: " << to_string(a.record.kind) << " at "
        << model.track_name(a.record.track) << " trains "
        << accident_trains(model, a.record) << "\n";
  }
  out << "Verdict: " << to_string(v.verdict) << "\n";
  return out.str();
}

}  // namespace ilock
