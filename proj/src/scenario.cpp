#include "scenario.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "text_format.hpp"

namespace ilock {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool parse_switch(std::string_view text, std::string_view what) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw ValidationError(std::string(what) + " must be on or off, got '" +
                        std::string(text) + "'");
}

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  bool have_layout = false;
  bool have_table = false;
  for (const Record& rec : split_records(text)) {
    const auto& tok = rec.tokens;
    const std::string& head = tok[0].text;
    auto fail = [&](std::size_t col, const std::string& msg) {
      throw ParseError(rec.line, col, msg);
    };
    if (head == "layout" || head == "table") {
      if (tok.size() != 2) fail(tok[0].column, head + " takes one path");
      bool& seen = head == "layout" ? have_layout : have_table;
      if (seen) fail(tok[0].column, "repeated " + head);
      seen = true;
      (head == "layout" ? s.layout_path : s.table_path) = tok[1].text;
    } else if (head == "occupy") {
      if (tok.size() != 4) {
        fail(tok[0].column, "expected: occupy <track> <train> <up|down>");
      }
      auto dir = parse_direction(tok[3].text);
      if (!dir) fail(tok[3].column, "bad direction '" + tok[3].text + "'");
      for (const auto& o : s.occupancy) {
        if (o.track == tok[1].text) {
          fail(tok[1].column, "track " + tok[1].text + " occupied twice");
        }
      }
      s.occupancy.push_back(InitialTrain{tok[1].text, tok[2].text, *dir});
    } else if (head == "border") {
      if (tok.size() < 2) fail(tok[0].column, "border needs an id");
      KeyValues kv(rec, 2, {"queue"});
      for (const auto& [id, q] : s.border_queues) {
        if (id == tok[1].text) fail(tok[1].column, "repeated border " + id);
      }
      s.border_queues.emplace_back(tok[1].text, kv.list("queue"));
    } else if (head == "mode") {
      KeyValues kv(rec, 1, {"auto", "priorities", "flank", "remove_signal"});
      try {
        if (auto v = kv.get("auto")) s.modes.auto_route = parse_switch(*v, "auto");
        if (auto v = kv.get("priorities")) {
          s.modes.priorities = parse_switch(*v, "priorities");
        }
        if (auto v = kv.get("flank")) s.modes.flank = parse_switch(*v, "flank");
      } catch (const ValidationError& e) {
        fail(0, e.what());
      }
      if (kv.has("remove_signal")) {
        s.modes.removed_signals = kv.list("remove_signal");
      }
    } else {
      fail(tok[0].column, "unknown directive '" + head + "'");
    }
  }
  if (!have_layout) throw ParseError(0, 0, "scenario names no layout");
  if (!have_table) throw ParseError(0, 0, "scenario names no table");
  return s;
}

namespace {

template <class Parse>
auto parse_file(const std::string& path, Parse parse) {
  std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw e.in_file(path);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  Scenario s = parse_file(path, parse_scenario);
  std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? p : (base / fp).string();
  };
  s.layout_path = resolve(s.layout_path);
  s.table_path = resolve(s.table_path);
  s.layout = parse_file(s.layout_path, parse_layout);
  s.table = parse_file(s.table_path, parse_table);
  return s;
}

Scenario scenario_from_files(const std::string& layout_path,
                             const std::string& table_path) {
  Scenario s;
  s.layout_path = layout_path;
  s.table_path = table_path;
  s.layout = parse_file(layout_path, parse_layout);
  s.table = parse_file(table_path, parse_table);
  return s;
}

Model build_model(const Scenario& s) {
  auto diags = validate_table(s.table, s.layout);
  if (has_errors(diags)) {
    for (const auto& d : diags) {
      if (d.severity == Severity::kError) {
        throw ValidationError("table invalid: " + format_diagnostic(d));
      }
    }
  }
  return Model::build(s.layout, s.table, s.modes, s.occupancy,
                      s.border_queues);
}

}  // namespace ilock
