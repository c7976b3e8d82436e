// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <string>

#include "explorer.hpp"
#include "kernel.hpp"
#include "report.hpp"
#include "support.hpp"

using namespace ilock;
using namespace ilock::testing;

namespace {

using Check = std::function<bool(std::string* detail)>;

bool is_tiny(const std::string& path) {
  return path.find("tiny_loop") != std::string::npos;
}

Model with_modes(const std::string& path, const std::function<void(Modes*)>& f) {
  Scenario s = scenario(path);
  f(&s.modes);
  return build_model(s);
}

void all_on(Modes* m) {
  m->auto_route = m->priorities = m->flank = true;
  m->removed_signals.clear();
}

bool safety(std::string* detail) {
  bool ok = true;
  double worst = 0;
  for (const auto& path : all_scenarios()) {
    auto start = std::chrono::steady_clock::now();
    StateSpaceReport r = explore(with_modes(path, all_on));
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    worst = std::max(worst, secs);
    if (r.incomplete || r.accident_markings != 0 ||
        r.derailment_markings != 0 || secs >= 60) {
      ok = false;
      *detail += " " + path;
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, " slowest %.3f s", worst);
  *detail += buf;
  return ok;
}

bool oracle(std::string* detail) {
  const std::function<void(Modes*)> variants[] = {
      [](Modes*) {},
      [](Modes* m) { m->priorities = false; },
      [](Modes* m) { m->auto_route = false; },
      [](Modes* m) { m->flank = false; },
  };
  int runs = 0;
  for (const auto& path : all_scenarios()) {
    for (const auto& v : variants) {
      Model model = with_modes(path, v);
      OracleCounts o = brute_force_oracle(model);
      StateSpaceReport r = explore(model);
      OracleCounts e{r.nodes, r.arcs, r.terminals.size(), r.accident_markings};
      if (r.incomplete || !(o == e)) {
        *detail = " mismatch on " + path;
        return false;
      }
      ++runs;
    }
  }
  *detail = " " + std::to_string(runs) + " runs agree";
  return true;
}

bool priority_reduction(std::string* detail) {
  const std::string b = "mini_panthong/case_b.scenario";
  std::size_t on = explore(with_modes(b, all_on)).nodes;
  std::size_t off = explore(with_modes(b, [](Modes* m) {
                              all_on(m);
                              m->priorities = false;
                            })).nodes;
  char buf[128];
  std::snprintf(buf, sizeof buf, " case B: %zu nodes on, %zu off, ratio %.3f",
                on, off, static_cast<double>(on) / static_cast<double>(off));
  *detail = buf;
  return on < off;
}

bool auto_reduction(std::string* detail) {
  const std::string b = "mini_panthong/case_b.scenario";
  auto on = explore(with_modes(b, all_on));
  auto manual = explore(with_modes(b, [](Modes* m) {
    all_on(m);
    m->auto_route = false;
  }));
  std::size_t a = classify_terminals(on).safe_deadlock.size();
  std::size_t h = classify_terminals(manual).safe_deadlock.size();
  *detail = " case B safe deadlocks: " + std::to_string(a) + " auto, " +
            std::to_string(h) + " manual";
  return !on.incomplete && !manual.incomplete && a < h;
}

bool flank_pair(std::string* detail) {
  auto start = std::chrono::steady_clock::now();
  Scenario s = scenario("mini_panthong/flank_17.scenario");
  s.modes.auto_route = s.modes.priorities = s.modes.flank = true;
  s.modes.removed_signals = {"17"};
  Model with = build_model(s);
  s.modes.flank = false;
  Model without = build_model(s);
  FlankVerdict v = flank_check(with, without);
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  std::size_t side = 0;
  for (const auto& a : v.without_flank.accidents) {
    if (a.record.kind == AccidentKind::kHeadToSide &&
        a.record.track == without.track_index("102T")) {
      ++side;
    }
  }
  *detail = " verdict " + std::string(to_string(v.verdict)) + ", on " +
            std::to_string(v.with_flank.accident_markings) +
            " accident markings, off " + std::to_string(side) +
            " Head2Side at 102T";
  return v.verdict == FlankVerdictKind::kPass &&
         v.with_flank.accident_markings == 0 && side >= 1 && secs < 60;
}

bool flank_hold(std::string* detail) {
  bool ok = true;
  std::size_t markings = 0, checked = 0;
  for (const auto& path : all_scenarios()) {
    if (!is_tiny(path)) continue;
    Model model = build_model(scenario(path));
    markings += for_each_reachable(model, [&](const Marking& m, const auto&) {
      for (std::size_t r = 0; r < model.routes().size(); ++r) {
        if (m.routes[r].status != RouteStatus::kSet) continue;
        for (const auto& d : model.routes()[r].demands) {
          if (!d.flank) continue;
          const DeviceState& dev = d.kind == DeviceKind::kPoint
                                       ? m.points[d.device]
                                       : m.derailers[d.device];
          ++checked;
          if (dev.position != d.position ||
              !(dev.locked_by & (RouteMask{1} << r))) {
            ok = false;
          }
        }
      }
    });
  }
  *detail = " " + std::to_string(markings) + " tiny_loop markings, " +
            std::to_string(checked) + " flank demands checked";
  return ok && checked > 0;
}

bool kernel_invariants(std::string* detail) {
  bool ok = true;
  std::size_t markings = 0;
  for (const auto& path : all_scenarios()) {
    Model model = build_model(scenario(path));
    const auto& routes = model.routes();
    markings += for_each_reachable(
        model, [&](const Marking& m, const std::vector<Successor>& next) {
          int setting = 0;
          for (std::size_t r = 0; r < routes.size(); ++r) {
            if (m.routes[r].status == RouteStatus::kSetting) ++setting;
            if (m.routes[r].status != RouteStatus::kSet) continue;
            for (std::size_t o = r + 1; o < routes.size(); ++o) {
              if ((routes[r].conflicts & (RouteMask{1} << o)) &&
                  m.routes[o].status == RouteStatus::kSet) {
                ok = false;
              }
            }
          }
          if (setting > 1) ok = false;
          int cancels = 0;
          for (const auto& [t, n] : next) {
            if (t.kind == TransitionKind::kCancelSetting) ++cancels;
          }
          if (cancels > 1) ok = false;
        });
  }
  *detail = " " + std::to_string(markings) + " markings";
  return ok;
}

bool determinism(std::string* detail) {
  for (const auto& path : all_scenarios()) {
    Model model = build_model(scenario(path));
    std::string a = strip_elapsed(render_machine(model, explore(model)));
    std::string b = strip_elapsed(render_machine(model, explore(model)));
    if (a != b) {
      *detail = " differs on " + path;
      return false;
    }
  }
  *detail = " " + std::to_string(all_scenarios().size()) + " scenarios";
  return true;
}

bool terminals(std::string* detail) {
  auto c2 = classify_terminals(explore(model("mini_panthong/case_c2.scenario")));
  auto c3 = classify_terminals(explore(model("mini_panthong/case_c3.scenario")));
  auto d = classify_terminals(explore(model("mini_panthong/case_d.scenario")));
  *detail = " C2 " + std::to_string(c2.safe_deadlock.size()) +
            " deadlocks, C3 " + std::to_string(c3.safe_deadlock.size()) +
            " deadlocks, D " + std::to_string(d.empty_of_trains) +
            " empty-of-trains";
  return !c2.safe_deadlock.empty() && !c3.safe_deadlock.empty() &&
         d.empty_of_trains >= 1;
}

}  // namespace

int main() {
  const std::pair<const char*, Check> criteria[] = {
      {"safety", safety},
      {"oracle equivalence", oracle},
      {"priority reduction", priority_reduction},
      {"auto-mode deadlock reduction", auto_reduction},
      {"flank proof pair", flank_pair},
      {"flank hold invariant", flank_hold},
      {"mutual exclusion, inhibitor, reset atomicity", kernel_invariants},
      {"determinism", determinism},
      {"terminal classification", terminals},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    std::string detail;
    bool ok = false;
    try {
      ok = check(&detail);
    } catch (const std::exception& e) {
      detail = std::string(" exception: ") + e.what();
    }
    if (!ok) ++failed;
    std::printf("%s %d %s:%s\n", ok ? "PASS" : "FAIL", n, name, detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
