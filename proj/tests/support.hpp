#ifndef ILOCK_TESTS_SUPPORT_HPP_
#define ILOCK_TESTS_SUPPORT_HPP_

#include <deque>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "explorer.hpp"
#include "layout.hpp"
#include "model.hpp"
#include "scenario.hpp"
#include "table.hpp"

namespace ilock::testing {

inline std::string fixture(const std::string& rel) {
  return std::string(ILOCK_FIXTURES) + "/" + rel;
}

inline LayoutGraph mini_layout() {
  return parse_layout(read_file(fixture("mini_panthong/mini_panthong.layout")));
}

inline InterlockingTable mini_table() {
  return parse_table(read_file(fixture("mini_panthong/mini_panthong.table")));
}

inline Scenario scenario(const std::string& rel) {
  return load_scenario(fixture(rel));
}

inline Model model(const std::string& rel) {
  return build_model(scenario(rel));
}

// Mini station with explicit trains and no queues.
inline Model mini_model(const std::vector<InitialTrain>& trains,
                        Modes modes = {}) {
  return Model::build(mini_layout(), mini_table(), modes, trains, {});
}

inline const std::vector<std::string>& all_scenarios() {
  static const std::vector<std::string> kAll = {
      "mini_panthong/case_a.scenario",  "mini_panthong/case_b.scenario",
      "mini_panthong/case_c1.scenario", "mini_panthong/case_c2.scenario",
      "mini_panthong/case_c3.scenario", "mini_panthong/case_d.scenario",
      "mini_panthong/two_trains.scenario",
      "mini_panthong/flank_17.scenario", "tiny_loop/two_trains.scenario",
      "tiny_loop/standing_train.scenario", "tiny_loop/flank_h1.scenario",
  };
  return kAll;
}

// Visits every reachable marking once, in breadth-first order, together with
// its successors. Independent of the explorer's digest-based visited set.
inline std::size_t for_each_reachable(
    const Model& model,
    const std::function<void(const Marking&, const std::vector<Successor>&)>&
        visit) {
  std::set<Marking> seen;
  std::deque<Marking> queue;
  Marking init = model.initial_marking();
  seen.insert(init);
  queue.push_back(std::move(init));
  while (!queue.empty()) {
    Marking m = std::move(queue.front());
    queue.pop_front();
    auto next = successors(model, m);
    visit(m, next);
    for (auto& [t, n] : next) {
      if (seen.insert(n).second) queue.push_back(n);
    }
  }
  return seen.size();
}

inline int route(const Model& model, const std::string& id) {
  return model.route_index(id);
}

inline int track(const Model& model, const std::string& id) {
  return model.track_index(id);
}

inline int signal(const Model& model, const std::string& id) {
  return model.signal_index(id);
}

}  // namespace ilock::testing

#endif  // ILOCK_TESTS_SUPPORT_HPP_
