#include "motion.hpp"

#include <algorithm>

namespace ilock {

namespace {

void add_accident(Marking& m, AccidentKind kind, int a, int b, int track) {
  AccidentRecord rec;
  rec.kind = kind;
  rec.train_a = static_cast<std::int16_t>(b < 0 ? a : std::min(a, b));
  rec.train_b = static_cast<std::int16_t>(b < 0 ? -1 : std::max(a, b));
  rec.track = static_cast<std::int16_t>(track);
  auto at = std::lower_bound(m.accidents.begin(), m.accidents.end(), rec);
  if (at == m.accidents.end() || *at != rec) m.accidents.insert(at, rec);
  m.trains[a].frozen = true;
  if (b >= 0) m.trains[b].frozen = true;
}

bool route_reserves(const Model& model, const Marking& m, int track) {
  for (std::size_t r = 0; r < model.routes().size(); ++r) {
    if (m.routes[r].status == RouteStatus::kNormal) continue;
    const auto& tracks = model.routes()[r].tracks;
    if (std::find(tracks.begin(), tracks.end(), track) != tracks.end()) {
      return true;
    }
  }
  return false;
}

}  // namespace

bool move_enabled(const Model& model, const Marking& m, int train,
                  int template_index) {
  const TrainState& t = m.trains[train];
  if (t.phase != TrainPhase::kActive || t.frozen) return false;
  const auto& moves = model.moves(t.track, t.dir);
  if (template_index < 0 ||
      template_index >= static_cast<int>(moves.size())) {
    return false;
  }
  const CompiledMove& mv = moves[template_index];
  if (mv.front_signal >= 0 &&
      aspect_of(model, m, mv.front_signal) == Aspect::kRed) {
    return false;
  }
  return true;
}

void enabled_moves(const Model& model, const Marking& m, const Occupancy& occ,
                   std::vector<TransitionInstance>* out) {
  for (std::size_t i = 0; i < m.trains.size(); ++i) {
    const TrainState& t = m.trains[i];
    if (t.phase != TrainPhase::kActive || t.frozen) continue;
    const int n = static_cast<int>(model.moves(t.track, t.dir).size());
    for (int k = 0; k < n; ++k) {
      if (move_enabled(model, m, static_cast<int>(i), k)) {
        out->push_back(TransitionInstance{TransitionKind::kMove,
                                          static_cast<std::uint16_t>(i),
                                          static_cast<std::uint16_t>(k)});
      }
    }
  }
  for (std::size_t b = 0; b < model.borders().size(); ++b) {
    if (spawn_enabled(model, m, occ, static_cast<int>(b))) {
      out->push_back(TransitionInstance{TransitionKind::kSpawn,
                                        static_cast<std::uint16_t>(b), 0});
    }
  }
}

Marking fire_move(const Model& model, const Marking& m, const Occupancy& occ,
                  int train, int template_index) {
  const TrainState& t = m.trains[train];
  const CompiledMove& mv = model.moves(t.track, t.dir)[template_index];
  Marking next = m;
  TrainState& nt = next.trains[train];

  if (mv.kind == MoveKind::kBorderExit) {
    nt.phase = TrainPhase::kDeparted;
    nt.track = -1;
    ++next.departed[mv.border];
    return next;
  }

  int dest = mv.to;
  bool collided = false;
  if (mv.kind == MoveKind::kPoint) {
    const PointLeg actual = m.points[mv.point].position == Position::kNormal
                                ? PointLeg::kNormal
                                : PointLeg::kReverse;
    if (mv.facing) {
      dest = model.point_legs()[mv.point][static_cast<int>(actual)];
      if (occ.occupied(dest)) {
        add_accident(next,
                     actual != mv.leg ? AccidentKind::kHeadToSide
                                      : AccidentKind::kHeadToTailHeadToHead,
                     train, occ.first_train(dest), dest);
        collided = true;
      }
    } else if (actual != mv.leg) {
      // Trailing through a point set against the train.
      if (occ.occupied(dest)) {
        add_accident(next, AccidentKind::kHeadToSide, train,
                     occ.first_train(dest), dest);
      } else {
        add_accident(next, AccidentKind::kDerailment, train, -1, dest);
      }
      collided = true;
    }
  }
  if (!collided && occ.occupied(dest)) {
    add_accident(next, AccidentKind::kHeadToTailHeadToHead, train,
                 occ.first_train(dest), dest);
    collided = true;
  }
  nt.track = static_cast<std::int16_t>(dest);
  if (!collided) {
    int d = model.derailer_on_track()[dest];
    if (d >= 0 && m.derailers[d].position == Position::kNormal) {
      add_accident(next, AccidentKind::kDerailment, train, -1, dest);
    }
  }
  return next;
}

bool spawn_enabled(const Model& model, const Marking& m, const Occupancy& occ,
                   int border) {
  const CompiledBorder& b = model.borders()[border];
  if (m.queue_head[border] >= b.queue.size()) return false;
  for (int t : b.block_tracks) {
    if (occ.occupied(t) || route_reserves(model, m, t)) return false;
  }
  return true;
}

Marking fire_spawn(const Model& model, const Marking& m, int border) {
  const CompiledBorder& b = model.borders()[border];
  Marking next = m;
  int train = b.queue[next.queue_head[border]++];
  TrainState& t = next.trains[train];
  t.phase = TrainPhase::kActive;
  t.track = static_cast<std::int16_t>(b.track);
  t.dir = b.inbound;
  return next;
}

std::string describe_motion(const Model& model, const Marking& m,
                            const TransitionInstance& t) {
  if (t.kind == TransitionKind::kSpawn) {
    const CompiledBorder& b = model.borders()[t.subject];
    return "Spawn border=" + b.id + " train=" +
           model.trains()[b.queue[m.queue_head[t.subject]]] + " track=" +
           model.track_name(b.track);
  }
  const TrainState& ts = m.trains[t.subject];
  const CompiledMove& mv = model.moves(ts.track, ts.dir)[t.detail];
  std::string out = "Move train=" + model.trains()[t.subject] +
                    " from=" + model.track_name(ts.track);
  if (mv.kind == MoveKind::kBorderExit) {
    return out + " exit=" + model.borders()[mv.border].id;
  }
  out += " to=" + model.track_name(mv.to);
  if (mv.point >= 0) {
    out += " point=" + model.points()[mv.point].id +
           (mv.facing ? " facing" : " trailing");
  }
  if (mv.front_signal >= 0) out += " signal=" + model.signals()[mv.front_signal].id;
  return out;
}

}  // namespace ilock
