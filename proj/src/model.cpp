#include "model.hpp"

#include <algorithm>
#include <cstring>
#include <set>

#include "text_format.hpp"

namespace ilock {

std::string_view to_string(AccidentKind k) {
  switch (k) {
    case AccidentKind::kHeadToTailHeadToHead:
      return "H2T_H2H";
    case AccidentKind::kHeadToSide:
      return "Head2Side";
    case AccidentKind::kDerailment:
      return "Derailment";
  }
  return "?";
}

namespace {

constexpr std::uint64_t kMul1 = 0xff51afd7ed558ccdULL;
constexpr std::uint64_t kMul2 = 0xc4ceb9fe1a85ec53ULL;

std::uint64_t fmix(std::uint64_t x) {
  x ^= x >> 33;
  x *= kMul1;
  x ^= x >> 33;
  x *= kMul2;
  x ^= x >> 33;
  return x;
}

std::uint64_t hash_lane(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed ^ (bytes.size() * 0x9e3779b97f4a7c15ULL);
  std::size_t i = 0;
  for (; i + 8 <= bytes.size(); i += 8) {
    std::uint64_t chunk;
    std::memcpy(&chunk, bytes.data() + i, 8);
    h = fmix(h ^ fmix(chunk + seed)) + 0x165667b19e3779f9ULL;
  }
  std::uint64_t tail = 0;
  for (std::size_t j = 0; i + j < bytes.size(); ++j) {
    tail |= static_cast<std::uint64_t>(
                static_cast<unsigned char>(bytes[i + j]))
            << (8 * j);
  }
  return fmix(h ^ fmix(tail + seed + 1));
}

std::size_t mask_bytes(std::size_t bits) {
  return std::max<std::size_t>(1, (bits + 7) / 8);
}

void put_uint(std::string& out, std::uint64_t v, std::size_t bytes) {
  for (std::size_t i = 0; i < bytes; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
}

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}
  std::uint64_t uint(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw ValidationError("truncated marking encoding");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v |= static_cast<std::uint64_t>(
               static_cast<unsigned char>(bytes_[pos_ + i]))
           << (8 * i);
    }
    pos_ += n;
    return v;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

template <class T>
int index_of(const std::vector<T>& items, std::string_view id,
             auto&& id_of) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (id_of(items[i]) == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::string Digest::hex() const {
  static const char* kHex = "0123456789abcdef";
  std::string out(32, '0');
  for (int i = 0; i < 16; ++i) {
    out[15 - i] = kHex[(hi >> (4 * i)) & 0xf];
    out[31 - i] = kHex[(lo >> (4 * i)) & 0xf];
  }
  return out;
}

bool Digest::parse(std::string_view text, Digest* out) {
  if (text.size() != 32) return false;
  std::uint64_t parts[2] = {0, 0};
  for (std::size_t i = 0; i < 32; ++i) {
    char c = text[i];
    int v;
    if (c >= '0' && c <= '9') {
      v = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      v = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      v = c - 'A' + 10;
    } else {
      return false;
    }
    parts[i / 16] = (parts[i / 16] << 4) | static_cast<std::uint64_t>(v);
  }
  out->hi = parts[0];
  out->lo = parts[1];
  return true;
}

Digest digest_bytes(std::string_view bytes) {
  return Digest{hash_lane(bytes, 0x243f6a8885a308d3ULL),
                hash_lane(bytes, 0x13198a2e03707344ULL)};
}

Model Model::build(
    const LayoutGraph& layout_in, const InterlockingTable& table_in,
    const Modes& modes, const std::vector<InitialTrain>& initial,
    const std::vector<std::pair<std::string, std::vector<TrainId>>>&
        border_queues) {
  Model m;
  m.modes_ = modes;
  m.layout_ = layout_in;
  for (const auto& s : modes.removed_signals) {
    m.layout_ = remove_signal(m.layout_, s);
  }
  m.table_ = modes.flank ? table_in : strip_flank(table_in);
  const LayoutGraph& layout = m.layout_;
  const InterlockingTable& table = m.table_;

  if (table.routes.size() > kMaxRoutes) {
    throw ValidationError("at most 64 routes are supported");
  }
  m.tracks_ = layout.tracks;
  m.route_mask_bytes_ = mask_bytes(table.routes.size());

  m.derailer_on_track_.assign(m.tracks_.size(), -1);
  for (std::size_t d = 0; d < layout.derailers.size(); ++d) {
    m.derailer_on_track_[m.track_index(layout.derailers[d].on_track)] =
        static_cast<int>(d);
  }
  for (const auto& p : layout.points) {
    m.point_joint_.push_back(m.track_index(p.joint));
    m.point_legs_.push_back(
        {m.track_index(p.normal_leg), m.track_index(p.reverse_leg)});
  }

  for (const auto& s : layout.signals) {
    CompiledSignal cs;
    cs.id = s.id;
    cs.kind = s.kind;
    cs.behind = m.track_index(s.behind);
    cs.ahead = m.track_index(s.ahead);
    cs.facing = s.facing;
    m.signals_.push_back(std::move(cs));
  }
  for (std::size_t i = 0; i < layout.signals.size(); ++i) {
    if (layout.signals[i].chained_to) {
      m.signals_[i].chained_to = m.signal_index(*layout.signals[i].chained_to);
    }
  }

  std::size_t max_demands = 1;
  for (const auto& r : table.routes) {
    CompiledRoute cr;
    cr.id = r.id;
    cr.entry_signal = m.signal_index(r.entry_signal);
    if (r.exit_signal) cr.exit_signal = m.signal_index(*r.exit_signal);
    for (const auto& t : r.tracks) cr.tracks.push_back(m.track_index(t));
    auto add_demand = [&](const PointDemand& d, bool flank) {
      CompiledDemand cd;
      cd.flank = flank;
      cd.position = d.position;
      if (int p = m.point_index(d.device); p >= 0) {
        cd.kind = DeviceKind::kPoint;
        cd.device = p;
      } else if (int dr = m.derailer_index(d.device); dr >= 0) {
        cd.kind = DeviceKind::kDerailer;
        cd.device = dr;
      } else {
        throw ValidationError("route " + r.id + ": unknown device '" +
                              d.device + "'");
      }
      cr.demands.push_back(cd);
    };
    for (const auto& d : r.point_demands) add_demand(d, false);
    const FlankSpec& f = table.flank_of(r.id);
    for (const auto& d : f.points) add_demand(d, true);
    for (const auto& d : f.derailers_derail) {
      add_demand(PointDemand{d, Position::kNormal}, true);
    }
    if (cr.demands.size() > kMaxDemandsPerRoute) {
      throw ValidationError("route " + r.id + " has more than 64 demands");
    }
    max_demands = std::max(max_demands, cr.demands.size());
    for (std::size_t i = 0; i < cr.demands.size(); ++i) {
      if (cr.demands[i].position == Position::kNormal) {
        cr.normal_demands |= DemandMask{1} << i;
      } else {
        cr.reverse_demands |= DemandMask{1} << i;
      }
    }
    cr.approach = m.track_index(r.approach_track);
    for (const auto& t : r.release.clear_group) {
      cr.release_clear.push_back(m.track_index(t));
    }
    cr.release_occ_clear = m.track_index(r.release.occ_then_clear);
    cr.release_final = m.track_index(r.release.final_occ);
    for (const auto& t : f.tracks_clear) {
      cr.flank_tracks.push_back(m.track_index(t));
    }
    cr.aspect = r.aspect;
    m.routes_.push_back(std::move(cr));
  }
  m.demand_mask_bytes_ = mask_bytes(max_demands);
  for (std::size_t i = 0; i < table.routes.size(); ++i) {
    for (std::size_t j = 0; j < table.routes.size(); ++j) {
      if (conflicts_closed(table, table.routes[i].id, table.routes[j].id)) {
        m.routes_[i].conflicts |= RouteMask{1} << j;
      }
    }
    if (m.routes_[i].entry_signal >= 0) {
      m.signals_[m.routes_[i].entry_signal].routes.push_back(
          static_cast<int>(i));
    }
  }

  // Trains: initial occupancy first, then border queues in file order.
  std::set<std::string> train_ids;
  std::set<int> initial_tracks;
  for (const auto& it : initial) {
    int t = m.track_index(it.track);
    if (!initial_tracks.insert(t).second) {
      throw ValidationError("track " + it.track + " occupied twice initially");
    }
    if (it.train.empty() || !train_ids.insert(it.train).second) {
      throw ValidationError("duplicate train id '" + it.train + "'");
    }
    m.trains_.push_back(it.train);
  }
  m.initial_ = initial;

  for (const auto& b : layout.borders) {
    CompiledBorder cb;
    cb.id = b.id;
    cb.track = m.track_index(b.attached_track);
    cb.inbound = b.inbound;
    std::vector<TrainId> queue = b.arrival_queue;
    for (const auto& [id, q] : border_queues) {
      if (id == b.id) queue = q;
    }
    for (const auto& train : queue) {
      if (train.empty() || !train_ids.insert(train).second) {
        throw ValidationError("duplicate train id '" + train + "'");
      }
      m.trains_.push_back(train);
      cb.queue.push_back(static_cast<int>(m.trains_.size() - 1));
    }
    m.borders_.push_back(std::move(cb));
  }
  for (const auto& [id, q] : border_queues) {
    if (!layout.find_border(id)) {
      throw ValidationError("unknown border '" + id + "'");
    }
  }
  if (m.trains_.size() > 0x7fff) throw ValidationError("too many trains");

  m.moves_.resize(m.tracks_.size() * 2);
  for (std::size_t t = 0; t < m.tracks_.size(); ++t) {
    for (Direction dir : {Direction::kUp, Direction::kDown}) {
      auto& out = m.moves_[t * 2 + static_cast<std::size_t>(dir)];
      for (const auto& mv : moves_from(layout, m.tracks_[t], dir)) {
        CompiledMove cm;
        cm.kind = mv.kind;
        cm.to = mv.kind == MoveKind::kBorderExit ? -1 : m.track_index(mv.to);
        cm.front_signal =
            mv.front_signal ? m.signal_index(*mv.front_signal) : -1;
        cm.point = mv.point ? m.point_index(*mv.point) : -1;
        cm.leg = mv.leg;
        cm.facing = mv.facing;
        cm.border = mv.kind == MoveKind::kBorderExit
                        ? m.border_index(mv.border)
                        : -1;
        out.push_back(cm);
      }
    }
  }

  // Block sections behind each border.
  for (auto& b : m.borders_) {
    int t = b.track;
    std::set<int> seen;
    while (t >= 0 && seen.insert(t).second) {
      b.block_tracks.push_back(t);
      const auto& mv = m.moves(t, b.inbound);
      if (mv.size() != 1 || mv[0].kind == MoveKind::kBorderExit) break;
      if (mv[0].front_signal >= 0 &&
          m.signals_[mv[0].front_signal].kind != SignalKind::kWarner) {
        break;
      }
      t = mv[0].to;
    }
  }
  return m;
}

int Model::track_index(std::string_view id) const {
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (tracks_[i] == id) return static_cast<int>(i);
  }
  throw ValidationError("unknown track '" + std::string(id) + "'");
}

int Model::route_index(std::string_view id) const {
  int i = index_of(routes_, id,
                   [](const CompiledRoute& r) -> const std::string& {
                     return r.id;
                   });
  if (i < 0) throw ValidationError("unknown route '" + std::string(id) + "'");
  return i;
}

int Model::signal_index(std::string_view id) const {
  return index_of(signals_, id,
                  [](const CompiledSignal& s) -> const std::string& {
                    return s.id;
                  });
}

int Model::point_index(std::string_view id) const {
  return index_of(layout_.points, id,
                  [](const PointSpec& p) -> const std::string& {
                    return p.id;
                  });
}

int Model::derailer_index(std::string_view id) const {
  return index_of(layout_.derailers, id,
                  [](const DerailerSpec& d) -> const std::string& {
                    return d.id;
                  });
}

int Model::train_index(std::string_view id) const {
  for (std::size_t i = 0; i < trains_.size(); ++i) {
    if (trains_[i] == id) return static_cast<int>(i);
  }
  throw ValidationError("unknown train '" + std::string(id) + "'");
}

int Model::border_index(std::string_view id) const {
  return index_of(borders_, id,
                  [](const CompiledBorder& b) -> const std::string& {
                    return b.id;
                  });
}

Marking Model::initial_marking() const {
  Marking m;
  m.points.assign(layout_.points.size(), DeviceState{});
  m.derailers.assign(layout_.derailers.size(), DeviceState{});
  m.routes.assign(routes_.size(), RouteState{});
  m.trains.assign(trains_.size(), TrainState{});
  for (std::size_t i = 0; i < initial_.size(); ++i) {
    m.trains[i].phase = TrainPhase::kActive;
    m.trains[i].track = static_cast<std::int16_t>(track_index(initial_[i].track));
    m.trains[i].dir = initial_[i].dir;
  }
  for (const auto& b : borders_) {
    for (int t : b.queue) m.trains[t].dir = b.inbound;
  }
  m.queue_head.assign(borders_.size(), 0);
  m.departed.assign(borders_.size(), 0);
  return m;
}

std::string Model::encode(const Marking& m) const {
  std::string out;
  out.reserve(64);
  for (const auto* devices : {&m.points, &m.derailers}) {
    for (const auto& d : *devices) {
      out.push_back(static_cast<char>(d.position));
      put_uint(out, d.locked_by, route_mask_bytes_);
    }
  }
  for (const auto& r : m.routes) {
    out.push_back(static_cast<char>(static_cast<int>(r.status) |
                                    (static_cast<int>(r.stage) << 2) |
                                    (r.replaced ? 0x10 : 0)));
    put_uint(out, r.pending_normal, demand_mask_bytes_);
    put_uint(out, r.pending_reverse, demand_mask_bytes_);
  }
  put_uint(out, static_cast<std::uint16_t>(m.setting), 2);
  for (const auto& t : m.trains) {
    out.push_back(static_cast<char>(static_cast<int>(t.phase) |
                                    (static_cast<int>(t.dir) << 2) |
                                    (t.frozen ? 0x8 : 0)));
    put_uint(out, static_cast<std::uint16_t>(t.track), 2);
  }
  for (std::size_t b = 0; b < m.queue_head.size(); ++b) {
    put_uint(out, m.queue_head[b], 2);
    put_uint(out, m.departed[b], 2);
  }
  put_uint(out, m.accidents.size(), 2);
  for (const auto& a : m.accidents) {
    out.push_back(static_cast<char>(a.kind));
    put_uint(out, static_cast<std::uint16_t>(a.train_a), 2);
    put_uint(out, static_cast<std::uint16_t>(a.train_b), 2);
    put_uint(out, static_cast<std::uint16_t>(a.track), 2);
  }
  return out;
}

Marking Model::decode(std::string_view bytes) const {
  Reader in(bytes);
  Marking m;
  m.points.resize(layout_.points.size());
  m.derailers.resize(layout_.derailers.size());
  for (auto* devices : {&m.points, &m.derailers}) {
    for (auto& d : *devices) {
      d.position = static_cast<Position>(in.uint(1));
      d.locked_by = in.uint(route_mask_bytes_);
    }
  }
  m.routes.resize(routes_.size());
  for (auto& r : m.routes) {
    auto bits = in.uint(1);
    r.status = static_cast<RouteStatus>(bits & 0x3);
    r.stage = static_cast<ReleaseStage>((bits >> 2) & 0x3);
    r.replaced = (bits & 0x10) != 0;
    r.pending_normal = in.uint(demand_mask_bytes_);
    r.pending_reverse = in.uint(demand_mask_bytes_);
  }
  m.setting = static_cast<std::int16_t>(in.uint(2));
  m.trains.resize(trains_.size());
  for (auto& t : m.trains) {
    auto bits = in.uint(1);
    t.phase = static_cast<TrainPhase>(bits & 0x3);
    t.dir = static_cast<Direction>((bits >> 2) & 0x1);
    t.frozen = (bits & 0x8) != 0;
    t.track = static_cast<std::int16_t>(in.uint(2));
  }
  m.queue_head.resize(borders_.size());
  m.departed.resize(borders_.size());
  for (std::size_t b = 0; b < borders_.size(); ++b) {
    m.queue_head[b] = static_cast<std::uint16_t>(in.uint(2));
    m.departed[b] = static_cast<std::uint16_t>(in.uint(2));
  }
  std::size_t n = in.uint(2);
  m.accidents.resize(n);
  for (auto& a : m.accidents) {
    a.kind = static_cast<AccidentKind>(in.uint(1));
    a.train_a = static_cast<std::int16_t>(in.uint(2));
    a.train_b = static_cast<std::int16_t>(in.uint(2));
    a.track = static_cast<std::int16_t>(in.uint(2));
  }
  if (!in.done()) throw ValidationError("trailing bytes in marking encoding");
  return m;
}

Occupancy::Occupancy(const Model& model, const Marking& m)
    : first_(model.track_count(), -1), count_(model.track_count(), 0) {
  for (std::size_t i = 0; i < m.trains.size(); ++i) {
    const TrainState& t = m.trains[i];
    if (t.phase != TrainPhase::kActive) continue;
    if (count_[t.track]++ == 0) first_[t.track] = static_cast<int>(i);
  }
}

}  // namespace ilock
