#ifndef ILOCK_MOTION_HPP_
#define ILOCK_MOTION_HPP_

#include <string>
#include <vector>

#include "kernel.hpp"
#include "model.hpp"

namespace ilock {

// A move instance names the train and an index into
// model.moves(train.track, train.dir).
bool move_enabled(const Model& model, const Marking& m, int train,
                  int template_index);

// Appends every enabled move and spawn, trains first, then borders.
void enabled_moves(const Model& model, const Marking& m, const Occupancy& occ,
                   std::vector<TransitionInstance>* out);

// Moves into occupied tracks fire into accident markings; the trains involved
// are frozen there.
Marking fire_move(const Model& model, const Marking& m, const Occupancy& occ,
                  int train, int template_index);

bool spawn_enabled(const Model& model, const Marking& m, const Occupancy& occ,
                   int border);
Marking fire_spawn(const Model& model, const Marking& m, int border);

// Human-readable form of a move or spawn fired from `m`.
std::string describe_motion(const Model& model, const Marking& m,
                            const TransitionInstance& t);

}  // namespace ilock

#endif  // ILOCK_MOTION_HPP_
