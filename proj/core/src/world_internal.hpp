#pragma once

#include "cbet/world.hpp"

namespace cbet::detail {

inline bool cell_passable(const Cell& c) {
    return c.kind == Kind::Empty || c.kind == Kind::Goal ||
           (c.kind == Kind::Door && c.door == DoorState::Open);
}

// Builds one family instance from a per-attempt rng. Solvability is checked
// by the caller (generate), which retries with derived seeds.
WorldState build_layout(EnvFamily family, uint64_t episode_seed, Rng& rng);

}  // namespace cbet::detail
