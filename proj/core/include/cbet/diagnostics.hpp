#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cbet/counts.hpp"
#include "cbet/rewards.hpp"
#include "cbet/training.hpp"
#include "cbet/world.hpp"

namespace cbet {

// --- Chainworld diagnostic -------------------------------------------------
//
// Four-state chain: start A branches to B or D; B loops with C; D absorbs.
// The enumeration walks every action sequence at the given horizon (number of
// reward terms, initial-state observation included) with fresh per-episode
// counts and reports the undiscounted intrinsic return per distinct state
// trajectory. The learned-policy statistics come from an actual pre-training
// run under the requested reset policy.

struct ChainTrajectory {
    std::string states;  // e.g. "ABCBC"
    double intrinsic_return = 0.0;
};

struct ChainDiagnosticReport {
    std::vector<ChainTrajectory> trajectories;
    double bc_return = 0.0;  // best B-side trajectory
    double d_return = 0.0;   // best D-side trajectory
    Action greedy_at_start = Action::Done;
    double d_occupancy = 0.0;  // fraction of late-training steps spent in D
};

ChainDiagnosticReport chain_diagnostic(const ResetPolicy& resets, const RewardSpec& reward,
                                       int horizon, uint64_t master_seed,
                                       uint64_t train_steps);

// Enumeration only (no training); exact and fast.
std::vector<ChainTrajectory> chain_enumerate(const RewardSpec& reward, int horizon);

// --- Key-door reward-map fixture --------------------------------------------
//
// 5x5 gridworld holding one key and one (locked, purely decorative) door.
// Observations encode cell content as scalars: empty 0, key 5, door 8, agent
// 10; the heading is not observed, so pure turns produce no change. Counts
// come from a seeded uniform random walk over Left/Right/Forward/Pick; per
// episode the key position and agent start are reshuffled. Maps are then
// rendered on the canonical layout with the agent facing downward in every
// cell: reward of each action under post-increment counts.

constexpr int kFixtureSide = 5;
constexpr int kFixtureActions = 4;  // Left, Right, Forward, Pick

struct FixtureConfig {
    int episodes = 800;
    int episode_len = 40;
    uint64_t seed = 7;
    bool randomize_key = true;     // reshuffle the key each episode
    bool start_near_key = true;    // spawn in the key's neighborhood, else anywhere
};

struct RewardMap {
    // values[action][row*5+col]; NaN where the agent cannot stand.
    std::array<std::array<double, kFixtureSide * kFixtureSide>, kFixtureActions> values;
    int argmax_cell = -1;
    int argmax_action = -1;
};

struct FixtureReport {
    RewardMap cbet;
    RewardMap count_only;
    RewardMap l2_change;  // ||c||^2 / sqrt(N(s'))
    int key_cell = -1;
    int pick_cell = -1;  // the cell above the key
    double l2_forward_mean = 0.0;
    double l2_pick_mean = 0.0;
    uint64_t walk_picks = 0;
};

FixtureReport reward_map_fixture(const FixtureConfig& cfg);

// --- Reward-decay diagnostic -------------------------------------------------

struct DecayReport {
    std::vector<double> trend;  // windowed means of raw intrinsic rewards
    double first_window = 0.0;
    double last_window = 0.0;
    double last_over_first = 0.0;
};

DecayReport decay_diagnostic(EnvFamily family, const RewardSpec& reward,
                             const ResetPolicy& resets, uint64_t steps, size_t window,
                             uint64_t master_seed);

}  // namespace cbet
