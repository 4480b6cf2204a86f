#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cbet/rng.hpp"

namespace cbet {

enum class Kind : uint8_t {
    Empty = 1,
    Wall = 2,
    Door = 3,
    Key = 4,
    Ball = 5,
    Box = 6,
    Goal = 7,
};

enum class Color : uint8_t {
    None = 0,
    Red = 1,
    Green = 2,
    Blue = 3,
    Purple = 4,
    Yellow = 5,
    Grey = 6,
};

constexpr int kNumColors = 6;  // Red..Grey

enum class DoorState : uint8_t {
    None = 0,
    Open = 1,
    Closed = 2,
    Locked = 3,
};

enum class Action : uint8_t {
    Left = 0,
    Right = 1,
    Forward = 2,
    Pick = 3,
    Drop = 4,
    Toggle = 5,
    Done = 6,
};

constexpr int kNumActions = 7;
const char* action_name(Action a);

// Portable object descriptor: what sits in a cell, a box, or the agent's hands.
struct Obj {
    Kind kind = Kind::Empty;
    Color color = Color::None;

    bool operator==(const Obj&) const = default;
};

struct Cell {
    Kind kind = Kind::Empty;
    Color color = Color::None;
    DoorState door = DoorState::None;   // meaningful iff kind == Door
    std::optional<Obj> box_contents;    // meaningful iff kind == Box

    bool operator==(const Cell&) const = default;
};

struct Pos {
    int row = 0;
    int col = 0;

    bool operator==(const Pos&) const = default;
};

// N/E/S/W compass headings; Right rotates +1, Left rotates -1 (mod 4).
enum class Dir : uint8_t { N = 0, E = 1, S = 2, W = 3 };

Pos dir_vec(Dir d);

enum class EnvFamily : uint8_t {
    Unlock = 0,
    DoorKey8x8 = 1,
    KeyCorridorS3R3 = 2,
    UnlockPickup = 3,
    BlockedUnlockPickup = 4,
    ObstructedMaze1Dlh = 5,
    ObstructedMaze2Dlh = 6,
    ObstructedMaze2Dlhb = 7,
    MultiRoomN6 = 8,
    MultiRoomN12S10 = 9,
    MultiRoomN4S5 = 10,
    MultiRoomNoisyTV = 11,
    ChainWorld = 12,
    DoorKey5x5 = 13,
    DoorKey6x6 = 14,
};

const char* family_name(EnvFamily f);
std::optional<EnvFamily> family_from_name(const std::string& name);
int family_horizon(EnvFamily f);

// How an episode is considered solved.
enum class GoalMode : uint8_t {
    None = 0,        // never solved (ChainWorld, NoisyTV)
    ReachGoalCell,   // agent stands on the Goal cell
    OpenTargetDoor,  // the designated locked door is open
    CarryTarget,     // carried object equals the target descriptor
};

struct GoalSpec {
    GoalMode mode = GoalMode::None;
    Pos target_pos;          // OpenTargetDoor
    Obj target;              // CarryTarget

    bool operator==(const GoalSpec&) const = default;
};

struct WorldState {
    int rows = 0;
    int cols = 0;
    std::vector<Cell> grid;  // row-major, rows*cols
    Pos agent_pos;
    Dir agent_dir = Dir::N;
    std::optional<Obj> carried;
    int t = 0;      // steps taken this episode
    int T = 0;      // episode horizon
    EnvFamily env_id = EnvFamily::Unlock;
    uint64_t episode_seed = 0;
    GoalSpec goal;
    std::optional<Pos> tv_ball_pos;  // MultiRoomNoisyTV's color-changing ball
    bool noisy_tv_enabled = true;    // cleared for the noise-free twin

    Cell& at(Pos p) { return grid[static_cast<size_t>(p.row) * cols + p.col]; }
    const Cell& at(Pos p) const { return grid[static_cast<size_t>(p.row) * cols + p.col]; }
    bool in_bounds(Pos p) const {
        return p.row >= 0 && p.row < rows && p.col >= 0 && p.col < cols;
    }

    bool operator==(const WorldState&) const = default;
};

enum class DoneReason : uint8_t { None = 0, Solved = 1, Timeout = 2 };

struct Transition {
    Action action = Action::Done;
    WorldState state_after;
    double extrinsic_reward = 0.0;
    bool done = false;
    DoneReason done_reason = DoneReason::None;
};

// Procedurally generates a solvable episode instance. Pure function of
// (family, episode_seed); throws GenerationFailed if no solvable layout is
// found within the retry budget.
WorldState generate(EnvFamily family, uint64_t episode_seed);

// Applies one action. Invalid actions are lawful no-ops; the step clock
// always advances. Never throws.
Transition step(const WorldState& state, Action action);

// Resamples the designated ball's color uniformly. Callers invoke this after
// every Drop action in MultiRoomNoisyTV (regardless of the drop's success),
// drawing from a dedicated rng stream.
void noisy_tv_effect(WorldState& state, Rng& rng);

bool goal_reached(const WorldState& state);

// One char per cell, agent shown as <^>v. Used by golden tests and the CLI.
std::string render_ascii(const WorldState& state);

// Canonical byte serialization (determinism checks, solver dedup).
std::string state_bytes(const WorldState& state);

// Scripted per-family solver. Returns the action sequence that solves the
// instance (empty optional if it cannot). For goal-free families it instead
// verifies that every room is reachable.
std::optional<std::vector<Action>> scripted_solution(const WorldState& start);

// Cells an agent could ever stand on (doors counted as passable since they
// can be opened). Used by coverage metrics.
std::vector<Pos> reachable_cells(const WorldState& state);

}  // namespace cbet
