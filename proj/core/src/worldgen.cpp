#include <algorithm>
#include <vector>

#include "cbet/errors.hpp"
#include "cbet/world.hpp"
#include "world_internal.hpp"

namespace cbet {
namespace detail {
namespace {

Color random_color(Rng& rng) {
    return static_cast<Color>(1 + rng.uniform_int(kNumColors));
}

Color random_color_except(Rng& rng, Color avoid) {
    Color c = random_color(rng);
    while (c == avoid) c = random_color(rng);
    return c;
}

Dir random_dir(Rng& rng) { return static_cast<Dir>(rng.uniform_int(4)); }

Cell wall_cell() {
    Cell c;
    c.kind = Kind::Wall;
    c.color = Color::Grey;
    return c;
}

Cell door_cell(Color color, DoorState state) {
    Cell c;
    c.kind = Kind::Door;
    c.color = color;
    c.door = state;
    return c;
}

Cell obj_cell(Kind kind, Color color) {
    Cell c;
    c.kind = kind;
    c.color = color;
    return c;
}

Cell goal_cell() {
    Cell c;
    c.kind = Kind::Goal;
    c.color = Color::Green;
    return c;
}

WorldState blank(EnvFamily family, uint64_t seed, int rows, int cols) {
    WorldState s;
    s.rows = rows;
    s.cols = cols;
    s.grid.assign(static_cast<size_t>(rows) * cols, Cell{});
    s.env_id = family;
    s.episode_seed = seed;
    s.T = family_horizon(family);
    return s;
}

void border_walls(WorldState& s) {
    for (int r = 0; r < s.rows; ++r) {
        s.at({r, 0}) = wall_cell();
        s.at({r, s.cols - 1}) = wall_cell();
    }
    for (int c = 0; c < s.cols; ++c) {
        s.at({0, c}) = wall_cell();
        s.at({s.rows - 1, c}) = wall_cell();
    }
}

void vwall(WorldState& s, int col, int r0, int r1) {
    for (int r = r0; r <= r1; ++r) s.at({r, col}) = wall_cell();
}

// Uniform over empty cells of the rectangle [r0..r1]x[c0..c1].
Pos place_random(WorldState& s, Rng& rng, const Cell& cell, int r0, int r1, int c0, int c1) {
    std::vector<Pos> free;
    for (int r = r0; r <= r1; ++r)
        for (int c = c0; c <= c1; ++c)
            if (s.at({r, c}).kind == Kind::Empty) free.push_back({r, c});
    if (free.empty()) throw GenerationFailed("no free cell in placement region");
    const Pos p = free[rng.uniform_int(free.size())];
    if (cell.kind != Kind::Empty) s.at(p) = cell;
    return p;
}

void spawn_agent(WorldState& s, Rng& rng, int r0, int r1, int c0, int c1) {
    s.agent_pos = place_random(s, rng, Cell{}, r0, r1, c0, c1);
    s.agent_dir = random_dir(rng);
}

// --- Two-room layouts (Unlock / UnlockPickup / BlockedUnlockPickup / ObstructedMaze1Dlh) ---
// 6x11 grid, vertical dividing wall at col 5, rooms span cols 1..4 and 6..9.

struct TwoRoom {
    WorldState s;
    Pos door;
    Color door_color;
};

TwoRoom two_room_base(EnvFamily family, uint64_t seed, Rng& rng) {
    TwoRoom tr{blank(family, seed, 6, 11), {}, random_color(rng)};
    border_walls(tr.s);
    vwall(tr.s, 5, 1, 4);
    tr.door = {1 + static_cast<int>(rng.uniform_int(4)), 5};
    tr.s.at(tr.door) = door_cell(tr.door_color, DoorState::Locked);
    return tr;
}

WorldState gen_unlock(uint64_t seed, Rng& rng) {
    TwoRoom tr = two_room_base(EnvFamily::Unlock, seed, rng);
    place_random(tr.s, rng, obj_cell(Kind::Key, tr.door_color), 1, 4, 1, 4);
    spawn_agent(tr.s, rng, 1, 4, 1, 4);
    tr.s.goal.mode = GoalMode::OpenTargetDoor;
    tr.s.goal.target_pos = tr.door;
    return tr.s;
}

WorldState gen_unlock_pickup(EnvFamily family, uint64_t seed, Rng& rng) {
    TwoRoom tr = two_room_base(family, seed, rng);
    if (family == EnvFamily::BlockedUnlockPickup) {
        const Pos blocker{tr.door.row, tr.door.col - 1};
        tr.s.at(blocker) = obj_cell(Kind::Ball, random_color(rng));
    }
    place_random(tr.s, rng, obj_cell(Kind::Key, tr.door_color), 1, 4, 1, 4);
    const Color box_color = random_color(rng);
    place_random(tr.s, rng, obj_cell(Kind::Box, box_color), 1, 4, 6, 9);
    spawn_agent(tr.s, rng, 1, 4, 1, 4);
    tr.s.goal.mode = GoalMode::CarryTarget;
    tr.s.goal.target = Obj{Kind::Box, box_color};
    return tr.s;
}

WorldState gen_obstructed_1d(uint64_t seed, Rng& rng) {
    TwoRoom tr = two_room_base(EnvFamily::ObstructedMaze1Dlh, seed, rng);
    Cell box = obj_cell(Kind::Box, Color::Grey);
    box.box_contents = Obj{Kind::Key, tr.door_color};
    place_random(tr.s, rng, box, 1, 4, 1, 4);
    const Color ball_color = random_color(rng);
    place_random(tr.s, rng, obj_cell(Kind::Ball, ball_color), 1, 4, 6, 9);
    spawn_agent(tr.s, rng, 1, 4, 1, 4);
    tr.s.goal.mode = GoalMode::CarryTarget;
    tr.s.goal.target = Obj{Kind::Ball, ball_color};
    return tr.s;
}

// --- Three rooms in a row, two locked doors, keys hidden in boxes ---
// 6x16 grid, dividing walls at cols 5 and 10.

WorldState gen_obstructed_2d(EnvFamily family, uint64_t seed, Rng& rng) {
    WorldState s = blank(family, seed, 6, 16);
    border_walls(s);
    vwall(s, 5, 1, 4);
    vwall(s, 10, 1, 4);

    const Color c1 = random_color(rng);
    const Color c2 = random_color_except(rng, c1);
    const Pos door1{1 + static_cast<int>(rng.uniform_int(4)), 5};
    const Pos door2{1 + static_cast<int>(rng.uniform_int(4)), 10};
    s.at(door1) = door_cell(c1, DoorState::Locked);
    s.at(door2) = door_cell(c2, DoorState::Locked);

    const Color ball_color = random_color(rng);
    if (family == EnvFamily::ObstructedMaze2Dlhb) {
        s.at({door1.row, door1.col - 1}) = obj_cell(Kind::Ball, random_color_except(rng, ball_color));
        s.at({door2.row, door2.col - 1}) = obj_cell(Kind::Ball, random_color_except(rng, ball_color));
    }

    Cell box1 = obj_cell(Kind::Box, Color::Grey);
    box1.box_contents = Obj{Kind::Key, c1};
    place_random(s, rng, box1, 1, 4, 1, 4);
    Cell box2 = obj_cell(Kind::Box, Color::Grey);
    box2.box_contents = Obj{Kind::Key, c2};
    place_random(s, rng, box2, 1, 4, 6, 9);

    place_random(s, rng, obj_cell(Kind::Ball, ball_color), 1, 4, 11, 14);

    spawn_agent(s, rng, 1, 4, 1, 4);
    s.goal.mode = GoalMode::CarryTarget;
    s.goal.target = Obj{Kind::Ball, ball_color};
    return s;
}

// --- KeyCorridorS3R3: 7x7, vertical corridor at col 3, three 1x1 rooms per side ---

WorldState gen_key_corridor(uint64_t seed, Rng& rng) {
    WorldState s = blank(EnvFamily::KeyCorridorS3R3, seed, 7, 7);
    border_walls(s);
    vwall(s, 2, 1, 5);
    vwall(s, 4, 1, 5);
    s.at({2, 1}) = wall_cell();
    s.at({4, 1}) = wall_cell();
    s.at({2, 5}) = wall_cell();
    s.at({4, 5}) = wall_cell();

    const int ball_room = static_cast<int>(rng.uniform_int(3));  // right rooms, rows 1/3/5
    const int key_room = static_cast<int>(rng.uniform_int(3));   // left rooms
    const Color lock_color = random_color(rng);
    const Color ball_color = random_color(rng);

    for (int i = 0; i < 3; ++i) {
        const int row = 1 + 2 * i;
        const DoorState right_state = (i == ball_room) ? DoorState::Locked : DoorState::Closed;
        const Color right_color =
            (i == ball_room) ? lock_color : random_color_except(rng, lock_color);
        s.at({row, 4}) = door_cell(right_color, right_state);
        s.at({row, 2}) = door_cell(random_color_except(rng, lock_color), DoorState::Closed);
    }
    s.at({1 + 2 * ball_room, 5}) = obj_cell(Kind::Ball, ball_color);
    s.at({1 + 2 * key_room, 1}) = obj_cell(Kind::Key, lock_color);

    spawn_agent(s, rng, 1, 5, 3, 3);
    s.goal.mode = GoalMode::CarryTarget;
    s.goal.target = Obj{Kind::Ball, ball_color};
    return s;
}

// --- DoorKey: nxn grid split by a vertical wall, goal at bottom right ---

WorldState gen_door_key(EnvFamily family, int n, uint64_t seed, Rng& rng) {
    WorldState s = blank(family, seed, n, n);
    border_walls(s);
    const int split = 2 + static_cast<int>(rng.uniform_int(n - 4));  // col in [2, n-3]
    vwall(s, split, 1, n - 2);
    const Color color = Color::Yellow;  // DoorKey's door and key are always yellow
    const Pos door{1 + static_cast<int>(rng.uniform_int(n - 2)), split};
    s.at(door) = door_cell(color, DoorState::Locked);
    s.at({n - 2, n - 2}) = goal_cell();
    place_random(s, rng, obj_cell(Kind::Key, color), 1, n - 2, 1, split - 1);
    spawn_agent(s, rng, 1, n - 2, 1, split - 1);
    s.goal.mode = GoalMode::ReachGoalCell;
    return s;
}

// --- MultiRoom: chain of walled rooms connected by closed, unlocked doors ---

struct RoomRect {
    int top, left, h, w;  // includes the wall ring
    int bottom() const { return top + h - 1; }
    int right() const { return left + w - 1; }
};

bool interiors_overlap(const RoomRect& a, const RoomRect& b) {
    // Rectangles may share a wall line but nothing more.
    return a.left < b.right() && b.left < a.right() && a.top < b.bottom() && b.top < a.bottom();
}

struct MultiRoomPlan {
    std::vector<RoomRect> rooms;
    std::vector<Pos> doors;  // doors[i] joins rooms[i] and rooms[i+1]
};

std::optional<MultiRoomPlan> plan_multiroom(Rng& rng, int num_rooms, int min_size,
                                            int max_size, int canvas) {
    MultiRoomPlan plan;
    auto room_size = [&] { return min_size + static_cast<int>(rng.uniform_int(max_size - min_size + 1)); };

    RoomRect first{0, 0, room_size(), room_size()};
    first.top = 1 + static_cast<int>(rng.uniform_int(canvas - first.h - 1));
    first.left = 1 + static_cast<int>(rng.uniform_int(canvas - first.w - 1));
    plan.rooms.push_back(first);

    while (static_cast<int>(plan.rooms.size()) < num_rooms) {
        const RoomRect& prev = plan.rooms.back();
        bool placed = false;
        for (int attempt = 0; attempt < 12 && !placed; ++attempt) {
            const Dir d = random_dir(rng);
            RoomRect next{0, 0, room_size(), room_size()};
            // Offset range keeps at least one shared interior cell for the door:
            // next.top in [prev.top + 3 - next.h, prev.top + prev.h - 3] (rows),
            // and the symmetric range for columns.
            const int row_span = prev.h + next.h - 5;
            const int col_span = prev.w + next.w - 5;
            switch (d) {
                case Dir::E:
                    next.left = prev.right();
                    next.top = prev.top + 3 - next.h + static_cast<int>(rng.uniform_int(row_span));
                    break;
                case Dir::W:
                    next.left = prev.left - next.w + 1;
                    next.top = prev.top + 3 - next.h + static_cast<int>(rng.uniform_int(row_span));
                    break;
                case Dir::S:
                    next.top = prev.bottom();
                    next.left = prev.left + 3 - next.w + static_cast<int>(rng.uniform_int(col_span));
                    break;
                case Dir::N:
                    next.top = prev.top - next.h + 1;
                    next.left = prev.left + 3 - next.w + static_cast<int>(rng.uniform_int(col_span));
                    break;
            }
            if (next.top < 0 || next.left < 0 || next.bottom() >= canvas || next.right() >= canvas)
                continue;
            bool bad = false;
            for (const RoomRect& r : plan.rooms)
                if (interiors_overlap(r, next)) { bad = true; break; }
            if (bad) continue;

            // Shared wall segment with door candidates interior to both rooms.
            std::vector<Pos> candidates;
            if (d == Dir::E || d == Dir::W) {
                const int wall_col = (d == Dir::E) ? prev.right() : prev.left;
                const int r0 = std::max(prev.top + 1, next.top + 1);
                const int r1 = std::min(prev.bottom() - 1, next.bottom() - 1);
                for (int r = r0; r <= r1; ++r) candidates.push_back({r, wall_col});
            } else {
                const int wall_row = (d == Dir::S) ? prev.bottom() : prev.top;
                const int c0 = std::max(prev.left + 1, next.left + 1);
                const int c1 = std::min(prev.right() - 1, next.right() - 1);
                for (int c = c0; c <= c1; ++c) candidates.push_back({wall_row, c});
            }
            if (candidates.empty()) continue;
            plan.doors.push_back(candidates[rng.uniform_int(candidates.size())]);
            plan.rooms.push_back(next);
            placed = true;
        }
        if (!placed) return std::nullopt;
    }
    return plan;
}

WorldState gen_multiroom(EnvFamily family, uint64_t seed, Rng& rng, int num_rooms,
                         int min_size, int max_size) {
    const int canvas = (family == EnvFamily::MultiRoomN12S10) ? 34 : 25;
    const auto plan = plan_multiroom(rng, num_rooms, min_size, max_size, canvas);
    if (!plan) throw GenerationFailed("multiroom placement failed");

    int top = canvas, left = canvas, bottom = 0, right = 0;
    for (const RoomRect& r : plan->rooms) {
        top = std::min(top, r.top);
        left = std::min(left, r.left);
        bottom = std::max(bottom, r.bottom());
        right = std::max(right, r.right());
    }

    WorldState s = blank(family, seed, bottom - top + 1, right - left + 1);
    for (Cell& c : s.grid) c = wall_cell();
    for (const RoomRect& r : plan->rooms)
        for (int rr = r.top + 1; rr < r.bottom(); ++rr)
            for (int cc = r.left + 1; cc < r.right(); ++cc)
                s.at({rr - top, cc - left}) = Cell{};
    for (const Pos& d : plan->doors)
        s.at({d.row - top, d.col - left}) = door_cell(random_color(rng), DoorState::Closed);

    const RoomRect& first = plan->rooms.front();
    const RoomRect& last = plan->rooms.back();
    if (family == EnvFamily::MultiRoomNoisyTV) {
        s.goal.mode = GoalMode::None;
        spawn_agent(s, rng, first.top + 1 - top, first.bottom() - 1 - top,
                    first.left + 1 - left, first.right() - 1 - left);
        const Pos ball = place_random(s, rng, obj_cell(Kind::Ball, random_color(rng)),
                                      first.top + 1 - top, first.bottom() - 1 - top,
                                      first.left + 1 - left, first.right() - 1 - left);
        s.tv_ball_pos = ball;
    } else {
        place_random(s, rng, goal_cell(), last.top + 1 - top, last.bottom() - 1 - top,
                     last.left + 1 - left, last.right() - 1 - left);
        spawn_agent(s, rng, first.top + 1 - top, first.bottom() - 1 - top,
                    first.left + 1 - left, first.right() - 1 - left);
        s.goal.mode = GoalMode::ReachGoalCell;
    }
    return s;
}

WorldState gen_chain(uint64_t seed) {
    WorldState s = blank(EnvFamily::ChainWorld, seed, 3, 6);
    border_walls(s);
    s.agent_pos = {1, 3};  // state A; B at (1,2), C at (1,1), D at (1,4)
    s.agent_dir = Dir::N;
    s.goal.mode = GoalMode::None;
    return s;
}

}  // namespace

WorldState build_layout(EnvFamily family, uint64_t episode_seed, Rng& rng) {
    switch (family) {
        case EnvFamily::Unlock:
            return gen_unlock(episode_seed, rng);
        case EnvFamily::DoorKey8x8:
            return gen_door_key(family, 8, episode_seed, rng);
        case EnvFamily::DoorKey5x5:
            return gen_door_key(family, 5, episode_seed, rng);
        case EnvFamily::DoorKey6x6:
            return gen_door_key(family, 6, episode_seed, rng);
        case EnvFamily::KeyCorridorS3R3:
            return gen_key_corridor(episode_seed, rng);
        case EnvFamily::UnlockPickup:
        case EnvFamily::BlockedUnlockPickup:
            return gen_unlock_pickup(family, episode_seed, rng);
        case EnvFamily::ObstructedMaze1Dlh:
            return gen_obstructed_1d(episode_seed, rng);
        case EnvFamily::ObstructedMaze2Dlh:
        case EnvFamily::ObstructedMaze2Dlhb:
            return gen_obstructed_2d(family, episode_seed, rng);
        case EnvFamily::MultiRoomN6:
            return gen_multiroom(family, episode_seed, rng, 6, 4, 10);
        case EnvFamily::MultiRoomN12S10:
            return gen_multiroom(family, episode_seed, rng, 12, 4, 10);
        case EnvFamily::MultiRoomN4S5:
            return gen_multiroom(family, episode_seed, rng, 4, 4, 5);
        case EnvFamily::MultiRoomNoisyTV:
            return gen_multiroom(family, episode_seed, rng, 7, 4, 4);
        case EnvFamily::ChainWorld:
            return gen_chain(episode_seed);
    }
    throw ContractViolation("unknown environment family id");
}

}  // namespace detail

WorldState generate(EnvFamily family, uint64_t episode_seed) {
    constexpr int kRetryBudget = 24;
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        Rng rng(mix_seed(episode_seed, 0xC0FFEEULL + attempt));
        WorldState candidate;
        try {
            candidate = detail::build_layout(family, episode_seed, rng);
        } catch (const GenerationFailed&) {
            continue;
        }
        if (scripted_solution(candidate)) return candidate;
    }
    throw GenerationFailed("no solvable " + std::string(family_name(family)) +
                           " layout for seed " + std::to_string(episode_seed));
}

}  // namespace cbet
