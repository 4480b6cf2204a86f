#include "cbet/world.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "cbet/errors.hpp"

namespace cbet {

const char* action_name(Action a) {
    switch (a) {
        case Action::Left: return "left";
        case Action::Right: return "right";
        case Action::Forward: return "forward";
        case Action::Pick: return "pick";
        case Action::Drop: return "drop";
        case Action::Toggle: return "toggle";
        case Action::Done: return "done";
    }
    return "?";
}

Pos dir_vec(Dir d) {
    switch (d) {
        case Dir::N: return {-1, 0};
        case Dir::E: return {0, 1};
        case Dir::S: return {1, 0};
        case Dir::W: return {0, -1};
    }
    return {0, 0};
}

namespace {

struct FamilyInfo {
    EnvFamily id;
    const char* name;
    int horizon;
};

constexpr FamilyInfo kFamilies[] = {
    {EnvFamily::Unlock, "Unlock", 288},
    {EnvFamily::DoorKey8x8, "DoorKey8x8", 640},
    {EnvFamily::KeyCorridorS3R3, "KeyCorridorS3R3", 270},
    {EnvFamily::UnlockPickup, "UnlockPickup", 288},
    {EnvFamily::BlockedUnlockPickup, "BlockedUnlockPickup", 576},
    {EnvFamily::ObstructedMaze1Dlh, "ObstructedMaze1Dlh", 288},
    {EnvFamily::ObstructedMaze2Dlh, "ObstructedMaze2Dlh", 576},
    {EnvFamily::ObstructedMaze2Dlhb, "ObstructedMaze2Dlhb", 576},
    {EnvFamily::MultiRoomN6, "MultiRoomN6", 120},
    {EnvFamily::MultiRoomN12S10, "MultiRoomN12S10", 240},
    {EnvFamily::MultiRoomN4S5, "MultiRoomN4S5", 100},
    {EnvFamily::MultiRoomNoisyTV, "MultiRoomNoisyTV", 140},
    {EnvFamily::ChainWorld, "ChainWorld", 4},
    {EnvFamily::DoorKey5x5, "DoorKey5x5", 250},
    {EnvFamily::DoorKey6x6, "DoorKey6x6", 360},
};

const FamilyInfo& info(EnvFamily f) {
    for (const auto& fi : kFamilies)
        if (fi.id == f) return fi;
    throw ContractViolation("unknown environment family id");
}

bool passable(const Cell& c) {
    return c.kind == Kind::Empty || c.kind == Kind::Goal ||
           (c.kind == Kind::Door && c.door == DoorState::Open);
}

// ChainWorld embeds the 4-state chain on one interior row laid out as
// C B A D, so every legal move is a single-cell displacement.
constexpr Pos kChainC{1, 1};
constexpr Pos kChainB{1, 2};
constexpr Pos kChainA{1, 3};
constexpr Pos kChainD{1, 4};

void chain_move(WorldState& s, Action a) {
    if (a != Action::Left && a != Action::Right) return;
    const Pos p = s.agent_pos;
    if (p == kChainA) {
        s.agent_pos = (a == Action::Left) ? kChainB : kChainD;
    } else if (p == kChainB) {
        s.agent_pos = kChainC;
    } else if (p == kChainC) {
        s.agent_pos = kChainB;
    }
    // D is absorbing.
}

bool pickable(const WorldState& s, Pos p, const Cell& c) {
    if (c.kind == Kind::Key || c.kind == Kind::Ball) {
        // The NoisyTV ball is scenery and can never be carried.
        if (s.env_id == EnvFamily::MultiRoomNoisyTV && s.tv_ball_pos && *s.tv_ball_pos == p)
            return false;
        return true;
    }
    // A box still holding contents has to be toggled open, not carried.
    if (c.kind == Kind::Box) return !c.box_contents.has_value();
    return false;
}

}  // namespace

const char* family_name(EnvFamily f) { return info(f).name; }

std::optional<EnvFamily> family_from_name(const std::string& name) {
    for (const auto& fi : kFamilies)
        if (name == fi.name) return fi.id;
    return std::nullopt;
}

int family_horizon(EnvFamily f) { return info(f).horizon; }

bool goal_reached(const WorldState& s) {
    switch (s.goal.mode) {
        case GoalMode::None:
            return false;
        case GoalMode::ReachGoalCell:
            return s.at(s.agent_pos).kind == Kind::Goal;
        case GoalMode::OpenTargetDoor: {
            const Cell& c = s.at(s.goal.target_pos);
            return c.kind == Kind::Door && c.door == DoorState::Open;
        }
        case GoalMode::CarryTarget:
            return s.carried.has_value() && *s.carried == s.goal.target;
    }
    return false;
}

Transition step(const WorldState& state, Action action) {
    Transition tr;
    tr.action = action;
    tr.state_after = state;
    WorldState& s = tr.state_after;

    if (state.env_id == EnvFamily::ChainWorld) {
        chain_move(s, action);
    } else {
        const Pos front{s.agent_pos.row + dir_vec(s.agent_dir).row,
                        s.agent_pos.col + dir_vec(s.agent_dir).col};
        const bool front_ok = s.in_bounds(front);
        switch (action) {
            case Action::Left:
                s.agent_dir = static_cast<Dir>((static_cast<int>(s.agent_dir) + 3) % 4);
                break;
            case Action::Right:
                s.agent_dir = static_cast<Dir>((static_cast<int>(s.agent_dir) + 1) % 4);
                break;
            case Action::Forward:
                if (front_ok && passable(s.at(front))) s.agent_pos = front;
                break;
            case Action::Pick:
                if (front_ok && !s.carried) {
                    Cell& c = s.at(front);
                    if (pickable(s, front, c)) {
                        s.carried = Obj{c.kind, c.color};
                        c = Cell{};
                    }
                }
                break;
            case Action::Drop:
                if (front_ok && s.carried && s.at(front).kind == Kind::Empty) {
                    Cell& c = s.at(front);
                    c = Cell{};
                    c.kind = s.carried->kind;
                    c.color = s.carried->color;
                    s.carried.reset();
                }
                break;
            case Action::Toggle:
                if (front_ok) {
                    Cell& c = s.at(front);
                    if (c.kind == Kind::Door) {
                        if (c.door == DoorState::Locked) {
                            if (s.carried && s.carried->kind == Kind::Key &&
                                s.carried->color == c.color)
                                c.door = DoorState::Open;
                        } else if (c.door == DoorState::Closed) {
                            c.door = DoorState::Open;
                        } else {
                            c.door = DoorState::Closed;
                        }
                    } else if (c.kind == Kind::Box) {
                        const std::optional<Obj> contents = c.box_contents;
                        c = Cell{};
                        if (contents) {
                            c.kind = contents->kind;
                            c.color = contents->color;
                        }
                    }
                }
                break;
            case Action::Done:
                break;
        }
    }

    s.t += 1;
    if (goal_reached(s)) {
        tr.done = true;
        tr.done_reason = DoneReason::Solved;
        tr.extrinsic_reward =
            1.0 - 0.9 * (static_cast<double>(s.t) / static_cast<double>(s.T));
    } else if (s.t >= s.T) {
        tr.done = true;
        tr.done_reason = DoneReason::Timeout;
    }
    return tr;
}

void noisy_tv_effect(WorldState& state, Rng& rng) {
    if (state.env_id != EnvFamily::MultiRoomNoisyTV || !state.noisy_tv_enabled) return;
    if (!state.tv_ball_pos) return;
    Cell& ball = state.at(*state.tv_ball_pos);
    if (ball.kind != Kind::Ball) return;
    ball.color = static_cast<Color>(1 + rng.uniform_int(kNumColors));
}

std::string render_ascii(const WorldState& s) {
    std::string out;
    out.reserve(static_cast<size_t>(s.rows) * (s.cols + 1));
    for (int r = 0; r < s.rows; ++r) {
        for (int c = 0; c < s.cols; ++c) {
            const Cell& cell = s.at({r, c});
            char ch = '?';
            switch (cell.kind) {
                case Kind::Empty: ch = '.'; break;
                case Kind::Wall: ch = '#'; break;
                case Kind::Goal: ch = 'G'; break;
                case Kind::Key: ch = 'k'; break;
                case Kind::Ball: ch = 'o'; break;
                case Kind::Box: ch = 'x'; break;
                case Kind::Door:
                    ch = cell.door == DoorState::Open ? '/'
                       : cell.door == DoorState::Locked ? 'L' : '+';
                    break;
            }
            if (s.agent_pos == Pos{r, c}) {
                constexpr const char* arrows = "^>v<";
                ch = arrows[static_cast<int>(s.agent_dir)];
            }
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

std::string state_bytes(const WorldState& s) {
    std::string out;
    out.reserve(s.grid.size() * 4 + 32);
    auto push = [&out](uint8_t v) { out.push_back(static_cast<char>(v)); };
    auto push32 = [&out](uint32_t v) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    push32(static_cast<uint32_t>(s.rows));
    push32(static_cast<uint32_t>(s.cols));
    for (const Cell& c : s.grid) {
        push(static_cast<uint8_t>(c.kind));
        push(static_cast<uint8_t>(c.color));
        push(static_cast<uint8_t>(c.door));
        if (c.box_contents) {
            push(1);
            push(static_cast<uint8_t>(c.box_contents->kind));
            push(static_cast<uint8_t>(c.box_contents->color));
        } else {
            push(0);
        }
    }
    push32(static_cast<uint32_t>(s.agent_pos.row));
    push32(static_cast<uint32_t>(s.agent_pos.col));
    push(static_cast<uint8_t>(s.agent_dir));
    if (s.carried) {
        push(1);
        push(static_cast<uint8_t>(s.carried->kind));
        push(static_cast<uint8_t>(s.carried->color));
    } else {
        push(0);
    }
    push32(static_cast<uint32_t>(s.t));
    push32(static_cast<uint32_t>(s.T));
    push(static_cast<uint8_t>(s.env_id));
    return out;
}

std::vector<Pos> reachable_cells(const WorldState& s) {
    std::vector<char> seen(s.grid.size(), 0);
    std::deque<Pos> queue;
    auto idx = [&s](Pos p) { return static_cast<size_t>(p.row) * s.cols + p.col; };
    queue.push_back(s.agent_pos);
    seen[idx(s.agent_pos)] = 1;
    std::vector<Pos> out;
    while (!queue.empty()) {
        const Pos p = queue.front();
        queue.pop_front();
        out.push_back(p);
        for (int d = 0; d < 4; ++d) {
            const Pos v = dir_vec(static_cast<Dir>(d));
            const Pos q{p.row + v.row, p.col + v.col};
            if (!s.in_bounds(q) || seen[idx(q)]) continue;
            if (s.at(q).kind == Kind::Wall) continue;
            seen[idx(q)] = 1;
            queue.push_back(q);
        }
    }
    std::sort(out.begin(), out.end(), [](Pos a, Pos b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return out;
}

}  // namespace cbet
