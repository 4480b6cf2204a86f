#include <algorithm>
#include <deque>
#include <functional>
#include <vector>

#include "cbet/world.hpp"
#include "world_internal.hpp"

namespace cbet {
namespace {

using detail::cell_passable;

Pos front_of(Pos p, Dir d) {
    const Pos v = dir_vec(d);
    return {p.row + v.row, p.col + v.col};
}

// Shortest action sequence (Left/Right/Forward) from the agent's pose to any
// pose accepted by the predicate. Plans on the current grid only.
std::optional<std::vector<Action>> plan(const WorldState& s,
                                        const std::function<bool(Pos, Dir)>& accept) {
    if (accept(s.agent_pos, s.agent_dir)) return std::vector<Action>{};
    const int n = s.rows * s.cols * 4;
    auto id = [&s](Pos p, Dir d) {
        return (p.row * s.cols + p.col) * 4 + static_cast<int>(d);
    };
    std::vector<int> parent(n, -2);
    std::vector<Action> via(n, Action::Done);
    std::deque<int> queue;
    const int start = id(s.agent_pos, s.agent_dir);
    parent[start] = -1;
    queue.push_back(start);
    int found = -1;
    while (!queue.empty() && found < 0) {
        const int cur = queue.front();
        queue.pop_front();
        const Dir d = static_cast<Dir>(cur % 4);
        const Pos p{(cur / 4) / s.cols, (cur / 4) % s.cols};
        const auto expand = [&](Pos np, Dir nd, Action a) {
            const int nid = id(np, nd);
            if (parent[nid] != -2) return;
            parent[nid] = cur;
            via[nid] = a;
            if (accept(np, nd)) {
                found = nid;
                return;
            }
            queue.push_back(nid);
        };
        expand(p, static_cast<Dir>((static_cast<int>(d) + 3) % 4), Action::Left);
        if (found >= 0) break;
        expand(p, static_cast<Dir>((static_cast<int>(d) + 1) % 4), Action::Right);
        if (found >= 0) break;
        const Pos f = front_of(p, d);
        if (s.in_bounds(f) && cell_passable(s.at(f))) expand(f, d, Action::Forward);
    }
    if (found < 0) return std::nullopt;
    std::vector<Action> path;
    for (int cur = found; parent[cur] >= 0; cur = parent[cur]) path.push_back(via[cur]);
    std::reverse(path.begin(), path.end());
    return path;
}

std::optional<std::vector<Action>> plan_to_face(const WorldState& s, Pos target) {
    return plan(s, [&s, target](Pos p, Dir d) {
        const Pos f = front_of(p, d);
        return s.in_bounds(f) && f == target;
    });
}

std::optional<std::vector<Action>> plan_to_cell(const WorldState& s, Pos target) {
    return plan(s, [target](Pos p, Dir) { return p == target; });
}

struct Ctx {
    WorldState s;
    std::vector<Action> actions;
    bool solved = false;
    bool dead = false;

    bool apply(Action a) {
        if (solved) return true;
        if (dead) return false;
        Transition tr = step(s, a);
        actions.push_back(a);
        s = std::move(tr.state_after);
        if (tr.done_reason == DoneReason::Solved) solved = true;
        else if (tr.done) dead = true;
        return !dead;
    }

    bool run(const std::vector<Action>& seq) {
        for (Action a : seq)
            if (!apply(a)) return false;
        return true;
    }
};

std::vector<Pos> find_kind(const WorldState& s, Kind k) {
    std::vector<Pos> out;
    for (int r = 0; r < s.rows; ++r)
        for (int c = 0; c < s.cols; ++c)
            if (s.at({r, c}).kind == k) out.push_back({r, c});
    return out;
}

std::vector<Pos> closed_unlocked_doors(const WorldState& s) {
    std::vector<Pos> out;
    for (Pos p : find_kind(s, Kind::Door))
        if (s.at(p).door == DoorState::Closed) out.push_back(p);
    return out;
}

std::vector<Pos> locked_doors(const WorldState& s) {
    std::vector<Pos> out;
    for (Pos p : find_kind(s, Kind::Door))
        if (s.at(p).door == DoorState::Locked) out.push_back(p);
    return out;
}

// Reaches an accepted pose, opening closed (unlocked) doors along the way.
bool reach(Ctx& ctx, const std::function<bool(Pos, Dir)>& accept) {
    for (int guard = 0; guard < 24; ++guard) {
        if (ctx.solved) return true;
        if (auto path = plan(ctx.s, accept)) return ctx.run(*path);
        bool opened = false;
        for (Pos door : closed_unlocked_doors(ctx.s)) {
            if (auto path = plan_to_face(ctx.s, door)) {
                if (!ctx.run(*path)) return false;
                if (!ctx.apply(Action::Toggle)) return false;
                opened = true;
                break;
            }
        }
        if (!opened) return false;
    }
    return false;
}

bool reach_face(Ctx& ctx, Pos target) {
    return reach(ctx, [&ctx, target](Pos p, Dir d) {
        return ctx.s.in_bounds(front_of(p, d)) && front_of(p, d) == target;
    });
}

bool reach_cell(Ctx& ctx, Pos target) {
    return reach(ctx, [target](Pos p, Dir) { return p == target; });
}

int dead_end_score(const WorldState& s, Pos p) {
    int walls = 0;
    for (int d = 0; d < 4; ++d) {
        const Pos q = front_of(p, static_cast<Dir>(d));
        if (!s.in_bounds(q) || s.at(q).kind == Kind::Wall) ++walls;
    }
    return walls;
}

// Drops the carried object on a cell that keeps the rest of the plan viable.
// Prefers dead-end cells so corridors stay clear.
bool safe_drop(Ctx& ctx, const std::function<bool(const WorldState&)>& post) {
    if (ctx.solved) return true;
    if (!ctx.s.carried) return true;

    struct Candidate {
        Pos pose;
        Dir dir;
        int score;
        size_t cost;
    };
    std::vector<Candidate> candidates;
    for (int r = 0; r < ctx.s.rows; ++r) {
        for (int c = 0; c < ctx.s.cols; ++c) {
            for (int d = 0; d < 4; ++d) {
                const Pos p{r, c};
                const Dir dir = static_cast<Dir>(d);
                const Pos f = front_of(p, dir);
                if (!ctx.s.in_bounds(f) || ctx.s.at(f).kind != Kind::Empty) continue;
                if (!cell_passable(ctx.s.at(p)) && p != ctx.s.agent_pos) continue;
                auto path = plan(ctx.s, [p, dir](Pos pp, Dir dd) { return pp == p && dd == dir; });
                if (!path) continue;
                candidates.push_back({p, dir, dead_end_score(ctx.s, f), path->size()});
            }
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.cost < b.cost;
    });
    for (const Candidate& cand : candidates) {
        Ctx trial = ctx;
        const auto path = plan(trial.s, [&cand](Pos p, Dir d) { return p == cand.pose && d == cand.dir; });
        if (!path || !trial.run(*path)) continue;
        if (!trial.apply(Action::Drop)) continue;
        if (trial.s.carried) continue;
        if (trial.solved || post(trial.s)) {
            ctx = std::move(trial);
            return true;
        }
    }
    return false;
}

bool has_plan_to_face(const WorldState& s, Pos target) {
    return plan_to_face(s, target).has_value();
}

bool solve_unlock(Ctx& ctx) {
    const auto keys = find_kind(ctx.s, Kind::Key);
    if (keys.empty()) return false;
    if (!reach_face(ctx, keys.front()) || !ctx.apply(Action::Pick)) return false;
    return reach_face(ctx, ctx.s.goal.target_pos) && ctx.apply(Action::Toggle);
}

bool solve_door_key(Ctx& ctx) {
    const auto keys = find_kind(ctx.s, Kind::Key);
    const auto doors = locked_doors(ctx.s);
    const auto goals = find_kind(ctx.s, Kind::Goal);
    if (keys.empty() || doors.empty() || goals.empty()) return false;
    if (!reach_face(ctx, keys.front()) || !ctx.apply(Action::Pick)) return false;
    if (!reach_face(ctx, doors.front()) || !ctx.apply(Action::Toggle)) return false;
    return reach_cell(ctx, goals.front());
}

bool solve_key_corridor(Ctx& ctx) {
    const auto keys = find_kind(ctx.s, Kind::Key);
    const auto doors = locked_doors(ctx.s);
    const auto balls = find_kind(ctx.s, Kind::Ball);
    if (keys.empty() || doors.empty() || balls.empty()) return false;
    const Pos ball = balls.front();
    if (!reach_face(ctx, keys.front()) || !ctx.apply(Action::Pick)) return false;
    if (!reach_face(ctx, doors.front()) || !ctx.apply(Action::Toggle)) return false;
    if (!safe_drop(ctx, [ball](const WorldState& w) { return has_plan_to_face(w, ball); }))
        return false;
    return reach_face(ctx, ball) && ctx.apply(Action::Pick);
}

bool move_blocker_if_any(Ctx& ctx, Pos door, Pos next_objective) {
    const Pos blocker{door.row, door.col - 1};
    if (!ctx.s.in_bounds(blocker) || ctx.s.at(blocker).kind != Kind::Ball) return true;
    if (!reach_face(ctx, blocker) || !ctx.apply(Action::Pick)) return false;
    return safe_drop(ctx, [next_objective, door](const WorldState& w) {
        return has_plan_to_face(w, next_objective) && has_plan_to_face(w, door);
    });
}

bool solve_unlock_pickup(Ctx& ctx) {
    const auto keys = find_kind(ctx.s, Kind::Key);
    const auto doors = locked_doors(ctx.s);
    const auto boxes = find_kind(ctx.s, Kind::Box);
    if (keys.empty() || doors.empty() || boxes.empty()) return false;
    const Pos key = keys.front(), door = doors.front(), box = boxes.front();
    if (!move_blocker_if_any(ctx, door, key)) return false;
    if (!reach_face(ctx, key) || !ctx.apply(Action::Pick)) return false;
    if (!reach_face(ctx, door) || !ctx.apply(Action::Toggle)) return false;
    if (!safe_drop(ctx, [box](const WorldState& w) { return has_plan_to_face(w, box); }))
        return false;
    return reach_face(ctx, box) && ctx.apply(Action::Pick);
}

bool solve_obstructed(Ctx& ctx) {
    // Keys are hidden in boxes; doors may be blocked by balls. Work left to
    // right: open the reachable box, move the matching door's blocker, unlock,
    // drop the spent key, repeat; finally fetch the target ball.
    for (int stage = 0; stage < 4 && !ctx.solved; ++stage) {
        if (locked_doors(ctx.s).empty()) break;
        Pos box{-1, -1};
        std::optional<Obj> contents;
        for (Pos b : find_kind(ctx.s, Kind::Box)) {
            if (ctx.s.at(b).box_contents && has_plan_to_face(ctx.s, b)) {
                box = b;
                contents = ctx.s.at(b).box_contents;
                break;
            }
        }
        if (box.row < 0) return false;
        Pos door{-1, -1};
        for (Pos d : locked_doors(ctx.s))
            if (ctx.s.at(d).color == contents->color) door = d;
        if (door.row < 0) return false;
        if (!move_blocker_if_any(ctx, door, box)) return false;
        if (!reach_face(ctx, box) || !ctx.apply(Action::Toggle)) return false;
        if (!ctx.apply(Action::Pick)) return false;  // revealed key sits on the box cell
        if (!reach_face(ctx, door) || !ctx.apply(Action::Toggle)) return false;
        const Obj target = ctx.s.goal.target;
        if (!safe_drop(ctx, [target](const WorldState& w) {
                for (Pos b : find_kind(w, Kind::Ball))
                    if (w.at(b).color == target.color && has_plan_to_face(w, b)) return true;
                for (Pos b : find_kind(w, Kind::Box))
                    if (w.at(b).box_contents && has_plan_to_face(w, b)) return true;
                return false;
            }))
            return false;
    }
    if (ctx.solved) return true;
    for (Pos b : find_kind(ctx.s, Kind::Ball)) {
        if (ctx.s.at(b).color != ctx.s.goal.target.color) continue;
        if (!has_plan_to_face(ctx.s, b)) continue;
        return reach_face(ctx, b) && ctx.apply(Action::Pick);
    }
    return false;
}

bool solve_multiroom(Ctx& ctx) {
    const auto goals = find_kind(ctx.s, Kind::Goal);
    if (goals.empty()) return false;
    return reach_cell(ctx, goals.front());
}

// Goal-free families: the instance is valid when every room can be opened up
// and every floor cell reached.
bool verify_explorable(Ctx& ctx) {
    for (int guard = 0; guard < 32; ++guard) {
        const auto doors = closed_unlocked_doors(ctx.s);
        if (doors.empty()) break;
        bool opened = false;
        for (Pos door : doors) {
            if (auto path = plan_to_face(ctx.s, door)) {
                if (!ctx.run(*path) || !ctx.apply(Action::Toggle)) return false;
                opened = true;
                break;
            }
        }
        if (!opened) return false;
    }
    for (int r = 0; r < ctx.s.rows; ++r)
        for (int c = 0; c < ctx.s.cols; ++c)
            if (cell_passable(ctx.s.at({r, c})) && !plan_to_cell(ctx.s, {r, c})) return false;
    return true;
}

}  // namespace

std::optional<std::vector<Action>> scripted_solution(const WorldState& start) {
    Ctx ctx{start, {}, false, false};
    bool ok = false;
    switch (start.env_id) {
        case EnvFamily::Unlock:
            ok = solve_unlock(ctx);
            break;
        case EnvFamily::DoorKey8x8:
        case EnvFamily::DoorKey5x5:
        case EnvFamily::DoorKey6x6:
            ok = solve_door_key(ctx);
            break;
        case EnvFamily::KeyCorridorS3R3:
            ok = solve_key_corridor(ctx);
            break;
        case EnvFamily::UnlockPickup:
        case EnvFamily::BlockedUnlockPickup:
            ok = solve_unlock_pickup(ctx);
            break;
        case EnvFamily::ObstructedMaze1Dlh:
        case EnvFamily::ObstructedMaze2Dlh:
        case EnvFamily::ObstructedMaze2Dlhb:
            ok = solve_obstructed(ctx);
            break;
        case EnvFamily::MultiRoomN6:
        case EnvFamily::MultiRoomN12S10:
        case EnvFamily::MultiRoomN4S5:
            ok = solve_multiroom(ctx);
            break;
        case EnvFamily::MultiRoomNoisyTV:
            return verify_explorable(ctx) ? std::make_optional(ctx.actions) : std::nullopt;
        case EnvFamily::ChainWorld:
            return std::vector<Action>{};
    }
    if (!ok && !ctx.solved) return std::nullopt;
    if (start.goal.mode != GoalMode::None && !ctx.solved) return std::nullopt;
    return ctx.actions;
}

}  // namespace cbet
