#include <doctest.h>

#include <algorithm>
#include <map>

#include "cbet/world.hpp"

using namespace cbet;

namespace {

// Multiset of (kind, color) over grid objects plus the carried item; doors
// included, walls ignored.
std::map<std::pair<int, int>, int> object_multiset(const WorldState& s) {
    std::map<std::pair<int, int>, int> out;
    for (const Cell& c : s.grid) {
        if (c.kind == Kind::Empty || c.kind == Kind::Wall) continue;
        ++out[{static_cast<int>(c.kind), static_cast<int>(c.color)}];
    }
    if (s.carried) ++out[{static_cast<int>(s.carried->kind), static_cast<int>(s.carried->color)}];
    return out;
}

const EnvFamily kAllFamilies[] = {
    EnvFamily::Unlock,          EnvFamily::DoorKey8x8,
    EnvFamily::KeyCorridorS3R3, EnvFamily::UnlockPickup,
    EnvFamily::BlockedUnlockPickup, EnvFamily::ObstructedMaze1Dlh,
    EnvFamily::ObstructedMaze2Dlh,  EnvFamily::ObstructedMaze2Dlhb,
    EnvFamily::MultiRoomN6,     EnvFamily::MultiRoomN12S10,
    EnvFamily::MultiRoomN4S5,   EnvFamily::MultiRoomNoisyTV,
    EnvFamily::ChainWorld,      EnvFamily::DoorKey5x5,
    EnvFamily::DoorKey6x6,
};

}  // namespace

TEST_CASE("generation is deterministic per (family, seed)") {
    for (EnvFamily f : kAllFamilies) {
        for (uint64_t seed : {1ULL, 77ULL}) {
            const WorldState a = generate(f, seed);
            const WorldState b = generate(f, seed);
            CHECK(a == b);
        }
    }
}

TEST_CASE("every generated instance admits a scripted solution") {
    for (EnvFamily f : kAllFamilies) {
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            const WorldState s = generate(f, seed);
            const auto plan = scripted_solution(s);
            REQUIRE_MESSAGE(plan.has_value(),
                            family_name(f) << " seed " << seed << " unsolvable");
            if (s.goal.mode == GoalMode::None) continue;
            // Replay the plan; it must solve within the horizon.
            WorldState cur = s;
            bool solved = false;
            for (Action a : *plan) {
                Transition tr = step(cur, a);
                cur = tr.state_after;
                if (tr.done_reason == DoneReason::Solved) {
                    solved = true;
                    break;
                }
                REQUIRE(!tr.done);
            }
            CHECK(solved);
        }
    }
}

TEST_CASE("fresh instances never start solved and spawn legally") {
    for (EnvFamily f : kAllFamilies) {
        const WorldState s = generate(f, 5);
        CHECK_FALSE(goal_reached(s));
        CHECK(s.in_bounds(s.agent_pos));
        CHECK(s.at(s.agent_pos).kind != Kind::Wall);
        CHECK(s.t == 0);
        CHECK(s.T == family_horizon(f));
    }
}

TEST_CASE("forward into a wall is a lawful no-op") {
    WorldState s = generate(EnvFamily::DoorKey8x8, 3);
    // Face the nearest outer wall by walking left until blocked.
    s.agent_dir = Dir::W;
    for (int i = 0; i < 8; ++i) {
        Transition tr = step(s, Action::Forward);
        s = tr.state_after;
    }
    const WorldState before = s;
    Transition tr = step(s, Action::Forward);
    CHECK(tr.state_after.agent_pos == before.agent_pos);
    CHECK(tr.state_after.grid == before.grid);
    CHECK(tr.state_after.t == before.t + 1);
}

TEST_CASE("toggle opens a locked door only with the matching key") {
    WorldState s = generate(EnvFamily::Unlock, 9);
    Pos door{-1, -1};
    for (int r = 0; r < s.rows; ++r)
        for (int c = 0; c < s.cols; ++c)
            if (s.at({r, c}).kind == Kind::Door) door = {r, c};
    REQUIRE(door.row >= 0);
    const Color color = s.at(door).color;

    // Stand left of the door facing it.
    s.agent_pos = {door.row, door.col - 1};
    s.agent_dir = Dir::E;

    SUBCASE("without key: stays locked") {
        s.carried.reset();
        Transition tr = step(s, Action::Toggle);
        CHECK(tr.state_after.at(door).door == DoorState::Locked);
    }
    SUBCASE("wrong color key: stays locked") {
        s.carried = Obj{Kind::Key, color == Color::Red ? Color::Blue : Color::Red};
        Transition tr = step(s, Action::Toggle);
        CHECK(tr.state_after.at(door).door == DoorState::Locked);
    }
    SUBCASE("matching key: opens, key stays carried") {
        s.carried = Obj{Kind::Key, color};
        Transition tr = step(s, Action::Toggle);
        CHECK(tr.state_after.at(door).door == DoorState::Open);
        CHECK(tr.state_after.carried == Obj{Kind::Key, color});
    }
    SUBCASE("open door toggles closed again") {
        s.carried = Obj{Kind::Key, color};
        WorldState open_state = step(s, Action::Toggle).state_after;
        REQUIRE(open_state.at(door).door == DoorState::Open);
        Transition tr = step(open_state, Action::Toggle);
        CHECK(tr.state_after.at(door).door == DoorState::Closed);
    }
}

TEST_CASE("toggle on a box reveals its contents at the box cell") {
    WorldState s = generate(EnvFamily::ObstructedMaze1Dlh, 4);
    Pos box{-1, -1};
    for (int r = 0; r < s.rows; ++r)
        for (int c = 0; c < s.cols; ++c)
            if (s.at({r, c}).kind == Kind::Box) box = {r, c};
    REQUIRE(box.row >= 0);
    const Obj contents = *s.at(box).box_contents;

    s.agent_pos = {box.row, box.col - 1};
    if (s.at(s.agent_pos).kind != Kind::Empty) s.agent_pos = {box.row, box.col + 1};
    REQUIRE(s.at(s.agent_pos).kind == Kind::Empty);
    s.agent_dir = s.agent_pos.col < box.col ? Dir::E : Dir::W;
    Transition tr = step(s, Action::Toggle);
    CHECK(tr.state_after.at(box).kind == contents.kind);
    CHECK(tr.state_after.at(box).color == contents.color);
}

TEST_CASE("solving step pays 1 - 0.9 t/T") {
    // Arrange a DoorKey8x8 plan and force the solve step index to 64 by
    // padding with Done no-ops.
    const WorldState start = generate(EnvFamily::DoorKey8x8, 12);
    const auto plan = scripted_solution(start);
    REQUIRE(plan.has_value());
    REQUIRE(plan->size() < 64);
    const int pad = 64 - static_cast<int>(plan->size());
    WorldState s = start;
    for (int i = 0; i < pad; ++i) s = step(s, Action::Done).state_after;
    double reward = 0.0;
    for (Action a : *plan) {
        Transition tr = step(s, a);
        s = tr.state_after;
        if (tr.done_reason == DoneReason::Solved) reward = tr.extrinsic_reward;
    }
    CHECK(s.t == 64);
    CHECK(reward == doctest::Approx(1.0 - 0.9 * 64.0 / 640.0).epsilon(1e-12));
    CHECK(reward == doctest::Approx(0.91).epsilon(1e-12));
}

TEST_CASE("reward is positive iff solved") {
    Rng rng(5);
    for (uint64_t seed = 1; seed <= 5; ++seed) {
        WorldState s = generate(EnvFamily::MultiRoomN4S5, seed);
        while (true) {
            Transition tr = step(s, static_cast<Action>(rng.uniform_int(7)));
            if (tr.done_reason == DoneReason::Solved) CHECK(tr.extrinsic_reward > 0);
            else CHECK(tr.extrinsic_reward == 0);
            s = std::move(tr.state_after);
            if (tr.done) break;
        }
    }
}

TEST_CASE("random walks preserve objects, never teleport, and time out") {
    Rng rng(21);
    for (EnvFamily f : {EnvFamily::UnlockPickup, EnvFamily::BlockedUnlockPickup,
                        EnvFamily::KeyCorridorS3R3, EnvFamily::MultiRoomN6}) {
        WorldState s = generate(f, 31);
        auto objects = object_multiset(s);
        int steps = 0;
        while (true) {
            const Action a = static_cast<Action>(rng.uniform_int(7));
            const Pos before = s.agent_pos;
            const bool was_box_toggle = [&] {
                if (a != Action::Toggle) return false;
                const Pos v = dir_vec(s.agent_dir);
                const Pos front{before.row + v.row, before.col + v.col};
                return s.in_bounds(front) && s.at(front).kind == Kind::Box;
            }();
            Transition tr = step(s, a);
            ++steps;
            s = std::move(tr.state_after);

            const int dist = std::abs(s.agent_pos.row - before.row) +
                             std::abs(s.agent_pos.col - before.col);
            CHECK(dist <= 1);
            if (dist == 1) CHECK(a == Action::Forward);

            if (was_box_toggle) objects = object_multiset(s);
            else CHECK(object_multiset(s) == objects);

            if (tr.done) break;
            REQUIRE(steps <= s.T);
        }
        CHECK(steps <= family_horizon(f));
    }
}

TEST_CASE("chainworld: branch at start, BC loop, absorbing D") {
    WorldState s = generate(EnvFamily::ChainWorld, 1);
    const Pos a_pos = s.agent_pos;

    // Left from A reaches B, then the BC loop.
    WorldState left = step(s, Action::Left).state_after;
    const Pos b_pos = left.agent_pos;
    CHECK(b_pos != a_pos);
    WorldState c_state = step(left, Action::Left).state_after;
    const Pos c_pos = c_state.agent_pos;
    CHECK(c_pos != b_pos);
    CHECK(step(c_state, Action::Right).state_after.agent_pos == b_pos);

    // Right from A reaches D; nothing leaves D.
    WorldState d_state = step(s, Action::Right).state_after;
    const Pos d_pos = d_state.agent_pos;
    CHECK(d_pos != a_pos);
    for (int a = 0; a < kNumActions; ++a) {
        CHECK(step(d_state, static_cast<Action>(a)).state_after.agent_pos == d_pos);
    }

    // Non-move actions are no-ops on the chain.
    for (Action a : {Action::Forward, Action::Pick, Action::Drop, Action::Toggle, Action::Done}) {
        CHECK(step(s, a).state_after.agent_pos == a_pos);
    }
}

TEST_CASE("noisy tv recolors the ball on drop, gated by family and flag") {
    WorldState s = generate(EnvFamily::MultiRoomNoisyTV, 2);
    REQUIRE(s.tv_ball_pos.has_value());
    const Pos ball = *s.tv_ball_pos;

    SUBCASE("ball is never pickable") {
        s.agent_pos = {ball.row, ball.col - 1};
        if (s.at(s.agent_pos).kind != Kind::Empty) s.agent_pos = {ball.row, ball.col + 1};
        REQUIRE(s.at(s.agent_pos).kind == Kind::Empty);
        s.agent_dir = s.agent_pos.col < ball.col ? Dir::E : Dir::W;
        Transition tr = step(s, Action::Pick);
        CHECK_FALSE(tr.state_after.carried.has_value());
        CHECK(tr.state_after.at(ball).kind == Kind::Ball);
    }

    SUBCASE("color resampling is uniform over the palette") {
        Rng rng(77);
        std::array<int, kNumColors + 1> freq{};
        const int draws = 6000;
        for (int i = 0; i < draws; ++i) {
            noisy_tv_effect(s, rng);
            ++freq[static_cast<int>(s.at(ball).color)];
        }
        for (int c = 1; c <= kNumColors; ++c) {
            const double p = static_cast<double>(freq[c]) / draws;
            CHECK(std::abs(p - 1.0 / kNumColors) < 0.05);
        }
    }

    SUBCASE("no effect outside the family or with the noise disabled") {
        WorldState clean = s;
        clean.noisy_tv_enabled = false;
        const Color before = clean.at(ball).color;
        Rng rng(3);
        for (int i = 0; i < 50; ++i) noisy_tv_effect(clean, rng);
        CHECK(clean.at(ball).color == before);

        WorldState other = generate(EnvFamily::MultiRoomN6, 2);
        const WorldState copy = other;
        for (int i = 0; i < 50; ++i) noisy_tv_effect(other, rng);
        CHECK(other == copy);
    }
}

TEST_CASE("identical action sequences give bit-identical trajectories") {
    for (EnvFamily f : {EnvFamily::BlockedUnlockPickup, EnvFamily::MultiRoomN12S10}) {
        Rng actions_a(4), actions_b(4);
        WorldState a = generate(f, 8);
        WorldState b = generate(f, 8);
        for (int i = 0; i < 200; ++i) {
            const Action act_a = static_cast<Action>(actions_a.uniform_int(7));
            const Action act_b = static_cast<Action>(actions_b.uniform_int(7));
            REQUIRE(act_a == act_b);
            Transition ta = step(a, act_a);
            Transition tb = step(b, act_b);
            REQUIRE(state_bytes(ta.state_after) == state_bytes(tb.state_after));
            a = ta.state_after;
            b = tb.state_after;
            if (ta.done) break;
        }
    }
}

TEST_CASE("ascii rendering is stable for a fixed seed") {
    const WorldState s = generate(EnvFamily::ChainWorld, 1);
    CHECK(render_ascii(s) ==
          "######\n"
          "#..^.#\n"  // C, B, A (agent), D
          "######\n");
}

TEST_CASE("family name round trip") {
    for (EnvFamily f : kAllFamilies) {
        const auto parsed = family_from_name(family_name(f));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == f);
    }
    CHECK_FALSE(family_from_name("NoSuchEnv").has_value());
}
