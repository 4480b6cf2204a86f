#include <doctest.h>

#include <algorithm>
#include <random>

#include "cbet/eval.hpp"
#include "cbet/perception.hpp"

using namespace cbet;

namespace {

// Replays an action sequence through the engine, logging steps the same way
// the trainers do. Test-side twin of the production loops.
EpisodeRecord replay(WorldState s, const std::vector<Action>& actions,
                     const ObsPipeline& pipeline) {
    EpisodeRecord record;
    record.family = s.env_id;
    record.episode_seed = s.episode_seed;
    EgoView ego = ego_view(s);
    PanoView pano = pano_view(s);
    for (Action a : actions) {
        Transition tr = step(s, a);
        const EgoView ego2 = ego_view(tr.state_after);
        const PanoView pano2 = pano_view(tr.state_after);
        const ChangeCode change = pipeline.change(ego, pano, ego2, pano2);
        StepLog log;
        log.action = a;
        log.extrinsic = tr.extrinsic_reward;
        log.position = tr.state_after.agent_pos;
        log.interaction =
            (a == Action::Pick || a == Action::Drop || a == Action::Toggle) && !is_zero(change);
        log.change_key = pipeline.change_key(change);
        record.steps.push_back(log);
        s = std::move(tr.state_after);
        ego = ego2;
        pano = pano2;
        record.outcome = tr.done_reason;
        if (tr.done) break;
    }
    return record;
}

WorldState key_room() {
    WorldState s;
    s.rows = 8;
    s.cols = 8;
    s.grid.assign(64, Cell{});
    for (int r = 0; r < 8; ++r) {
        s.at({r, 0}).kind = Kind::Wall;
        s.at({r, 7}).kind = Kind::Wall;
    }
    for (int c = 0; c < 8; ++c) {
        s.at({0, c}).kind = Kind::Wall;
        s.at({7, c}).kind = Kind::Wall;
    }
    s.at({3, 4}) = Cell{Kind::Key, Color::Red, DoorState::None, std::nullopt};
    s.at({5, 2}) = Cell{Kind::Door, Color::Red, DoorState::Closed, std::nullopt};
    s.agent_pos = {3, 3};
    s.agent_dir = Dir::E;  // facing the key
    s.env_id = EnvFamily::DoorKey8x8;
    s.T = 200;
    return s;
}

ObsPipeline default_pipeline() {
    return ObsPipeline(KeyingMode::Raw, 128, 1, View::Ego, View::Pano);
}

}  // namespace

TEST_CASE("repeated pick and drop of the same key count as two unique interactions") {
    const ObsPipeline pipeline = default_pipeline();
    std::vector<Action> actions;
    for (int i = 0; i < 6; ++i) {
        actions.push_back(Action::Pick);
        actions.push_back(Action::Drop);
    }
    const auto record = replay(key_room(), actions, pipeline);
    const std::vector<EpisodeRecord> records{record};
    CHECK(unique_interactions_total(records) == 2);
}

TEST_CASE("episodes without interactions contribute zero") {
    const ObsPipeline pipeline = default_pipeline();
    const auto record =
        replay(key_room(), {Action::Left, Action::Left, Action::Forward, Action::Done}, pipeline);
    const std::vector<EpisodeRecord> records{record};
    CHECK(unique_interactions_total(records) == 0);
}

TEST_CASE("pick, drop elsewhere, re-pick, toggle: four unique interactions") {
    const ObsPipeline pipeline = default_pipeline();
    // pick key @ (3,4); turn south, drop @ (4,3); pick it up again; walk to the
    // door and toggle it.
    const std::vector<Action> actions{
        Action::Pick,                                   // pick @ c1
        Action::Right, Action::Drop,                    // drop @ c2
        Action::Pick,                                   // pick @ c2
        Action::Forward,                                // (4,3)
        Action::Forward,                                // (5,3)
        Action::Right, Action::Toggle,                  // face (5,2), toggle door
    };
    const auto record = replay(key_room(), actions, pipeline);
    const std::vector<EpisodeRecord> records{record};
    CHECK(unique_interactions_total(records) == 4);
}

TEST_CASE("unique-interaction total is order independent") {
    const ObsPipeline pipeline = default_pipeline();
    ComposedPolicy uniform{};
    RolloutOptions opts;
    opts.episodes = 30;
    opts.eval_seed = 5;
    auto records = rollout(uniform, EnvFamily::UnlockPickup, opts, pipeline);
    const uint64_t total = unique_interactions_total(records);
    std::mt19937 shuffler(7);
    for (int i = 0; i < 5; ++i) {
        std::shuffle(records.begin(), records.end(), shuffler);
        CHECK(unique_interactions_total(records) == total);
    }
    CHECK(unique_interactions_mean(records) ==
          doctest::Approx(static_cast<double>(total) / records.size()));
}

TEST_CASE("success rate counts solved episodes") {
    SUBCASE("scripted solver solves every instance") {
        const ObsPipeline pipeline = default_pipeline();
        std::vector<EpisodeRecord> records;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            const WorldState s = generate(EnvFamily::Unlock, seed);
            const auto plan = scripted_solution(s);
            REQUIRE(plan.has_value());
            records.push_back(replay(s, *plan, pipeline));
        }
        CHECK(success_rate(records) == doctest::Approx(1.0));
    }
    SUBCASE("a policy that only rotates never solves") {
        const ObsPipeline pipeline = default_pipeline();
        PolicyTable spin;  // empty: greedy picks action 0 (Left) everywhere
        ComposedPolicy pol{&spin, nullptr, 1.0};
        RolloutOptions opts;
        opts.episodes = 20;
        opts.eval_seed = 3;
        opts.greedy = true;
        const auto records = rollout(pol, EnvFamily::Unlock, opts, pipeline);
        CHECK(success_rate(records) == 0.0);
        for (const auto& ep : records) CHECK(ep.outcome == DoneReason::Timeout);
    }
    SUBCASE("uniform random on Unlock matches the pinned regression value") {
        const ObsPipeline pipeline = default_pipeline();
        ComposedPolicy uniform{};
        RolloutOptions opts;
        opts.episodes = 100;
        opts.eval_seed = 2024;
        const auto records = rollout(uniform, EnvFamily::Unlock, opts, pipeline);
        CHECK(success_rate(records) == doctest::Approx(0.05));  // pinned replay value
    }
}

TEST_CASE("coverage heatmap on a hand-built sweep") {
    WorldState room;
    room.rows = 4;
    room.cols = 5;
    room.grid.assign(20, Cell{});
    for (int r = 0; r < 4; ++r) {
        room.at({r, 0}).kind = Kind::Wall;
        room.at({r, 4}).kind = Kind::Wall;
    }
    for (int c = 0; c < 5; ++c) {
        room.at({0, c}).kind = Kind::Wall;
        room.at({3, c}).kind = Kind::Wall;
    }
    room.agent_pos = {1, 1};

    EpisodeRecord sweep;
    sweep.family = room.env_id;
    for (Pos p : {Pos{1, 1}, Pos{1, 2}, Pos{1, 3}, Pos{2, 3}, Pos{2, 2}, Pos{2, 1}}) {
        StepLog log;
        log.position = p;
        sweep.steps.push_back(log);
    }
    const std::vector<EpisodeRecord> records{sweep};
    const Heatmap hm = coverage_heatmap(records, room);
    CHECK(hm.total == 6);
    CHECK(hm.coverage_fraction == doctest::Approx(1.0));
    CHECK(hm.uniformity == doctest::Approx(1.0));

    SUBCASE("an agent that never moves lights a single cell") {
        EpisodeRecord still;
        for (int i = 0; i < 9; ++i) {
            StepLog log;
            log.position = {2, 2};
            still.steps.push_back(log);
        }
        const std::vector<EpisodeRecord> one{still};
        const Heatmap hm2 = coverage_heatmap(one, room);
        uint64_t nonzero = 0;
        for (uint64_t c : hm2.counts)
            if (c > 0) ++nonzero;
        CHECK(nonzero == 1);
        CHECK(hm2.total == 9);
        CHECK(hm2.coverage_fraction == doctest::Approx(1.0 / 6.0));
    }
}

TEST_CASE("action distribution and normalized entropy") {
    SUBCASE("uniform rollouts sit near 1/7 with entropy near 1") {
        const ObsPipeline pipeline = default_pipeline();
        ComposedPolicy uniform{};
        RolloutOptions opts;
        opts.episodes = 40;
        opts.eval_seed = 8;
        const auto records = rollout(uniform, EnvFamily::MultiRoomN4S5, opts, pipeline);
        const auto dist = action_distribution(records);
        for (double p : dist.probs) CHECK(p == doctest::Approx(1.0 / 7.0).epsilon(0.15));
        CHECK(dist.normalized_entropy > 0.99);
    }
    SUBCASE("a constant action stream has zero entropy") {
        EpisodeRecord ep;
        for (int i = 0; i < 50; ++i) {
            StepLog log;
            log.action = Action::Forward;
            ep.steps.push_back(log);
        }
        const std::vector<EpisodeRecord> records{ep};
        const auto dist = action_distribution(records);
        CHECK(dist.probs[static_cast<int>(Action::Forward)] == doctest::Approx(1.0));
        CHECK(dist.normalized_entropy == doctest::Approx(0.0));
    }
}

TEST_CASE("metrics are pure functions of the records") {
    const ObsPipeline pipeline = default_pipeline();
    ComposedPolicy uniform{};
    RolloutOptions opts;
    opts.episodes = 25;
    opts.eval_seed = 99;
    const auto records = rollout(uniform, EnvFamily::KeyCorridorS3R3, opts, pipeline);
    CHECK(success_rate(records) == success_rate(records));
    CHECK(unique_interactions_total(records) == unique_interactions_total(records));
    const auto d1 = action_distribution(records);
    const auto d2 = action_distribution(records);
    CHECK(d1.probs == d2.probs);
}

TEST_CASE("rollouts are reproducible per eval seed") {
    const ObsPipeline pipeline = default_pipeline();
    ComposedPolicy uniform{};
    RolloutOptions opts;
    opts.episodes = 10;
    opts.eval_seed = 31;
    const auto a = rollout(uniform, EnvFamily::BlockedUnlockPickup, opts, pipeline);
    const auto b = rollout(uniform, EnvFamily::BlockedUnlockPickup, opts, pipeline);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].outcome == b[i].outcome);
        REQUIRE(a[i].steps.size() == b[i].steps.size());
        for (size_t t = 0; t < a[i].steps.size(); ++t) {
            CHECK(a[i].steps[t].action == b[i].steps[t].action);
            CHECK(a[i].steps[t].position == b[i].steps[t].position);
        }
    }
}
