#include "cbet/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "cbet/perception.hpp"

namespace cbet {
namespace {

constexpr Pos kChainD{1, 4};

// Abstract chain nodes for the enumeration; the engine-level embedding is
// exercised separately by the training half of the diagnostic.
enum ChainNode : char { A = 'A', B = 'B', C = 'C', D = 'D' };

char chain_next(char node, bool d_side) {
    switch (node) {
        case A: return d_side ? 'D' : 'B';
        case B: return 'C';
        case C: return 'B';
        default: return 'D';
    }
}

}  // namespace

std::vector<ChainTrajectory> chain_enumerate(const RewardSpec& reward, int horizon) {
    std::vector<ChainTrajectory> out;
    if (horizon < 1) return out;
    const int steps = horizon - 1;
    std::unordered_map<std::string, double> best;

    for (uint64_t mask = 0; mask < (1ULL << steps); ++mask) {
        std::unordered_map<std::string, uint64_t> state_counts;
        std::unordered_map<std::string, uint64_t> change_counts;
        auto observe = [](std::unordered_map<std::string, uint64_t>& table,
                          const std::string& key) { return ++table[key]; };

        std::string states(1, 'A');
        // Episode start counts as its own unique change.
        double ret = intrinsic_reward(reward, observe(state_counts, "A"),
                                      observe(change_counts, "<start>"));
        char node = 'A';
        for (int i = 0; i < steps; ++i) {
            const bool d_side = (mask >> i) & 1;
            const char next = chain_next(node, d_side);
            const std::string change{node, '>', next};
            ret += intrinsic_reward(reward, observe(state_counts, std::string(1, next)),
                                    observe(change_counts, change));
            node = next;
            states.push_back(next);
        }
        const auto it = best.find(states);
        if (it == best.end() || ret > it->second) best[states] = ret;
    }

    for (const auto& [states, ret] : best) out.push_back({states, ret});
    std::sort(out.begin(), out.end(), [](const ChainTrajectory& a, const ChainTrajectory& b) {
        return a.states < b.states;
    });
    return out;
}

ChainDiagnosticReport chain_diagnostic(const ResetPolicy& resets, const RewardSpec& reward,
                                       int horizon, uint64_t master_seed,
                                       uint64_t train_steps) {
    ChainDiagnosticReport report;
    report.trajectories = chain_enumerate(reward, horizon);
    report.bc_return = -std::numeric_limits<double>::infinity();
    report.d_return = -std::numeric_limits<double>::infinity();
    for (const ChainTrajectory& t : report.trajectories) {
        if (t.states.size() > 1 && t.states[1] == 'D')
            report.d_return = std::max(report.d_return, t.intrinsic_return);
        else
            report.bc_return = std::max(report.bc_return, t.intrinsic_return);
    }

    TrainConfig cfg;
    cfg.total_steps = train_steps;
    cfg.env_schedule = {EnvFamily::ChainWorld};
    // Full-return updates: the ego view does not carry the step clock, so
    // bootstrapped values alias episode phase on a 4-step chain. A sharper
    // discount breaks the tie between entering the loop and idling first.
    cfg.n_step = 5;
    cfg.gamma_i = 0.9;
    CountsConfig counts;
    counts.resets = resets;

    // The chain is tabular end to end; the stability scaling meant for big
    // runs would drown the branch advantage under the entropy bonus.
    RewardSpec chain_reward = reward;
    chain_reward.scale = 1.0;

    uint64_t late_steps = 0;
    uint64_t late_d_steps = 0;
    const uint64_t half = train_steps / 2;
    uint64_t seen_steps = 0;
    TrainHooks hooks;
    hooks.on_episode = [&](const EpisodeRecord& ep) {
        for (const StepLog& s : ep.steps) {
            ++seen_steps;
            if (seen_steps <= half) continue;
            ++late_steps;
            if (s.position == kChainD) ++late_d_steps;
        }
    };

    PretrainResult trained = pretrain(cfg, chain_reward, counts, master_seed, hooks);
    report.d_occupancy =
        late_steps == 0 ? 0.0 : static_cast<double>(late_d_steps) / static_cast<double>(late_steps);

    const WorldState start = generate(EnvFamily::ChainWorld, mix_seed(master_seed, 0x100000ULL));
    const ObsPipeline pipeline(counts.keying, counts.hash_k, counts.hash_seed,
                               reward.state_view, reward.change_view);
    report.greedy_at_start =
        greedy_action(trained.policy.logits_at(pipeline.policy_key(ego_view(start))));
    return report;
}

// --- Key-door fixture --------------------------------------------------------

namespace {

constexpr int kSide = kFixtureSide;
constexpr int kCells = kSide * kSide;
constexpr int kKeyCode = 5;
constexpr int kDoorCode = 8;
constexpr int kAgentCode = 10;
constexpr int kCanonicalKey = 3 * kSide + 2;   // (3,2)
constexpr int kCanonicalDoor = 2 * kSide + 4;  // (2,4)
constexpr int kCanonicalStart = 0;             // (0,0)

struct FixtureState {
    int agent = kCanonicalStart;
    int dir = 2;  // 0=N,1=E,2=S,3=W; starts facing down
    int key = kCanonicalKey;
    bool key_present = true;
    bool carrying = false;
};

std::array<int, kCells> fixture_obs(const FixtureState& s) {
    std::array<int, kCells> obs{};
    obs[kCanonicalDoor] = kDoorCode;
    if (s.key_present) obs[s.key] = kKeyCode;
    obs[s.agent] = kAgentCode;
    return obs;
}

int fixture_front(const FixtureState& s) {
    constexpr int dr[4] = {-1, 0, 1, 0};
    constexpr int dc[4] = {0, 1, 0, -1};
    const int r = s.agent / kSide + dr[s.dir];
    const int c = s.agent % kSide + dc[s.dir];
    if (r < 0 || r >= kSide || c < 0 || c >= kSide) return -1;
    return r * kSide + c;
}

// Actions: 0 Left, 1 Right, 2 Forward, 3 Pick.
void fixture_step(FixtureState& s, int action) {
    switch (action) {
        case 0:
            s.dir = (s.dir + 3) % 4;
            break;
        case 1:
            s.dir = (s.dir + 1) % 4;
            break;
        case 2: {
            const int f = fixture_front(s);
            if (f >= 0 && f != kCanonicalDoor && !(s.key_present && f == s.key)) s.agent = f;
            break;
        }
        case 3: {
            const int f = fixture_front(s);
            if (f >= 0 && s.key_present && f == s.key && !s.carrying) {
                s.key_present = false;
                s.carrying = true;
            }
            break;
        }
        default:
            break;
    }
}

using ObsKey = std::string;

ObsKey obs_key(const std::array<int, kCells>& obs) {
    ObsKey key(kCells, '\0');
    for (int i = 0; i < kCells; ++i) key[static_cast<size_t>(i)] = static_cast<char>(obs[i]);
    return key;
}

ObsKey diff_key(const std::array<int, kCells>& before, const std::array<int, kCells>& after) {
    ObsKey key;
    for (int i = 0; i < kCells; ++i) {
        const int d = after[i] - before[i];
        if (d == 0) continue;
        key.push_back(static_cast<char>(i));
        key.push_back(static_cast<char>(d + 32));
    }
    return key;
}

double diff_sq_norm(const std::array<int, kCells>& before, const std::array<int, kCells>& after) {
    double n = 0.0;
    for (int i = 0; i < kCells; ++i) {
        const double d = after[i] - before[i];
        n += d * d;
    }
    return n;
}

}  // namespace

FixtureReport reward_map_fixture(const FixtureConfig& cfg) {
    FixtureReport report;
    report.key_cell = kCanonicalKey;
    report.pick_cell = kCanonicalKey - kSide;

    std::unordered_map<ObsKey, uint64_t> state_counts;
    std::unordered_map<ObsKey, uint64_t> change_counts;
    Rng rng(mix_seed(cfg.seed, 0xF16F3ULL));

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        FixtureState s;
        if (cfg.randomize_key) {
            int cell = kCanonicalDoor;
            while (cell == kCanonicalDoor) cell = static_cast<int>(rng.uniform_int(kCells));
            s.key = cell;
        }
        if (cfg.start_near_key) {
            std::vector<int> near;
            const int kr = s.key / kSide, kc = s.key % kSide;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    const int r = kr + dr, c = kc + dc;
                    if (r < 0 || r >= kSide || c < 0 || c >= kSide) continue;
                    const int cell = r * kSide + c;
                    if (cell == s.key || cell == kCanonicalDoor) continue;
                    near.push_back(cell);
                }
            s.agent = near[rng.uniform_int(near.size())];
        } else {
            int cell = s.key;
            while (cell == s.key || cell == kCanonicalDoor)
                cell = static_cast<int>(rng.uniform_int(kCells));
            s.agent = cell;
        }
        auto obs = fixture_obs(s);
        for (int t = 0; t < cfg.episode_len; ++t) {
            const int action = static_cast<int>(rng.uniform_int(kFixtureActions));
            fixture_step(s, action);
            const auto obs2 = fixture_obs(s);
            ++state_counts[obs_key(obs2)];
            ++change_counts[diff_key(obs, obs2)];
            obs = obs2;
            if (s.carrying) {  // picking the key ends the episode
                ++report.walk_picks;
                break;
            }
        }
    }

    const RewardSpec cbet_spec{RewardKind::CBET, 1.0, View::Ego, View::Pano};
    const RewardSpec count_spec{RewardKind::CountOnly, 1.0, View::Ego, View::Pano};
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (auto& map : {&report.cbet, &report.count_only, &report.l2_change})
        for (auto& row : map->values) row.fill(nan);

    auto lookup = [](const std::unordered_map<ObsKey, uint64_t>& table, const ObsKey& key) {
        const auto it = table.find(key);
        return (it == table.end() ? 0ULL : it->second) + 1;  // post-increment convention
    };

    double best_cbet = -1.0, best_count = -1.0;
    double l2_forward_sum = 0.0, l2_pick_sum = 0.0;
    int forward_cells = 0, pick_cells = 0;

    for (int cell = 0; cell < kCells; ++cell) {
        if (cell == kCanonicalDoor || cell == kCanonicalKey) continue;
        for (int action = 0; action < kFixtureActions; ++action) {
            FixtureState s;
            s.agent = cell;
            const auto before = fixture_obs(s);
            FixtureState s2 = s;
            fixture_step(s2, action);
            const auto after = fixture_obs(s2);

            const uint64_t n_state = lookup(state_counts, obs_key(after));
            const uint64_t n_change = lookup(change_counts, diff_key(before, after));
            const double r_cbet = intrinsic_reward(cbet_spec, n_state, n_change);
            const double r_count = intrinsic_reward(count_spec, n_state, n_change);
            const double r_l2 = diff_sq_norm(before, after) / std::sqrt(static_cast<double>(n_state));

            report.cbet.values[static_cast<size_t>(action)][static_cast<size_t>(cell)] = r_cbet;
            report.count_only.values[static_cast<size_t>(action)][static_cast<size_t>(cell)] = r_count;
            report.l2_change.values[static_cast<size_t>(action)][static_cast<size_t>(cell)] = r_l2;

            if (r_cbet > best_cbet) {
                best_cbet = r_cbet;
                report.cbet.argmax_cell = cell;
                report.cbet.argmax_action = action;
            }
            if (r_count > best_count) {
                best_count = r_count;
                report.count_only.argmax_cell = cell;
                report.count_only.argmax_action = action;
            }
            if (action == 2) {
                l2_forward_sum += r_l2;
                ++forward_cells;
            }
            if (action == 3) {
                l2_pick_sum += r_l2;
                ++pick_cells;
            }
        }
    }
    report.l2_forward_mean = forward_cells ? l2_forward_sum / forward_cells : 0.0;
    report.l2_pick_mean = pick_cells ? l2_pick_sum / pick_cells : 0.0;
    return report;
}

DecayReport decay_diagnostic(EnvFamily family, const RewardSpec& reward,
                             const ResetPolicy& resets, uint64_t steps, size_t window,
                             uint64_t master_seed) {
    TrainConfig cfg;
    cfg.total_steps = steps;
    cfg.env_schedule = {family};
    // One fixed layout: decay is about count growth, and per-episode layout
    // reshuffles keep refilling the novelty pool at this scale.
    cfg.fixed_layout_seed = mix_seed(master_seed, 0xDECA1ULL);
    CountsConfig counts;
    counts.resets = resets;

    std::vector<double> raw;
    raw.reserve(steps);
    TrainHooks hooks;
    hooks.on_intrinsic = [&raw](uint64_t, const IntrinsicStep& s) { raw.push_back(s.r_raw); };
    pretrain(cfg, reward, counts, master_seed, hooks);

    DecayReport report;
    report.trend = reward_trend(raw, window);
    if (!report.trend.empty()) {
        report.first_window = report.trend.front();
        report.last_window = report.trend.back();
        if (report.first_window != 0.0)
            report.last_over_first = report.last_window / report.first_window;
    }
    return report;
}

}  // namespace cbet
