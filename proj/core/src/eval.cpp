#include "cbet/eval.hpp"

#include <cmath>
#include <unordered_set>

namespace cbet {

uint64_t unique_interactions_total(std::span<const EpisodeRecord> records) {
    std::unordered_set<CountKey> seen;
    uint64_t total = 0;
    for (const EpisodeRecord& ep : records)
        for (const StepLog& s : ep.steps)
            if (s.interaction && seen.insert(s.change_key).second) ++total;
    return total;
}

double unique_interactions_mean(std::span<const EpisodeRecord> records) {
    if (records.empty()) return 0.0;
    return static_cast<double>(unique_interactions_total(records)) /
           static_cast<double>(records.size());
}

double success_rate(std::span<const EpisodeRecord> records) {
    if (records.empty()) return 0.0;
    size_t solved = 0;
    for (const EpisodeRecord& ep : records)
        if (ep.outcome == DoneReason::Solved) ++solved;
    return static_cast<double>(solved) / static_cast<double>(records.size());
}

ActionDistribution action_distribution(std::span<const EpisodeRecord> records) {
    ActionDistribution out;
    uint64_t total = 0;
    std::array<uint64_t, kNumActions> counts{};
    for (const EpisodeRecord& ep : records) {
        for (const StepLog& s : ep.steps) {
            ++counts[static_cast<int>(s.action)];
            ++total;
        }
    }
    if (total == 0) return out;
    double entropy = 0.0;
    for (int i = 0; i < kNumActions; ++i) {
        out.probs[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
        if (out.probs[i] > 0.0) entropy -= out.probs[i] * std::log(out.probs[i]);
    }
    out.normalized_entropy = entropy / std::log(static_cast<double>(kNumActions));
    return out;
}

Heatmap coverage_heatmap(std::span<const EpisodeRecord> records, const WorldState& reference) {
    Heatmap hm;
    hm.rows = reference.rows;
    hm.cols = reference.cols;
    hm.counts.assign(static_cast<size_t>(hm.rows) * hm.cols, 0);
    for (const EpisodeRecord& ep : records) {
        for (const StepLog& s : ep.steps) {
            if (s.position.row < 0 || s.position.row >= hm.rows || s.position.col < 0 ||
                s.position.col >= hm.cols)
                continue;
            ++hm.counts[static_cast<size_t>(s.position.row) * hm.cols + s.position.col];
            ++hm.total;
        }
    }
    const std::vector<Pos> reachable = reachable_cells(reference);
    if (reachable.empty()) return hm;
    size_t visited = 0;
    uint64_t reachable_total = 0;
    for (Pos p : reachable) {
        const uint64_t c = hm.counts[static_cast<size_t>(p.row) * hm.cols + p.col];
        if (c > 0) ++visited;
        reachable_total += c;
    }
    hm.coverage_fraction = static_cast<double>(visited) / static_cast<double>(reachable.size());
    if (reachable_total > 0 && reachable.size() > 1) {
        double entropy = 0.0;
        for (Pos p : reachable) {
            const uint64_t c = hm.counts[static_cast<size_t>(p.row) * hm.cols + p.col];
            if (c == 0) continue;
            const double q = static_cast<double>(c) / static_cast<double>(reachable_total);
            entropy -= q * std::log(q);
        }
        hm.uniformity = entropy / std::log(static_cast<double>(reachable.size()));
    }
    return hm;
}

std::vector<EpisodeRecord> rollout(const ComposedPolicy& policy, EnvFamily family,
                                   const RolloutOptions& opts, const ObsPipeline& pipeline) {
    std::vector<EpisodeRecord> records;
    records.reserve(static_cast<size_t>(opts.episodes));
    for (int i = 0; i < opts.episodes; ++i) {
        const uint64_t env_seed =
            opts.env_seeds.empty()
                ? mix_seed(opts.eval_seed, 0x200000ULL + static_cast<uint64_t>(i))
                : opts.env_seeds[static_cast<size_t>(i) % opts.env_seeds.size()];
        Rng ep_rng(mix_seed(opts.eval_seed, 0x300000ULL + static_cast<uint64_t>(i)));
        Rng tv_rng(mix_seed(opts.eval_seed, 0x400000ULL + static_cast<uint64_t>(i)));

        WorldState s = generate(family, env_seed);
        s.noisy_tv_enabled = opts.noisy_tv;
        EgoView ego = ego_view(s);
        PanoView pano = pano_view(s);

        EpisodeRecord record;
        record.family = family;
        record.episode_seed = env_seed;
        while (true) {
            const CountKey key = pipeline.policy_key(ego);
            const Logits logits = policy.logits_at(key);
            const Action a =
                opts.greedy ? greedy_action(logits) : sample_action(softmax(logits), ep_rng);
            Transition tr = step(s, a);
            if (a == Action::Drop) noisy_tv_effect(tr.state_after, tv_rng);

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
            record.steps.push_back(std::move(log));

            s = std::move(tr.state_after);
            ego = ego2;
            pano = pano2;
            if (tr.done) {
                record.outcome = tr.done_reason;
                break;
            }
        }
        records.push_back(std::move(record));
    }
    return records;
}

double success_rate(const ComposedPolicy& policy, EnvFamily family, int episodes,
                    uint64_t eval_seed, const ObsPipeline& pipeline, bool greedy) {
    RolloutOptions opts;
    opts.episodes = episodes;
    opts.greedy = greedy;
    opts.eval_seed = eval_seed;
    return success_rate(rollout(policy, family, opts, pipeline));
}

}  // namespace cbet
