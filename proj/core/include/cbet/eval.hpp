#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cbet/agent.hpp"
#include "cbet/observation.hpp"
#include "cbet/world.hpp"

namespace cbet {

struct StepLog {
    Action action = Action::Done;
    double extrinsic = 0.0;
    double intrinsic_raw = 0.0;
    Pos position;          // agent position after the step
    CountKey change_key;   // under the run's change view; empty = no change
    bool interaction = false;  // Pick/Drop/Toggle that changed the view
};

struct EpisodeRecord {
    EnvFamily family = EnvFamily::Unlock;
    uint64_t episode_seed = 0;
    DoneReason outcome = DoneReason::None;
    std::vector<StepLog> steps;
};

// Interactions deduplicated by change key across the whole record set (the
// dedup set persists over all episodes of one evaluation).
uint64_t unique_interactions_total(std::span<const EpisodeRecord> records);
double unique_interactions_mean(std::span<const EpisodeRecord> records);

double success_rate(std::span<const EpisodeRecord> records);

struct ActionDistribution {
    std::array<double, kNumActions> probs{};
    double normalized_entropy = 0.0;  // log base 7, uniform = 1
};

ActionDistribution action_distribution(std::span<const EpisodeRecord> records);

struct Heatmap {
    int rows = 0;
    int cols = 0;
    std::vector<uint64_t> counts;  // row-major visit counts
    uint64_t total = 0;
    double coverage_fraction = 0.0;  // visited / reachable cells
    double uniformity = 0.0;         // normalized entropy over reachable cells
};

// Visit counts over true grid positions; the reference state defines grid
// shape and reachable cells (meaningful when episodes share one layout).
Heatmap coverage_heatmap(std::span<const EpisodeRecord> records, const WorldState& reference);

// Acting view of a policy: optional frozen bias composed at fixed alpha.
struct ComposedPolicy {
    const PolicyTable* policy = nullptr;
    const PolicyTable* bias = nullptr;
    double alpha = 1.0;

    Logits logits_at(const CountKey& key) const {
        Logits out = policy ? policy->logits_at(key) : Logits{};
        if (bias) out = compose_task_policy(out, bias->logits_at(key), alpha);
        return out;
    }
};

struct RolloutOptions {
    int episodes = 100;
    bool greedy = false;
    uint64_t eval_seed = 1;
    std::vector<uint64_t> env_seeds;  // optional explicit layout seeds
    bool noisy_tv = true;
};

// Sampled (or greedy) rollouts without learning.
std::vector<EpisodeRecord> rollout(const ComposedPolicy& policy, EnvFamily family,
                                   const RolloutOptions& opts, const ObsPipeline& pipeline);

double success_rate(const ComposedPolicy& policy, EnvFamily family, int episodes,
                    uint64_t eval_seed, const ObsPipeline& pipeline, bool greedy = false);

}  // namespace cbet
