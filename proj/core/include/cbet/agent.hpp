#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cbet/perception.hpp"
#include "cbet/rng.hpp"
#include "cbet/world.hpp"

namespace cbet {

using Logits = std::array<double, kNumActions>;

// Tabular softmax policy and state values, keyed by the egocentric
// observation's count key (never the panoramic view). Unvisited keys read as
// zeros, i.e. the uniform policy and zero value.
struct PolicyTable {
    std::unordered_map<CountKey, Logits> logits;
    std::unordered_map<CountKey, double> values;

    Logits logits_at(const CountKey& key) const {
        const auto it = logits.find(key);
        return it == logits.end() ? Logits{} : it->second;
    }

    double value_at(const CountKey& key) const {
        const auto it = values.find(key);
        return it == values.end() ? 0.0 : it->second;
    }
};

struct TrainConfig {
    double gamma_i = 0.99;
    double gamma = 0.99;
    double actor_lr = 0.05;
    double critic_lr = 0.05;
    double entropy_coeff = 0.0005;
    int n_step = 1;
    uint64_t total_steps = 0;
    std::vector<EnvFamily> env_schedule;
    bool noisy_tv = true;  // cleared to run MultiRoomNoisyTV as its noise-free twin
    std::optional<uint64_t> fixed_layout_seed;  // repeat one layout instead of per-episode seeds
};

// Throws NumericalError on non-finite logits.
std::array<double, kNumActions> softmax(const Logits& logits);
Action sample_action(const std::array<double, kNumActions>& probs, Rng& rng);
Action act(const Logits& logits, Rng& rng);
Action greedy_action(const Logits& logits);  // lowest index wins ties

// pi_task logits: alpha * f_i + f_e, element-wise.
Logits compose_task_policy(const Logits& f_e, const Logits& f_i, double alpha);

// Applies actor and critic increments for an already-computed TD error.
// acting_probs is the distribution the action was actually sampled from (the
// composed softmax at transfer); the gradient lands on this table's logits.
void ac_apply(PolicyTable& policy, const CountKey& s_key, Action a,
              const std::array<double, kNumActions>& acting_probs, double delta,
              const TrainConfig& cfg);

// One actor-critic update against the given acting distribution. Returns the
// TD error.
double ac_update_composed(PolicyTable& policy, const CountKey& s_key, Action a,
                          const std::array<double, kNumActions>& acting_probs, double r,
                          const CountKey& s2_key, bool done, double gamma,
                          const TrainConfig& cfg);

// Plain update: acting distribution is the table's own softmax at s_key.
double ac_update(PolicyTable& policy, const CountKey& s_key, Action a, double r,
                 const CountKey& s2_key, bool done, const TrainConfig& cfg);

}  // namespace cbet
