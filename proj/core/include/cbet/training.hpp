#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "cbet/agent.hpp"
#include "cbet/counts.hpp"
#include "cbet/eval.hpp"
#include "cbet/observation.hpp"
#include "cbet/rewards.hpp"

namespace cbet {

// Scale on the frozen exploration logits; linear decays from value to 0 over
// the horizon, matching the epsilon-style decay variant.
struct AlphaSchedule {
    enum class Kind : uint8_t { Constant = 0, Linear = 1 };
    Kind kind = Kind::Constant;
    double value = 1.0;
    uint64_t horizon = 0;

    double at(uint64_t step) const {
        if (kind == Kind::Constant || horizon == 0) return value;
        if (step >= horizon) return 0.0;
        return value * (1.0 - static_cast<double>(step) / static_cast<double>(horizon));
    }

    std::string to_string() const;
    static std::optional<AlphaSchedule> parse(const std::string& text);
};

struct TrainHooks {
    std::function<void(const EpisodeRecord&)> on_episode;
    // Global step index plus that step's reward bookkeeping.
    std::function<void(uint64_t, const IntrinsicStep&)> on_intrinsic;
};

struct PretrainResult {
    PolicyTable policy;
    CountTable state_counts;
    CountTable change_counts;
    uint64_t episodes = 0;
    uint64_t steps = 0;
    std::string rng_state;  // action/reset/tv streams at run end
};

// Intrinsic-only pre-training over the round-robin env schedule. Extrinsic
// rewards are logged but never fed to the learner; goal and timeout states
// still terminate episodes.
PretrainResult pretrain(const TrainConfig& cfg, const RewardSpec& reward,
                        const CountsConfig& counts, uint64_t master_seed,
                        const TrainHooks& hooks = {});

struct TransferSetup {
    EnvFamily task_env = EnvFamily::Unlock;
    const PolicyTable* frozen_bias = nullptr;   // f_i logits; nullptr = tabula rasa
    AlphaSchedule alpha;
    std::optional<RewardSpec> intrinsic;        // summed with extrinsic when set
};

struct TaskTrainResult {
    PolicyTable policy;  // f_e and V_e only; the bias is never written
    CountTable state_counts;
    CountTable change_counts;
    uint64_t episodes = 0;
    uint64_t steps = 0;
    std::string rng_state;
};

// Task training on extrinsic rewards, acting through alpha * f_i + f_e. With
// no bias and no intrinsic this is plain tabula-rasa extrinsic training on
// the identical loop (same seeds, same rng draws).
TaskTrainResult transfer_train(const TransferSetup& setup, const TrainConfig& cfg,
                               const CountsConfig& counts, uint64_t master_seed,
                               const TrainHooks& hooks = {});

}  // namespace cbet
