#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cbet/agent.hpp"
#include "cbet/observation.hpp"
#include "cbet/rewards.hpp"
#include "cbet/training.hpp"
#include "cbet/world.hpp"

namespace cbet {

// Full run configuration. Every field has a default; unknown keys in a config
// file or override are hard errors; the resolved config is echoed into the
// output directory and into checkpoints.
struct RunConfig {
    // env
    std::vector<EnvFamily> env_families = {EnvFamily::KeyCorridorS3R3,
                                           EnvFamily::BlockedUnlockPickup,
                                           EnvFamily::MultiRoomN4S5};
    uint64_t master_seed = 1;
    bool noisy_tv = true;  // disable for the noise-free MultiRoomNoisyTV twin

    // reward
    RewardSpec reward;

    // counts
    CountsConfig counts;  // counts.hash_seed 0 means "derive from master_seed"

    // train
    TrainConfig train;

    // transfer
    EnvFamily task_env = EnvFamily::Unlock;
    AlphaSchedule alpha;
    bool tabula_rasa = false;     // no frozen bias
    bool extrinsic_only = false;  // drop the intrinsic stream entirely

    // eval
    int eval_episodes = 100;
    uint64_t eval_seed = 7;
    bool eval_greedy = false;

    // io
    std::string out_dir = "cbet_out";
};

RunConfig default_run_config();

// JSON round trip. from_json rejects unknown keys with ConfigError.
std::string run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Dotted-path overrides, e.g. "train.total_steps=50000" or
// "env.families=Unlock,DoorKey8x8". Throws ConfigError on unknown paths.
void apply_override(RunConfig& cfg, const std::string& assignment);

// Fills derived defaults (hash seed from master seed).
void finalize_run_config(RunConfig& cfg);

std::vector<EnvFamily> parse_family_list(const std::string& csv);

}  // namespace cbet
