#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cbet/agent.hpp"
#include "cbet/counts.hpp"
#include "cbet/run_config.hpp"

namespace cbet {

// Versioned text checkpoint. Entries are written sorted, floats with exact
// round-trip formatting, so save -> load -> save is byte-identical.
struct Checkpoint {
    int version = 1;
    std::string kind = "pretrain";  // "pretrain" or "task"
    RunConfig config;               // resolved config echo
    PolicyTable policy;
    std::optional<PolicyTable> bias;  // frozen exploration logits (task checkpoints)
    CountTable state_counts;
    CountTable change_counts;
    std::string rng_state;  // opaque token string
    uint64_t step = 0;
    uint64_t episodes = 0;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);  // throws IncompatibleCheckpoint

// Canonical serialization of a policy's logits (sorted, exact floats); used
// for the frozen-bias immutability check.
std::string serialize_logits(const PolicyTable& policy);

uint64_t fnv1a64(const std::string& bytes);

// Exact round-trip double formatting ("%.17g").
std::string format_double(double v);

}  // namespace cbet
