#include "cbet/counts.hpp"

#include <sstream>

namespace cbet {

const char* reset_mode_name(ResetMode m) {
    switch (m) {
        case ResetMode::None: return "none";
        case ResetMode::Episodic: return "episodic";
        case ResetMode::RandomPerStep: return "random";
    }
    return "?";
}

std::optional<ResetMode> reset_mode_from_name(const std::string& name) {
    if (name == "none") return ResetMode::None;
    if (name == "episodic") return ResetMode::Episodic;
    if (name == "random" || name == "random_per_step") return ResetMode::RandomPerStep;
    return std::nullopt;
}

std::optional<std::string> reset_policy_warning(const ResetPolicy& policy, double gamma_i) {
    if (policy.mode != ResetMode::RandomPerStep) return std::nullopt;
    if (policy.p <= 1.0 - gamma_i) return std::nullopt;
    std::ostringstream os;
    os << "reset probability p=" << policy.p << " exceeds 1 - gamma_i=" << (1.0 - gamma_i)
       << "; counts may forget faster than the reward horizon";
    return os.str();
}

bool CountTable::maybe_reset(Rng& rng, const ResetPolicy& policy, bool at_episode_boundary) {
    switch (policy.mode) {
        case ResetMode::None:
            return false;
        case ResetMode::Episodic:
            if (!at_episode_boundary) return false;
            reset_now();
            return true;
        case ResetMode::RandomPerStep:
            if (!rng.bernoulli(policy.p)) return false;
            reset_now();
            return true;
    }
    return false;
}

void CountTable::reset_now() {
    map_.clear();
    increments_since_reset_ = 0;
    ++resets_performed_;
}

void CountTable::restore_entry(const CountKey& code, uint64_t count) { map_[code] = count; }

void CountTable::set_counters(uint64_t total, uint64_t since_reset, uint64_t resets) {
    total_increments_ = total;
    increments_since_reset_ = since_reset;
    resets_performed_ = resets;
}

}  // namespace cbet
