#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>

#include "cbet/perception.hpp"
#include "cbet/rng.hpp"

namespace cbet {

enum class ResetMode : uint8_t { None = 0, Episodic = 1, RandomPerStep = 2 };

const char* reset_mode_name(ResetMode m);
std::optional<ResetMode> reset_mode_from_name(const std::string& name);

struct ResetPolicy {
    ResetMode mode = ResetMode::None;
    double p = 0.0;  // RandomPerStep only
};

// Warns (does not error) when p > 1 - gamma_i; the no-reset and aggressive
// settings stay runnable for ablations.
std::optional<std::string> reset_policy_warning(const ResetPolicy& policy, double gamma_i);

// Visitation pseudocounts over opaque keys. Increment-then-read: observe
// returns the post-increment count, so reward denominators never see zero.
class CountTable {
  public:
    uint64_t observe(const CountKey& code) {
        ++total_increments_;
        ++increments_since_reset_;
        return ++map_[code];
    }

    // RandomPerStep draws once per call (call once per environment step);
    // Episodic resets only when at_episode_boundary is set.
    bool maybe_reset(Rng& rng, const ResetPolicy& policy, bool at_episode_boundary = false);

    uint64_t count(const CountKey& code) const {
        const auto it = map_.find(code);
        return it == map_.end() ? 0 : it->second;
    }

    size_t distinct_codes() const { return map_.size(); }
    uint64_t total_increments() const { return total_increments_; }
    uint64_t increments_since_reset() const { return increments_since_reset_; }
    uint64_t resets_performed() const { return resets_performed_; }
    const std::unordered_map<CountKey, uint64_t>& entries() const { return map_; }

    void reset_now();
    void restore_entry(const CountKey& code, uint64_t count);  // checkpoint load
    void set_counters(uint64_t total, uint64_t since_reset, uint64_t resets);

  private:
    std::unordered_map<CountKey, uint64_t> map_;
    uint64_t total_increments_ = 0;
    uint64_t increments_since_reset_ = 0;
    uint64_t resets_performed_ = 0;
};

}  // namespace cbet
