#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "cbet/counts.hpp"
#include "cbet/perception.hpp"
#include "cbet/rewards.hpp"

namespace cbet {

// Raw keys the exact observation bytes (lossless, the default for
// gridworlds); Hash keys the ternary code instead.
enum class KeyingMode : uint8_t { Raw = 0, Hash = 1 };

const char* keying_mode_name(KeyingMode m);
std::optional<KeyingMode> keying_mode_from_name(const std::string& name);

struct CountsConfig {
    ResetPolicy resets{ResetMode::RandomPerStep, 0.001};
    bool shared_reset_coin = false;  // one Bernoulli draw for both tables when set
    KeyingMode keying = KeyingMode::Raw;
    int hash_k = 128;
    uint64_t hash_seed = 0;
};

// Turns views into count/policy keys according to the keying mode and the
// reward spec's view choices. Immutable after construction; safe to share
// across read-only evaluation episodes.
class ObsPipeline {
  public:
    ObsPipeline(KeyingMode keying, int hash_k, uint64_t hash_seed, View state_view,
                View change_view);

    CountKey policy_key(const EgoView& ego) const;  // always egocentric
    CountKey state_key(const EgoView& ego, const PanoView& pano) const;
    ChangeCode change(const EgoView& ego_before, const PanoView& pano_before,
                      const EgoView& ego_after, const PanoView& pano_after) const;
    CountKey change_key(const ChangeCode& c) const;

    KeyingMode keying() const { return keying_; }
    View state_view() const { return state_view_; }
    View change_view() const { return change_view_; }

  private:
    KeyingMode keying_;
    View state_view_;
    View change_view_;
    std::optional<HashParams> ego_params_;
    std::optional<HashParams> pano_params_;
};

}  // namespace cbet
