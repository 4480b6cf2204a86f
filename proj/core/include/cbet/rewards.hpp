#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cbet {

enum class RewardKind : uint8_t {
    CBET = 0,             // 1 / (N(s') + N(c))
    CountOnly = 1,        // 1 / sqrt(N(s'))
    ChangeOnly = 2,       // 1 / sqrt(N(c))
    Product = 3,          // 1 / sqrt(N(s') N(c))
    WeightedSum = 4,      // 0.5 / sqrt(N(s')) + 0.5 / sqrt(N(c))
    WeightedSumSquared = 5,
    SqrtOfSum = 6,        // 1 / sqrt(N(s') + N(c))
    CBETUnsquared = 7,    // alias of SqrtOfSum
};

const char* reward_kind_name(RewardKind k);
std::optional<RewardKind> reward_kind_from_name(const std::string& name);

enum class View : uint8_t { Ego = 0, Pano = 1 };

const char* view_name(View v);
std::optional<View> view_from_name(const std::string& name);

struct RewardSpec {
    RewardKind kind = RewardKind::CBET;
    double scale = 0.005;
    View state_view = View::Ego;
    View change_view = View::Pano;
};

// One logged reward event; counts are post-increment values.
struct IntrinsicStep {
    uint64_t n_state = 0;
    uint64_t n_change = 0;
    double r_raw = 0.0;
    double r_scaled = 0.0;
};

// Raw (unscaled) intrinsic reward from post-increment counts. Throws
// ContractViolation on counts < 1, which signals a missing observe call.
double intrinsic_reward(const RewardSpec& spec, uint64_t n_state, uint64_t n_change);

IntrinsicStep make_intrinsic_step(const RewardSpec& spec, uint64_t n_state, uint64_t n_change);

// Means over consecutive non-overlapping windows; a short tail window is
// averaged over its actual length.
std::vector<double> reward_trend(std::span<const double> rewards, size_t window);

}  // namespace cbet
