#include "cbet/rewards.hpp"

#include <cmath>

#include "cbet/errors.hpp"

namespace cbet {

const char* reward_kind_name(RewardKind k) {
    switch (k) {
        case RewardKind::CBET: return "cbet";
        case RewardKind::CountOnly: return "count";
        case RewardKind::ChangeOnly: return "change";
        case RewardKind::Product: return "product";
        case RewardKind::WeightedSum: return "weighted_sum";
        case RewardKind::WeightedSumSquared: return "weighted_sum_squared";
        case RewardKind::SqrtOfSum: return "sqrt_of_sum";
        case RewardKind::CBETUnsquared: return "cbet_unsquared";
    }
    return "?";
}

std::optional<RewardKind> reward_kind_from_name(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(RewardKind::CBETUnsquared); ++k)
        if (name == reward_kind_name(static_cast<RewardKind>(k)))
            return static_cast<RewardKind>(k);
    return std::nullopt;
}

const char* view_name(View v) { return v == View::Ego ? "ego" : "pano"; }

std::optional<View> view_from_name(const std::string& name) {
    if (name == "ego") return View::Ego;
    if (name == "pano") return View::Pano;
    return std::nullopt;
}

double intrinsic_reward(const RewardSpec& spec, uint64_t n_state, uint64_t n_change) {
    if (n_state < 1 || n_change < 1)
        throw ContractViolation("intrinsic_reward: counts must be post-increment (>= 1)");
    const double ns = static_cast<double>(n_state);
    const double nc = static_cast<double>(n_change);
    switch (spec.kind) {
        case RewardKind::CBET:
            return 1.0 / (ns + nc);
        case RewardKind::CountOnly:
            return 1.0 / std::sqrt(ns);
        case RewardKind::ChangeOnly:
            return 1.0 / std::sqrt(nc);
        case RewardKind::Product:
            return 1.0 / std::sqrt(ns * nc);
        case RewardKind::WeightedSum:
            return 0.5 / std::sqrt(ns) + 0.5 / std::sqrt(nc);
        case RewardKind::WeightedSumSquared: {
            const double s = 0.5 / std::sqrt(ns) + 0.5 / std::sqrt(nc);
            return s * s;
        }
        case RewardKind::SqrtOfSum:
        case RewardKind::CBETUnsquared:
            return 1.0 / std::sqrt(ns + nc);
    }
    throw ContractViolation("intrinsic_reward: unknown reward kind");
}

IntrinsicStep make_intrinsic_step(const RewardSpec& spec, uint64_t n_state, uint64_t n_change) {
    IntrinsicStep step;
    step.n_state = n_state;
    step.n_change = n_change;
    step.r_raw = intrinsic_reward(spec, n_state, n_change);
    step.r_scaled = spec.scale * step.r_raw;
    return step;
}

std::vector<double> reward_trend(std::span<const double> rewards, size_t window) {
    std::vector<double> out;
    if (rewards.empty() || window == 0) return out;
    for (size_t start = 0; start < rewards.size(); start += window) {
        const size_t end = std::min(start + window, rewards.size());
        double sum = 0.0;
        for (size_t i = start; i < end; ++i) sum += rewards[i];
        out.push_back(sum / static_cast<double>(end - start));
    }
    return out;
}

}  // namespace cbet
