#include "cbet/observation.hpp"

namespace cbet {

const char* keying_mode_name(KeyingMode m) {
    return m == KeyingMode::Raw ? "raw" : "hash";
}

std::optional<KeyingMode> keying_mode_from_name(const std::string& name) {
    if (name == "raw") return KeyingMode::Raw;
    if (name == "hash") return KeyingMode::Hash;
    return std::nullopt;
}

ObsPipeline::ObsPipeline(KeyingMode keying, int hash_k, uint64_t hash_seed, View state_view,
                         View change_view)
    : keying_(keying), state_view_(state_view), change_view_(change_view) {
    if (keying_ == KeyingMode::Hash) {
        ego_params_ = make_hash_params(hash_k, kEgoDim, hash_seed);
        pano_params_ = make_hash_params(hash_k, kPanoDim, hash_seed);
    }
}

CountKey ObsPipeline::policy_key(const EgoView& ego) const {
    if (keying_ == KeyingMode::Raw) return key_of_bytes(ego.data);
    return key_of_trits(hash_encode(std::span<const uint8_t>(ego.data), *ego_params_));
}

CountKey ObsPipeline::state_key(const EgoView& ego, const PanoView& pano) const {
    if (state_view_ == View::Ego) return policy_key(ego);
    if (keying_ == KeyingMode::Raw) return key_of_bytes(pano.data);
    return key_of_trits(hash_encode(std::span<const uint8_t>(pano.data), *pano_params_));
}

ChangeCode ObsPipeline::change(const EgoView& ego_before, const PanoView& pano_before,
                               const EgoView& ego_after, const PanoView& pano_after) const {
    if (change_view_ == View::Ego)
        return change_code(std::span<const uint8_t>(ego_before.data),
                           std::span<const uint8_t>(ego_after.data));
    return change_code(std::span<const uint8_t>(pano_before.data),
                       std::span<const uint8_t>(pano_after.data));
}

CountKey ObsPipeline::change_key(const ChangeCode& c) const {
    if (keying_ == KeyingMode::Raw) return key_of_change(c);
    const HashParams& params =
        (change_view_ == View::Ego) ? *ego_params_ : *pano_params_;
    return key_of_trits(hash_encode(std::span<const int>(c), params));
}

}  // namespace cbet
