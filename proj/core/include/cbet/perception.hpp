#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cbet/world.hpp"

namespace cbet {

constexpr int kViewSide = 7;
constexpr int kEgoDim = kViewSide * kViewSide * 3;  // 147
constexpr int kPanoDim = 4 * kEgoDim;               // 588

// 7x7x3 window in front of the agent (agent's own cell included), encoded as
// (kind id, color id, door state id) per cell. Occluded and out-of-grid cells
// encode the fixed unseen triple (0,0,0); object ids start at 1.
struct EgoView {
    std::array<uint8_t, kEgoDim> data{};

    bool operator==(const EgoView&) const = default;
};

// Four egocentric views rendered at absolute headings N, E, S, W in that
// order. Independent of the agent's actual heading.
struct PanoView {
    std::array<uint8_t, kPanoDim> data{};

    bool operator==(const PanoView&) const = default;
};

// Element-wise difference after - before. Dimension follows the views diffed
// (panoramic by default, egocentric for the ablation, arbitrary for fixtures).
using ChangeCode = std::vector<int>;

EgoView ego_view(const WorldState& state);
PanoView pano_view(const WorldState& state);

ChangeCode change_code(std::span<const uint8_t> before, std::span<const uint8_t> after);
ChangeCode change_code(std::span<const int> before, std::span<const int> after);
bool is_zero(const ChangeCode& c);

// Static ternary hash: g(x) = tanh(A x) + w with A, w standard normal;
// code_i = +1 if g_i > 0.5, -1 if g_i < -0.5, else 0.
struct HashParams {
    int k = 128;
    int d = 0;
    uint64_t master_seed = 0;
    std::vector<double> A;  // k x d, row-major
    std::vector<double> w;  // k
};

HashParams make_hash_params(int k, int d, uint64_t master_seed);
std::vector<int8_t> hash_encode(std::span<const double> x, const HashParams& params);
std::vector<int8_t> hash_encode(std::span<const int> x, const HashParams& params);
std::vector<int8_t> hash_encode(std::span<const uint8_t> x, const HashParams& params);

// Count keys: opaque byte strings.
using CountKey = std::string;

CountKey key_of_bytes(std::span<const uint8_t> v);
CountKey key_of_trits(std::span<const int8_t> code);
// Sparse (index, delta) encoding; the zero change maps to the empty key.
CountKey key_of_change(const ChangeCode& c);

}  // namespace cbet
