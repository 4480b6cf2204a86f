#include "cbet/perception.hpp"

#include <algorithm>
#include <cmath>

#include "cbet/errors.hpp"

namespace cbet {
namespace {

bool see_behind(const Cell& c) {
    if (c.kind == Kind::Wall) return false;
    if (c.kind == Kind::Door && c.door != DoorState::Open) return false;
    return true;
}

}  // namespace

EgoView ego_view(const WorldState& s) {
    // Ego frame: column i in [0,6], row j in [0,6]; the agent sits at (3,6)
    // facing row 0. world(i,j) = agent + (6-j)*forward + (i-3)*right.
    const Pos fwd = dir_vec(s.agent_dir);
    const Pos right = dir_vec(static_cast<Dir>((static_cast<int>(s.agent_dir) + 1) % 4));

    std::array<const Cell*, kViewSide * kViewSide> cells{};
    for (int j = 0; j < kViewSide; ++j) {
        for (int i = 0; i < kViewSide; ++i) {
            const Pos p{s.agent_pos.row + (6 - j) * fwd.row + (i - 3) * right.row,
                        s.agent_pos.col + (6 - j) * fwd.col + (i - 3) * right.col};
            cells[j * kViewSide + i] = s.in_bounds(p) ? &s.at(p) : nullptr;
        }
    }

    // Shadow-casting visibility sweep from the agent row outward. Opaque cells
    // are visible themselves but do not propagate visibility.
    std::array<bool, kViewSide * kViewSide> mask{};
    mask[6 * kViewSide + 3] = true;
    for (int j = kViewSide - 1; j >= 0; --j) {
        for (int i = 0; i < kViewSide - 1; ++i) {
            const Cell* cell = cells[j * kViewSide + i];
            if (!mask[j * kViewSide + i] || !cell || !see_behind(*cell)) continue;
            mask[j * kViewSide + i + 1] = true;
            if (j > 0) {
                mask[(j - 1) * kViewSide + i + 1] = true;
                mask[(j - 1) * kViewSide + i] = true;
            }
        }
        for (int i = kViewSide - 1; i >= 1; --i) {
            const Cell* cell = cells[j * kViewSide + i];
            if (!mask[j * kViewSide + i] || !cell || !see_behind(*cell)) continue;
            mask[j * kViewSide + i - 1] = true;
            if (j > 0) {
                mask[(j - 1) * kViewSide + i - 1] = true;
                mask[(j - 1) * kViewSide + i] = true;
            }
        }
    }

    EgoView view;
    for (int idx = 0; idx < kViewSide * kViewSide; ++idx) {
        const Cell* cell = cells[idx];
        uint8_t* out = &view.data[static_cast<size_t>(idx) * 3];
        if (!cell || !mask[idx]) continue;  // unseen triple stays (0,0,0)
        out[0] = static_cast<uint8_t>(cell->kind);
        out[1] = static_cast<uint8_t>(cell->color);
        out[2] = static_cast<uint8_t>(cell->door);
    }
    return view;
}

PanoView pano_view(const WorldState& s) {
    PanoView pano;
    WorldState rotated = s;
    for (int h = 0; h < 4; ++h) {
        rotated.agent_dir = static_cast<Dir>(h);  // N, E, S, W
        const EgoView v = ego_view(rotated);
        std::copy(v.data.begin(), v.data.end(), pano.data.begin() + h * kEgoDim);
    }
    return pano;
}

namespace {

template <typename T>
ChangeCode diff(std::span<const T> before, std::span<const T> after) {
    if (before.size() != after.size())
        throw ShapeError("change_code: length mismatch " + std::to_string(before.size()) +
                         " vs " + std::to_string(after.size()));
    ChangeCode out(before.size());
    for (size_t i = 0; i < before.size(); ++i)
        out[i] = static_cast<int>(after[i]) - static_cast<int>(before[i]);
    return out;
}

}  // namespace

ChangeCode change_code(std::span<const uint8_t> before, std::span<const uint8_t> after) {
    return diff(before, after);
}

ChangeCode change_code(std::span<const int> before, std::span<const int> after) {
    return diff(before, after);
}

bool is_zero(const ChangeCode& c) {
    return std::all_of(c.begin(), c.end(), [](int v) { return v == 0; });
}

HashParams make_hash_params(int k, int d, uint64_t master_seed) {
    HashParams p;
    p.k = k;
    p.d = d;
    p.master_seed = master_seed;
    Rng rng(mix_seed(master_seed, 0x7e3a0000ULL + static_cast<uint64_t>(d)));
    p.A.resize(static_cast<size_t>(k) * d);
    for (double& a : p.A) a = rng.normal();
    p.w.resize(static_cast<size_t>(k));
    for (double& w : p.w) w = rng.normal();
    return p;
}

std::vector<int8_t> hash_encode(std::span<const double> x, const HashParams& params) {
    if (static_cast<int>(x.size()) != params.d)
        throw ShapeError("hash_encode: input dim " + std::to_string(x.size()) +
                         " != params.d " + std::to_string(params.d));
    std::vector<int8_t> code(static_cast<size_t>(params.k));
    for (int i = 0; i < params.k; ++i) {
        const double* row = params.A.data() + static_cast<size_t>(i) * params.d;
        double dot = 0.0;
        for (int j = 0; j < params.d; ++j) dot += row[j] * x[j];
        const double g = std::tanh(dot) + params.w[static_cast<size_t>(i)];
        code[static_cast<size_t>(i)] = g > 0.5 ? 1 : (g < -0.5 ? -1 : 0);
    }
    return code;
}

namespace {

template <typename T>
std::vector<int8_t> hash_cast(std::span<const T> x, const HashParams& params) {
    std::vector<double> tmp(x.begin(), x.end());
    return hash_encode(std::span<const double>(tmp), params);
}

}  // namespace

std::vector<int8_t> hash_encode(std::span<const int> x, const HashParams& params) {
    return hash_cast(x, params);
}

std::vector<int8_t> hash_encode(std::span<const uint8_t> x, const HashParams& params) {
    return hash_cast(x, params);
}

CountKey key_of_bytes(std::span<const uint8_t> v) {
    return CountKey(reinterpret_cast<const char*>(v.data()), v.size());
}

CountKey key_of_trits(std::span<const int8_t> code) {
    CountKey out;
    out.reserve(code.size());
    for (int8_t t : code) out.push_back(static_cast<char>(t + 1));  // {-1,0,1} -> {0,1,2}
    return out;
}

CountKey key_of_change(const ChangeCode& c) {
    CountKey out;
    for (size_t i = 0; i < c.size(); ++i) {
        if (c[i] == 0) continue;
        const auto idx = static_cast<uint16_t>(i);
        const auto delta = static_cast<int16_t>(c[i]);
        out.push_back(static_cast<char>(idx & 0xff));
        out.push_back(static_cast<char>((idx >> 8) & 0xff));
        out.push_back(static_cast<char>(delta & 0xff));
        out.push_back(static_cast<char>((delta >> 8) & 0xff));
    }
    return out;
}

}  // namespace cbet
