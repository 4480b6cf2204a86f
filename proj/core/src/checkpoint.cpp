#include "cbet/checkpoint.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cbet/errors.hpp"

namespace cbet {
namespace {

std::string to_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (unsigned char c : bytes) {
        out.push_back(digits[c >> 4]);
        out.push_back(digits[c & 0xf]);
    }
    return out;
}

std::string from_hex(const std::string& hex) {
    if (hex == "-") return {};
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        throw IncompatibleCheckpoint("bad hex in checkpoint");
    };
    std::string out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i + 1 < hex.size(); i += 2)
        out.push_back(static_cast<char>((nibble(hex[i]) << 4) | nibble(hex[i + 1])));
    return out;
}

std::string hex_key(const std::string& key) { return key.empty() ? "-" : to_hex(key); }

template <typename Map>
std::vector<typename Map::const_iterator> sorted_iters(const Map& map) {
    std::vector<typename Map::const_iterator> order;
    order.reserve(map.size());
    for (auto it = map.begin(); it != map.end(); ++it) order.push_back(it);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a->first < b->first; });
    return order;
}

void write_counts(std::ostream& os, const char* label, const CountTable& table) {
    os << "counts " << label << ' ' << table.total_increments() << ' '
       << table.increments_since_reset() << ' ' << table.resets_performed() << ' '
       << table.entries().size() << '\n';
    for (const auto& it : sorted_iters(table.entries()))
        os << hex_key(it->first) << ' ' << it->second << '\n';
}

void read_counts(std::istream& is, CountTable& table) {
    uint64_t total = 0, since = 0, resets = 0;
    size_t n = 0;
    is >> total >> since >> resets >> n;
    for (size_t i = 0; i < n; ++i) {
        std::string hex;
        uint64_t count = 0;
        is >> hex >> count;
        table.restore_entry(from_hex(hex), count);
    }
    table.set_counters(total, since, resets);
}

void write_policy(std::ostream& os, const char* label, const PolicyTable& policy) {
    os << label << "_logits " << policy.logits.size() << '\n';
    for (const auto& it : sorted_iters(policy.logits)) {
        os << hex_key(it->first);
        for (double v : it->second) os << ' ' << format_double(v);
        os << '\n';
    }
    os << label << "_values " << policy.values.size() << '\n';
    for (const auto& it : sorted_iters(policy.values))
        os << hex_key(it->first) << ' ' << format_double(it->second) << '\n';
}

void read_policy(std::istream& is, size_t n_logits, PolicyTable& policy) {
    for (size_t i = 0; i < n_logits; ++i) {
        std::string hex;
        is >> hex;
        Logits row;
        for (double& v : row) is >> v;
        policy.logits[from_hex(hex)] = row;
    }
    std::string tag;
    size_t n_values = 0;
    is >> tag >> n_values;
    for (size_t i = 0; i < n_values; ++i) {
        std::string hex;
        double v = 0;
        is >> hex >> v;
        policy.values[from_hex(hex)] = v;
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

uint64_t fnv1a64(const std::string& bytes) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string serialize_logits(const PolicyTable& policy) {
    std::ostringstream os;
    write_policy(os, "policy", policy);
    return os.str();
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ostringstream os;
    os << "cbet-checkpoint v" << ckpt.version << '\n';
    os << "kind " << ckpt.kind << '\n';
    os << "step " << ckpt.step << '\n';
    os << "episodes " << ckpt.episodes << '\n';
    os << "rng " << (ckpt.rng_state.empty() ? "-" : ckpt.rng_state) << '\n';
    nlohmann::json cfg = nlohmann::json::parse(run_config_to_json(ckpt.config));
    os << "config " << cfg.dump() << '\n';
    write_policy(os, "policy", ckpt.policy);
    os << "bias " << (ckpt.bias ? 1 : 0) << '\n';
    if (ckpt.bias) write_policy(os, "bias", *ckpt.bias);
    write_counts(os, "state", ckpt.state_counts);
    write_counts(os, "change", ckpt.change_counts);
    os << "end\n";

    std::ofstream out(path, std::ios::binary);
    if (!out) throw CbetError("cannot write checkpoint: " + path);
    const std::string body = os.str();
    out.write(body.data(), static_cast<std::streamsize>(body.size()));
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IncompatibleCheckpoint("cannot open checkpoint: " + path);
    Checkpoint ckpt;
    std::string line;
    if (!std::getline(in, line) || line.rfind("cbet-checkpoint v", 0) != 0)
        throw IncompatibleCheckpoint("not a cbet checkpoint: " + path);
    ckpt.version = std::stoi(line.substr(17));
    if (ckpt.version != 1)
        throw IncompatibleCheckpoint("unsupported checkpoint version: " + line);

    std::string tag;
    in >> tag >> ckpt.kind;                    // kind
    in >> tag >> ckpt.step;                    // step
    in >> tag >> ckpt.episodes;                // episodes
    in >> tag;                                 // rng
    std::getline(in, line);
    ckpt.rng_state = line.empty() ? "" : line.substr(1);
    if (ckpt.rng_state == "-") ckpt.rng_state.clear();
    in >> tag;                                 // config
    std::getline(in, line);
    ckpt.config = run_config_from_json(line);

    size_t n = 0;
    in >> tag >> n;  // policy_logits
    read_policy(in, n, ckpt.policy);
    int has_bias = 0;
    in >> tag >> has_bias;  // bias
    if (has_bias) {
        PolicyTable bias;
        in >> tag >> n;  // bias_logits
        read_policy(in, n, bias);
        ckpt.bias = std::move(bias);
    }
    in >> tag >> tag;  // counts state
    read_counts(in, ckpt.state_counts);
    in >> tag >> tag;  // counts change
    read_counts(in, ckpt.change_counts);
    in >> tag;
    if (tag != "end") throw IncompatibleCheckpoint("truncated checkpoint: " + path);
    return ckpt;
}

}  // namespace cbet
