#include "cbet/run_config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cbet/errors.hpp"

namespace cbet {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const char* section,
                    std::initializer_list<const char*> known) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok)
            throw ConfigError(std::string("unknown config key: ") + section + "." + key);
    }
}

template <typename T, typename Parser>
T parse_name(const json& v, const char* what, Parser parser) {
    const auto parsed = parser(v.template get<std::string>());
    if (!parsed) throw ConfigError(std::string("invalid ") + what + ": " + v.dump());
    return *parsed;
}

}  // namespace

std::vector<EnvFamily> parse_family_list(const std::string& csv) {
    std::vector<EnvFamily> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto fam = family_from_name(item);
        if (!fam) throw ConfigError("unknown environment family: " + item);
        out.push_back(*fam);
    }
    if (out.empty()) throw ConfigError("empty environment family list");
    return out;
}

RunConfig default_run_config() {
    RunConfig cfg;
    cfg.train.total_steps = 200000;
    return cfg;
}

std::string run_config_to_json(const RunConfig& cfg) {
    json j;
    json env;
    json families = json::array();
    for (EnvFamily f : cfg.env_families) families.push_back(family_name(f));
    env["families"] = families;
    env["master_seed"] = cfg.master_seed;
    env["noisy_tv"] = cfg.noisy_tv;
    j["env"] = env;

    j["reward"] = {{"kind", reward_kind_name(cfg.reward.kind)},
                   {"scale", cfg.reward.scale},
                   {"state_view", view_name(cfg.reward.state_view)},
                   {"change_view", view_name(cfg.reward.change_view)}};

    j["counts"] = {{"resets", reset_mode_name(cfg.counts.resets.mode)},
                   {"p", cfg.counts.resets.p},
                   {"shared_reset_coin", cfg.counts.shared_reset_coin},
                   {"keying", keying_mode_name(cfg.counts.keying)},
                   {"hash_k", cfg.counts.hash_k},
                   {"hash_seed", cfg.counts.hash_seed}};

    j["train"] = {{"gamma_i", cfg.train.gamma_i},
                  {"gamma", cfg.train.gamma},
                  {"actor_lr", cfg.train.actor_lr},
                  {"critic_lr", cfg.train.critic_lr},
                  {"entropy_coeff", cfg.train.entropy_coeff},
                  {"n_step", cfg.train.n_step},
                  {"total_steps", cfg.train.total_steps}};

    j["transfer"] = {{"task_env", family_name(cfg.task_env)},
                     {"alpha", cfg.alpha.to_string()},
                     {"tabula_rasa", cfg.tabula_rasa},
                     {"extrinsic_only", cfg.extrinsic_only}};

    j["eval"] = {{"episodes", cfg.eval_episodes},
                 {"seed", cfg.eval_seed},
                 {"greedy", cfg.eval_greedy}};

    j["io"] = {{"out_dir", cfg.out_dir}};
    return j.dump(2);
}

RunConfig run_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    RunConfig cfg = default_run_config();
    try {
        reject_unknown(j, "", {"env", "reward", "counts", "train", "transfer", "eval", "io"});
        if (j.contains("env")) {
            const json& env = j["env"];
            reject_unknown(env, "env", {"families", "master_seed", "noisy_tv"});
            if (env.contains("families")) {
                cfg.env_families.clear();
                for (const auto& f : env["families"]) {
                    const auto fam = family_from_name(f.get<std::string>());
                    if (!fam) throw ConfigError("unknown environment family: " + f.dump());
                    cfg.env_families.push_back(*fam);
                }
                if (cfg.env_families.empty()) throw ConfigError("env.families must be non-empty");
            }
            if (env.contains("master_seed")) cfg.master_seed = env["master_seed"].get<uint64_t>();
            if (env.contains("noisy_tv")) cfg.noisy_tv = env["noisy_tv"].get<bool>();
        }
        if (j.contains("reward")) {
            const json& r = j["reward"];
            reject_unknown(r, "reward", {"kind", "scale", "state_view", "change_view"});
            if (r.contains("kind"))
                cfg.reward.kind = parse_name<RewardKind>(r["kind"], "reward.kind",
                                                         reward_kind_from_name);
            if (r.contains("scale")) {
                cfg.reward.scale = r["scale"].get<double>();
                if (cfg.reward.scale <= 0) throw ConfigError("reward.scale must be > 0");
            }
            if (r.contains("state_view"))
                cfg.reward.state_view =
                    parse_name<View>(r["state_view"], "reward.state_view", view_from_name);
            if (r.contains("change_view"))
                cfg.reward.change_view =
                    parse_name<View>(r["change_view"], "reward.change_view", view_from_name);
        }
        if (j.contains("counts")) {
            const json& c = j["counts"];
            reject_unknown(c, "counts",
                           {"resets", "p", "shared_reset_coin", "keying", "hash_k", "hash_seed"});
            if (c.contains("resets"))
                cfg.counts.resets.mode =
                    parse_name<ResetMode>(c["resets"], "counts.resets", reset_mode_from_name);
            if (c.contains("p")) {
                cfg.counts.resets.p = c["p"].get<double>();
                if (cfg.counts.resets.p < 0 || cfg.counts.resets.p > 1)
                    throw ConfigError("counts.p must be in [0, 1]");
            }
            if (c.contains("shared_reset_coin"))
                cfg.counts.shared_reset_coin = c["shared_reset_coin"].get<bool>();
            if (c.contains("keying"))
                cfg.counts.keying =
                    parse_name<KeyingMode>(c["keying"], "counts.keying", keying_mode_from_name);
            if (c.contains("hash_k")) {
                cfg.counts.hash_k = c["hash_k"].get<int>();
                if (cfg.counts.hash_k <= 0) throw ConfigError("counts.hash_k must be > 0");
            }
            if (c.contains("hash_seed")) cfg.counts.hash_seed = c["hash_seed"].get<uint64_t>();
        }
        if (j.contains("train")) {
            const json& t = j["train"];
            reject_unknown(t, "train",
                           {"gamma_i", "gamma", "actor_lr", "critic_lr", "entropy_coeff",
                            "n_step", "total_steps"});
            if (t.contains("gamma_i")) cfg.train.gamma_i = t["gamma_i"].get<double>();
            if (t.contains("gamma")) cfg.train.gamma = t["gamma"].get<double>();
            if (cfg.train.gamma_i <= 0 || cfg.train.gamma_i >= 1 || cfg.train.gamma <= 0 ||
                cfg.train.gamma >= 1)
                throw ConfigError("discount factors must lie in (0, 1)");
            if (t.contains("actor_lr")) cfg.train.actor_lr = t["actor_lr"].get<double>();
            if (t.contains("critic_lr")) cfg.train.critic_lr = t["critic_lr"].get<double>();
            if (t.contains("entropy_coeff"))
                cfg.train.entropy_coeff = t["entropy_coeff"].get<double>();
            if (t.contains("n_step")) {
                cfg.train.n_step = t["n_step"].get<int>();
                if (cfg.train.n_step < 1) throw ConfigError("train.n_step must be >= 1");
            }
            if (t.contains("total_steps")) cfg.train.total_steps = t["total_steps"].get<uint64_t>();
        }
        if (j.contains("transfer")) {
            const json& t = j["transfer"];
            reject_unknown(t, "transfer", {"task_env", "alpha", "tabula_rasa", "extrinsic_only"});
            if (t.contains("task_env"))
                cfg.task_env = parse_name<EnvFamily>(t["task_env"], "transfer.task_env",
                                                     family_from_name);
            if (t.contains("alpha")) {
                const auto alpha = AlphaSchedule::parse(t["alpha"].get<std::string>());
                if (!alpha) throw ConfigError("invalid transfer.alpha: " + t["alpha"].dump());
                cfg.alpha = *alpha;
            }
            if (t.contains("tabula_rasa")) cfg.tabula_rasa = t["tabula_rasa"].get<bool>();
            if (t.contains("extrinsic_only")) cfg.extrinsic_only = t["extrinsic_only"].get<bool>();
        }
        if (j.contains("eval")) {
            const json& e = j["eval"];
            reject_unknown(e, "eval", {"episodes", "seed", "greedy"});
            if (e.contains("episodes")) {
                cfg.eval_episodes = e["episodes"].get<int>();
                if (cfg.eval_episodes <= 0) throw ConfigError("eval.episodes must be > 0");
            }
            if (e.contains("seed")) cfg.eval_seed = e["seed"].get<uint64_t>();
            if (e.contains("greedy")) cfg.eval_greedy = e["greedy"].get<bool>();
        }
        if (j.contains("io")) {
            const json& io = j["io"];
            reject_unknown(io, "io", {"out_dir"});
            if (io.contains("out_dir")) cfg.out_dir = io["out_dir"].get<std::string>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return run_config_from_json(buffer.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override must look like section.key=value: " + assignment);
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);
    const auto dot = path.find('.');
    if (dot == std::string::npos)
        throw ConfigError("override must look like section.key=value: " + assignment);
    const std::string section = path.substr(0, dot);
    const std::string key = path.substr(dot + 1);

    json patch = json::parse(run_config_to_json(cfg));
    if (section == "env" && key == "families") {
        json families = json::array();
        for (EnvFamily f : parse_family_list(value)) families.push_back(family_name(f));
        patch["env"]["families"] = families;
    } else {
        if (!patch.contains(section) || !patch[section].contains(key))
            throw ConfigError("unknown config key: " + path);
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (const json::exception&) {
            parsed = value;  // plain string
        }
        // Keep the original type: a quoted enum name stays a string.
        if (patch[section][key].is_string() && !parsed.is_string()) parsed = value;
        patch[section][key] = parsed;
    }
    cfg = run_config_from_json(patch.dump());
}

void finalize_run_config(RunConfig& cfg) {
    if (cfg.counts.hash_seed == 0)
        cfg.counts.hash_seed = mix_seed(cfg.master_seed, 0x4a5448ULL);
    cfg.train.noisy_tv = cfg.noisy_tv;
    cfg.train.env_schedule = cfg.env_families;
}

}  // namespace cbet
