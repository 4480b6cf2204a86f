// Command-line front end: pretrain -> checkpoint -> transfer -> evaluate,
// plus the canned diagnostics. Exit codes: 0 success, 2 config error,
// 3 runtime contract violation.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cbet/artifacts.hpp"
#include "cbet/checkpoint.hpp"
#include "cbet/diagnostics.hpp"
#include "cbet/errors.hpp"
#include "cbet/eval.hpp"
#include "cbet/run_config.hpp"
#include "cbet/training.hpp"

namespace {

using cbet::RunConfig;
using nlohmann::json;

struct CommonFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--set", flags.overrides,
                    "Override config entries, e.g. --set train.total_steps=50000");
    cmd->add_option("--out", flags.out_dir, "Output directory");
}

RunConfig resolve_config(const CommonFlags& flags) {
    RunConfig cfg =
        flags.config_path.empty() ? cbet::default_run_config() : cbet::load_run_config(flags.config_path);
    for (const std::string& o : flags.overrides) cbet::apply_override(cfg, o);
    if (!flags.out_dir.empty()) cfg.out_dir = flags.out_dir;
    if (const char* env_dir = std::getenv("CBET_OUTPUT_DIR")) cfg.out_dir = env_dir;
    return cfg;
}

void echo_config(const RunConfig& cfg) {
    cbet::ensure_dir(cfg.out_dir);
    cbet::write_text_file(cfg.out_dir + "/config.json", cbet::run_config_to_json(cfg) + "\n");
}

void warn_resets(const RunConfig& cfg) {
    if (const auto w = cbet::reset_policy_warning(cfg.counts.resets, cfg.train.gamma_i))
        std::cerr << "warning: " << *w << "\n";
}

int run_pretrain(const RunConfig& cfg_in, size_t trend_window) {
    RunConfig cfg = cfg_in;
    cbet::finalize_run_config(cfg);
    echo_config(cfg);
    warn_resets(cfg);

    cbet::MetricsCsvWriter csv(cfg.out_dir + "/metrics.csv");
    std::vector<double> raw_rewards;
    raw_rewards.reserve(cfg.train.total_steps);
    cbet::TrainHooks hooks;
    hooks.on_episode = [&csv](const cbet::EpisodeRecord& ep) { csv.add(ep); };
    hooks.on_intrinsic = [&raw_rewards](uint64_t, const cbet::IntrinsicStep& s) {
        raw_rewards.push_back(s.r_raw);
    };

    cbet::PretrainResult result =
        cbet::pretrain(cfg.train, cfg.reward, cfg.counts, cfg.master_seed, hooks);
    csv.flush();
    cbet::write_trend_csv(cfg.out_dir + "/intrinsic_trend.csv",
                          cbet::reward_trend(raw_rewards, trend_window), trend_window);

    cbet::Checkpoint ckpt;
    ckpt.kind = "pretrain";
    ckpt.config = cfg;
    ckpt.policy = std::move(result.policy);
    ckpt.state_counts = std::move(result.state_counts);
    ckpt.change_counts = std::move(result.change_counts);
    ckpt.rng_state = result.rng_state;
    ckpt.step = result.steps;
    ckpt.episodes = result.episodes;
    cbet::save_checkpoint(ckpt, cfg.out_dir + "/checkpoint.txt");
    std::cout << "pretrain done: " << result.steps << " steps, " << result.episodes
              << " episodes, policy keys " << ckpt.policy.logits.size() << "\n";
    return 0;
}

int run_transfer(const RunConfig& cfg_in, const std::string& from, bool tabula_rasa,
                 bool extrinsic_only, const std::string& env_name,
                 const std::string& alpha_text) {
    RunConfig cfg = cfg_in;
    if (!env_name.empty()) {
        const auto fam = cbet::family_from_name(env_name);
        if (!fam) throw cbet::ConfigError("unknown environment family: " + env_name);
        cfg.task_env = *fam;
    }
    if (!alpha_text.empty()) {
        const auto alpha = cbet::AlphaSchedule::parse(alpha_text);
        if (!alpha) throw cbet::ConfigError("invalid alpha schedule: " + alpha_text);
        cfg.alpha = *alpha;
    }
    if (tabula_rasa) cfg.tabula_rasa = true;
    if (extrinsic_only) cfg.extrinsic_only = true;
    if (!cfg.tabula_rasa && from.empty())
        throw cbet::ConfigError("transfer requires --from checkpoint (or --tabula-rasa)");

    std::optional<cbet::Checkpoint> source;
    if (!from.empty()) {
        source = cbet::load_checkpoint(from);
        // The frozen bias was keyed under the source run's observation
        // settings; a different keying mode cannot address it.
        if (source->config.counts.keying != cfg.counts.keying ||
            (cfg.counts.keying == cbet::KeyingMode::Hash &&
             (source->config.counts.hash_seed != cfg.counts.hash_seed ||
              source->config.counts.hash_k != cfg.counts.hash_k)))
            throw cbet::IncompatibleCheckpoint(
                "checkpoint keying mode does not match the run config");
    }

    cbet::finalize_run_config(cfg);
    echo_config(cfg);
    warn_resets(cfg);

    cbet::TransferSetup setup;
    setup.task_env = cfg.task_env;
    setup.alpha = cfg.alpha;
    if (source && !cfg.tabula_rasa) setup.frozen_bias = &source->policy;
    if (!cfg.extrinsic_only && (cfg.tabula_rasa || !source)) setup.intrinsic = cfg.reward;
    if (cfg.extrinsic_only) setup.intrinsic.reset();

    cbet::MetricsCsvWriter csv(cfg.out_dir + "/metrics.csv");
    cbet::TrainHooks hooks;
    hooks.on_episode = [&csv](const cbet::EpisodeRecord& ep) { csv.add(ep); };

    cbet::TaskTrainResult result =
        cbet::transfer_train(setup, cfg.train, cfg.counts, cfg.master_seed, hooks);
    csv.flush();

    cbet::Checkpoint ckpt;
    ckpt.kind = "task";
    ckpt.config = cfg;
    ckpt.policy = std::move(result.policy);
    if (setup.frozen_bias) {
        cbet::PolicyTable bias;
        bias.logits = setup.frozen_bias->logits;  // values are discarded at transfer
        ckpt.bias = std::move(bias);
    }
    ckpt.state_counts = std::move(result.state_counts);
    ckpt.change_counts = std::move(result.change_counts);
    ckpt.rng_state = result.rng_state;
    ckpt.step = result.steps;
    ckpt.episodes = result.episodes;
    cbet::save_checkpoint(ckpt, cfg.out_dir + "/checkpoint.txt");
    std::cout << "transfer done: " << result.steps << " steps, " << result.episodes
              << " episodes on " << cbet::family_name(cfg.task_env) << "\n";
    return 0;
}

int run_evaluate(const RunConfig& cfg_in, const std::string& from, const std::string& env_name,
                 std::optional<uint64_t> layout_seed) {
    if (from.empty()) throw cbet::ConfigError("evaluate requires --from checkpoint");
    const cbet::Checkpoint ckpt = cbet::load_checkpoint(from);

    RunConfig cfg = cfg_in;
    // Observation settings must match the checkpoint's keying.
    cfg.counts = ckpt.config.counts;
    cfg.reward = ckpt.config.reward;
    cbet::EnvFamily family = ckpt.kind == "task" ? ckpt.config.task_env
                                                 : ckpt.config.env_families.front();
    if (!env_name.empty()) {
        const auto fam = cbet::family_from_name(env_name);
        if (!fam) throw cbet::ConfigError("unknown environment family: " + env_name);
        family = *fam;
    }
    cbet::finalize_run_config(cfg);
    echo_config(cfg);

    const cbet::ObsPipeline pipeline(cfg.counts.keying, cfg.counts.hash_k,
                                     cfg.counts.hash_seed, cfg.reward.state_view,
                                     cfg.reward.change_view);
    cbet::ComposedPolicy policy;
    policy.policy = &ckpt.policy;
    if (ckpt.bias) {
        policy.bias = &*ckpt.bias;
        policy.alpha = ckpt.config.alpha.at(ckpt.step);
    }

    cbet::RolloutOptions opts;
    opts.episodes = cfg.eval_episodes;
    opts.greedy = cfg.eval_greedy;
    opts.eval_seed = cfg.eval_seed;
    opts.noisy_tv = cfg.noisy_tv;
    if (layout_seed) opts.env_seeds = {*layout_seed};

    const auto records = cbet::rollout(policy, family, opts, pipeline);

    cbet::MetricsCsvWriter csv(cfg.out_dir + "/metrics.csv");
    for (const auto& ep : records) csv.add(ep);
    csv.flush();

    const cbet::WorldState reference =
        cbet::generate(family, layout_seed ? *layout_seed
                                           : cbet::mix_seed(cfg.eval_seed, 0x200000ULL));
    const cbet::Heatmap hm = cbet::coverage_heatmap(records, reference);
    cbet::write_ppm(cfg.out_dir + "/coverage.ppm", hm, &reference);

    const cbet::ActionDistribution dist = cbet::action_distribution(records);
    json summary;
    summary["env"] = cbet::family_name(family);
    summary["episodes"] = records.size();
    summary["greedy"] = cfg.eval_greedy;
    summary["eval_seed"] = cfg.eval_seed;
    summary["success_rate"] = cbet::success_rate(records);
    summary["unique_interactions_total"] = cbet::unique_interactions_total(records);
    summary["unique_interactions_mean"] = cbet::unique_interactions_mean(records);
    summary["coverage_fraction"] = hm.coverage_fraction;
    summary["coverage_uniformity"] = hm.uniformity;
    json probs = json::array();
    for (double p : dist.probs) probs.push_back(p);
    summary["action_distribution"] = probs;
    summary["action_entropy"] = dist.normalized_entropy;
    cbet::write_text_file(cfg.out_dir + "/summary.json", summary.dump(2) + "\n");

    std::cout << "evaluate done: success_rate=" << cbet::success_rate(records)
              << " unique_interactions_mean=" << cbet::unique_interactions_mean(records) << "\n";
    return 0;
}

void write_fixture_map_ppm(const std::string& path, const cbet::RewardMap& map) {
    // Four 5x5 panels (Left, Right, Forward, Pick) separated by one column.
    constexpr int side = cbet::kFixtureSide;
    const int cols = 4 * side + 3;
    double max_v = 0.0;
    for (const auto& panel : map.values)
        for (double v : panel)
            if (v == v && v > max_v) max_v = v;
    std::string body = "P3\n" + std::to_string(cols) + " " + std::to_string(side) + "\n255\n";
    for (int r = 0; r < side; ++r) {
        for (int a = 0; a < 4; ++a) {
            for (int c = 0; c < side; ++c) {
                const double v = map.values[static_cast<size_t>(a)][static_cast<size_t>(r * side + c)];
                int red = 32, green = 32, blue = 32;  // non-standable cells
                if (v == v && max_v > 0) {
                    const double frac = v / max_v;
                    red = 255;
                    green = blue = static_cast<int>(235.0 * (1.0 - frac));
                }
                body += std::to_string(red) + " " + std::to_string(green) + " " +
                        std::to_string(blue) + " ";
            }
            if (a < 3) body += "255 255 255 ";
        }
        body += "\n";
    }
    cbet::write_text_file(path, body);
}

std::string fixture_map_csv(const cbet::RewardMap& map) {
    constexpr int side = cbet::kFixtureSide;
    static const char* actions[] = {"left", "right", "forward", "pick"};
    std::string body = "action,row,col,reward\n";
    for (int a = 0; a < 4; ++a)
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c) {
                const double v = map.values[static_cast<size_t>(a)][static_cast<size_t>(r * side + c)];
                body += std::string(actions[a]) + "," + std::to_string(r) + "," +
                        std::to_string(c) + "," + (v == v ? cbet::format_double(v) : "nan") + "\n";
            }
    return body;
}

int run_diagnose(const RunConfig& cfg_in, const std::string& which,
                 const std::string& resets_name, double p, const std::string& reward_name,
                 uint64_t steps) {
    RunConfig cfg = cfg_in;
    cbet::finalize_run_config(cfg);
    cbet::ensure_dir(cfg.out_dir);

    cbet::ResetPolicy resets = cfg.counts.resets;
    if (!resets_name.empty()) {
        const auto mode = cbet::reset_mode_from_name(resets_name);
        if (!mode) throw cbet::ConfigError("unknown reset mode: " + resets_name);
        resets.mode = *mode;
    }
    if (p >= 0) resets.p = p;

    if (which == "chain") {
        cbet::RewardSpec reward = cfg.reward;
        reward.kind = cbet::RewardKind::CountOnly;
        if (!reward_name.empty()) {
            const auto kind = cbet::reward_kind_from_name(reward_name);
            if (!kind) throw cbet::ConfigError("unknown reward kind: " + reward_name);
            reward.kind = *kind;
        }
        const uint64_t train_steps = steps ? steps : 40000;
        const auto report =
            cbet::chain_diagnostic(resets, reward, 5, cfg.master_seed, train_steps);
        json out;
        out["resets"] = cbet::reset_mode_name(resets.mode);
        out["reward"] = cbet::reward_kind_name(reward.kind);
        out["bc_return"] = report.bc_return;
        out["d_return"] = report.d_return;
        out["greedy_at_start"] = cbet::action_name(report.greedy_at_start);
        out["d_occupancy"] = report.d_occupancy;
        json trajectories = json::array();
        for (const auto& t : report.trajectories)
            trajectories.push_back({{"states", t.states}, {"return", t.intrinsic_return}});
        out["trajectories"] = trajectories;
        cbet::write_text_file(cfg.out_dir + "/chain_report.json", out.dump(2) + "\n");
        std::cout << "chain: best B-side return " << report.bc_return << " vs D-side "
                  << report.d_return << ", greedy at start "
                  << cbet::action_name(report.greedy_at_start) << ", D occupancy "
                  << report.d_occupancy << "\n";
        return 0;
    }

    if (which == "fig3") {
        cbet::FixtureConfig fixture;
        fixture.seed = cfg.master_seed;
        const auto report = cbet::reward_map_fixture(fixture);
        cbet::write_text_file(cfg.out_dir + "/fixture_cbet.csv", fixture_map_csv(report.cbet));
        cbet::write_text_file(cfg.out_dir + "/fixture_count.csv",
                              fixture_map_csv(report.count_only));
        cbet::write_text_file(cfg.out_dir + "/fixture_l2.csv", fixture_map_csv(report.l2_change));
        write_fixture_map_ppm(cfg.out_dir + "/fixture_cbet.ppm", report.cbet);
        write_fixture_map_ppm(cfg.out_dir + "/fixture_count.ppm", report.count_only);
        write_fixture_map_ppm(cfg.out_dir + "/fixture_l2.ppm", report.l2_change);
        json out;
        out["key_cell"] = report.key_cell;
        out["pick_cell"] = report.pick_cell;
        out["walk_picks"] = report.walk_picks;
        out["cbet_argmax_cell"] = report.cbet.argmax_cell;
        out["cbet_argmax_action"] = report.cbet.argmax_action;
        out["count_argmax_cell"] = report.count_only.argmax_cell;
        out["count_argmax_action"] = report.count_only.argmax_action;
        out["l2_forward_mean"] = report.l2_forward_mean;
        out["l2_pick_mean"] = report.l2_pick_mean;
        cbet::write_text_file(cfg.out_dir + "/fixture_report.json", out.dump(2) + "\n");
        std::cout << "fixture: cbet argmax cell " << report.cbet.argmax_cell << " action "
                  << report.cbet.argmax_action << " (pick cell is " << report.pick_cell
                  << ")\n";
        return 0;
    }

    if (which == "decay") {
        const uint64_t total = steps ? steps : 200000;
        const auto report = cbet::decay_diagnostic(cbet::EnvFamily::DoorKey8x8, cfg.reward,
                                                   resets, total, 10000, cfg.master_seed);
        cbet::write_trend_csv(cfg.out_dir + "/decay_trend.csv", report.trend, 10000);
        json out;
        out["resets"] = cbet::reset_mode_name(resets.mode);
        out["p"] = resets.p;
        out["steps"] = total;
        out["first_window"] = report.first_window;
        out["last_window"] = report.last_window;
        out["last_over_first"] = report.last_over_first;
        cbet::write_text_file(cfg.out_dir + "/decay_report.json", out.dump(2) + "\n");
        std::cout << "decay: first window " << report.first_window << ", last window "
                  << report.last_window << " (" << report.last_over_first << "x)\n";
        return 0;
    }

    throw cbet::ConfigError("unknown diagnostic: " + which + " (chain|fig3|decay)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exploration-transfer laboratory"};
    app.require_subcommand(1);

    CommonFlags pretrain_flags, transfer_flags, evaluate_flags, diagnose_flags;

    auto* cmd_pretrain = app.add_subcommand("pretrain", "Learn an exploration policy");
    add_common(cmd_pretrain, pretrain_flags);
    std::string pre_envs;
    uint64_t pre_steps = 0, pre_seed = 0;
    std::string pre_reward, pre_resets;
    double pre_p = -1;
    size_t trend_window = 1000;
    cmd_pretrain->add_option("--envs", pre_envs, "Comma-separated env families");
    cmd_pretrain->add_option("--steps", pre_steps, "Total environment steps");
    cmd_pretrain->add_option("--seed", pre_seed, "Master seed");
    cmd_pretrain->add_option("--reward", pre_reward, "Reward kind (cbet, count, ...)");
    cmd_pretrain->add_option("--resets", pre_resets, "Reset mode (none|episodic|random)");
    cmd_pretrain->add_option("--p", pre_p, "Reset probability");
    cmd_pretrain->add_option("--trend-window", trend_window, "Intrinsic trend window");

    auto* cmd_transfer = app.add_subcommand("transfer", "Train a task policy");
    add_common(cmd_transfer, transfer_flags);
    std::string tr_from, tr_env, tr_alpha;
    bool tr_tabula = false, tr_extrinsic_only = false;
    uint64_t tr_steps = 0, tr_seed = 0;
    cmd_transfer->add_option("--from", tr_from, "Source checkpoint");
    cmd_transfer->add_option("--env", tr_env, "Task environment family");
    cmd_transfer->add_option("--alpha-decay", tr_alpha, "Alpha schedule (constant:V | linear:N)");
    cmd_transfer->add_flag("--tabula-rasa", tr_tabula, "No frozen bias");
    cmd_transfer->add_flag("--extrinsic-only", tr_extrinsic_only, "Drop the intrinsic stream");
    cmd_transfer->add_option("--steps", tr_steps, "Total environment steps");
    cmd_transfer->add_option("--seed", tr_seed, "Master seed");

    auto* cmd_evaluate = app.add_subcommand("evaluate", "Roll out a checkpoint, no learning");
    add_common(cmd_evaluate, evaluate_flags);
    std::string ev_from, ev_env;
    int ev_episodes = 0;
    bool ev_greedy = false;
    uint64_t ev_seed = 0;
    std::optional<uint64_t> ev_layout;
    uint64_t ev_layout_raw = 0;
    bool ev_layout_set = false;
    cmd_evaluate->add_option("--from", ev_from, "Checkpoint to evaluate");
    cmd_evaluate->add_option("--env", ev_env, "Environment family");
    cmd_evaluate->add_option("--episodes", ev_episodes, "Evaluation episodes");
    cmd_evaluate->add_flag("--greedy", ev_greedy, "Greedy instead of sampled actions");
    cmd_evaluate->add_option("--seed", ev_seed, "Evaluation seed");
    cmd_evaluate
        ->add_option("--layout-seed", ev_layout_raw,
                     "Use one fixed layout for every episode (coverage heatmaps)")
        ->each([&ev_layout_set](const std::string&) { ev_layout_set = true; });

    auto* cmd_diagnose = app.add_subcommand("diagnose", "Canned diagnostics");
    add_common(cmd_diagnose, diagnose_flags);
    std::string dg_which, dg_resets, dg_reward;
    double dg_p = -1;
    uint64_t dg_steps = 0, dg_seed = 0;
    cmd_diagnose->add_option("--which", dg_which, "chain | fig3 | decay")->required();
    cmd_diagnose->add_option("--resets", dg_resets, "Reset mode");
    cmd_diagnose->add_option("--p", dg_p, "Reset probability");
    cmd_diagnose->add_option("--reward", dg_reward, "Reward kind");
    cmd_diagnose->add_option("--steps", dg_steps, "Training/diagnostic steps");
    cmd_diagnose->add_option("--seed", dg_seed, "Master seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_pretrain->parsed()) {
            RunConfig cfg = resolve_config(pretrain_flags);
            if (!pre_envs.empty()) cfg.env_families = cbet::parse_family_list(pre_envs);
            if (cmd_pretrain->count("--steps")) cfg.train.total_steps = pre_steps;
            if (cmd_pretrain->count("--seed")) cfg.master_seed = pre_seed;
            if (!pre_reward.empty()) {
                const auto kind = cbet::reward_kind_from_name(pre_reward);
                if (!kind) throw cbet::ConfigError("unknown reward kind: " + pre_reward);
                cfg.reward.kind = *kind;
            }
            if (!pre_resets.empty()) {
                const auto mode = cbet::reset_mode_from_name(pre_resets);
                if (!mode) throw cbet::ConfigError("unknown reset mode: " + pre_resets);
                cfg.counts.resets.mode = *mode;
            }
            if (pre_p >= 0) cfg.counts.resets.p = pre_p;
            cfg.train.env_schedule = cfg.env_families;
            return run_pretrain(cfg, trend_window);
        }
        if (cmd_transfer->parsed()) {
            RunConfig cfg = resolve_config(transfer_flags);
            if (cmd_transfer->count("--steps")) cfg.train.total_steps = tr_steps;
            if (cmd_transfer->count("--seed")) cfg.master_seed = tr_seed;
            return run_transfer(cfg, tr_from, tr_tabula, tr_extrinsic_only, tr_env, tr_alpha);
        }
        if (cmd_evaluate->parsed()) {
            RunConfig cfg = resolve_config(evaluate_flags);
            if (cmd_evaluate->count("--episodes")) cfg.eval_episodes = ev_episodes;
            if (cmd_evaluate->count("--seed")) cfg.eval_seed = ev_seed;
            if (ev_greedy) cfg.eval_greedy = true;
            if (ev_layout_set) ev_layout = ev_layout_raw;
            return run_evaluate(cfg, ev_from, ev_env, ev_layout);
        }
        if (cmd_diagnose->parsed()) {
            RunConfig cfg = resolve_config(diagnose_flags);
            if (cmd_diagnose->count("--seed")) cfg.master_seed = dg_seed;
            return run_diagnose(cfg, dg_which, dg_resets, dg_p, dg_reward, dg_steps);
        }
    } catch (const cbet::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const cbet::CbetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
