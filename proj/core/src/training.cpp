#include "cbet/training.hpp"

#include <deque>
#include <sstream>

#include "cbet/errors.hpp"

namespace cbet {

std::string AlphaSchedule::to_string() const {
    std::ostringstream os;
    if (kind == Kind::Constant) {
        os << "constant:" << value;
    } else {
        os << "linear:" << horizon;
    }
    return os.str();
}

std::optional<AlphaSchedule> AlphaSchedule::parse(const std::string& text) {
    AlphaSchedule out;
    const auto colon = text.find(':');
    const std::string head = text.substr(0, colon);
    const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (head == "constant") {
            out.kind = Kind::Constant;
            out.value = tail.empty() ? 1.0 : std::stod(tail);
            return out;
        }
        if (head == "linear") {
            if (tail.empty()) return std::nullopt;
            out.kind = Kind::Linear;
            out.value = 1.0;
            out.horizon = std::stoull(tail);
            return out;
        }
        // Bare number means a constant alpha.
        out.kind = Kind::Constant;
        out.value = std::stod(text);
        return out;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

namespace {

struct PendingStep {
    CountKey key;
    Action action;
    std::array<double, kNumActions> probs;
    double reward;
};

struct LoopSettings {
    const TrainConfig& cfg;
    const ObsPipeline& pipeline;
    const CountsConfig& counts_cfg;
    const RewardSpec* intrinsic;  // null: no intrinsic reward stream
    bool feed_extrinsic;
    const PolicyTable* frozen_bias;
    AlphaSchedule alpha;
    double gamma;
};

std::string serialize_rngs(const Rng& a, const Rng& b, const Rng& c) {
    std::ostringstream os;
    a.save(os);
    os << ' ';
    b.save(os);
    os << ' ';
    c.save(os);
    return os.str();
}

void run_loop(const LoopSettings& L, uint64_t master_seed, PolicyTable& policy,
              CountTable& state_counts, CountTable& change_counts, uint64_t& episodes_out,
              uint64_t& steps_out, std::string& rng_state_out, const TrainHooks& hooks) {
    if (L.cfg.env_schedule.empty())
        throw ContractViolation("training requires a non-empty env schedule");

    Rng act_rng(mix_seed(master_seed, 1));
    Rng reset_rng(mix_seed(master_seed, 2));
    Rng tv_rng(mix_seed(master_seed, 3));

    uint64_t steps = 0;
    uint64_t episode_index = 0;
    std::deque<PendingStep> buf;
    const size_t n_step = static_cast<size_t>(std::max(1, L.cfg.n_step));

    // n-step TD: delta = sum_i gamma^i r_i + gamma^len V(bootstrap) - V(front).
    auto flush_front = [&](const CountKey& bootstrap_key, bool terminal) {
        double ret = 0.0;
        double g = 1.0;
        for (const PendingStep& e : buf) {
            ret += g * e.reward;
            g *= L.gamma;
        }
        const PendingStep& front = buf.front();
        const double v_boot = terminal ? 0.0 : policy.value_at(bootstrap_key);
        const double delta = ret + g * v_boot - policy.value_at(front.key);
        ac_apply(policy, front.key, front.action, front.probs, delta, L.cfg);
        buf.pop_front();
    };

    auto per_step_resets = [&] {
        if (!L.intrinsic) return;
        const ResetPolicy& rp = L.counts_cfg.resets;
        if (rp.mode == ResetMode::RandomPerStep && L.counts_cfg.shared_reset_coin) {
            if (reset_rng.bernoulli(rp.p)) {
                state_counts.reset_now();
                change_counts.reset_now();
            }
            return;
        }
        state_counts.maybe_reset(reset_rng, rp, false);
        change_counts.maybe_reset(reset_rng, rp, false);
    };

    while (steps < L.cfg.total_steps) {
        const EnvFamily family = L.cfg.env_schedule[episode_index % L.cfg.env_schedule.size()];
        const uint64_t episode_seed = L.cfg.fixed_layout_seed
                                          ? *L.cfg.fixed_layout_seed
                                          : mix_seed(master_seed, 0x100000ULL + episode_index);
        WorldState s = generate(family, episode_seed);
        s.noisy_tv_enabled = L.cfg.noisy_tv;
        EgoView ego = ego_view(s);
        PanoView pano = pano_view(s);
        CountKey pol_key = L.pipeline.policy_key(ego);

        // The spawn state is itself evidence: consume its count up front so
        // idling in it cannot harvest a fresh first-visit reward.
        if (L.intrinsic) state_counts.observe(L.pipeline.state_key(ego, pano));

        EpisodeRecord record;
        record.family = family;
        record.episode_seed = episode_seed;
        buf.clear();
        bool episode_done = false;

        while (!episode_done && steps < L.cfg.total_steps) {
            Logits logits = policy.logits_at(pol_key);
            if (L.frozen_bias)
                logits = compose_task_policy(logits, L.frozen_bias->logits_at(pol_key),
                                             L.alpha.at(steps));
            const auto probs = softmax(logits);
            const Action a = sample_action(probs, act_rng);

            Transition tr = step(s, a);
            ++steps;
            if (a == Action::Drop) noisy_tv_effect(tr.state_after, tv_rng);

            const EgoView ego2 = ego_view(tr.state_after);
            const PanoView pano2 = pano_view(tr.state_after);
            const CountKey pol_key2 = L.pipeline.policy_key(ego2);
            const ChangeCode change = L.pipeline.change(ego, pano, ego2, pano2);
            CountKey change_key = L.pipeline.change_key(change);

            double r_learn = L.feed_extrinsic ? tr.extrinsic_reward : 0.0;
            IntrinsicStep istep;
            if (L.intrinsic) {
                const uint64_t n_s = state_counts.observe(L.pipeline.state_key(ego2, pano2));
                const uint64_t n_c = change_counts.observe(change_key);
                istep = make_intrinsic_step(*L.intrinsic, n_s, n_c);
                r_learn += istep.r_scaled;
            }

            buf.push_back({pol_key, a, probs, r_learn});
            if (tr.done) {
                while (!buf.empty()) flush_front(pol_key2, true);
            } else if (buf.size() >= n_step) {
                flush_front(pol_key2, false);
            }

            per_step_resets();

            StepLog log;
            log.action = a;
            log.extrinsic = tr.extrinsic_reward;
            log.intrinsic_raw = istep.r_raw;
            log.position = tr.state_after.agent_pos;
            log.interaction =
                (a == Action::Pick || a == Action::Drop || a == Action::Toggle) && !is_zero(change);
            log.change_key = std::move(change_key);
            record.steps.push_back(std::move(log));
            if (hooks.on_intrinsic) hooks.on_intrinsic(steps, istep);

            if (tr.done) {
                record.outcome = tr.done_reason;
                episode_done = true;
                if (L.intrinsic && L.counts_cfg.resets.mode == ResetMode::Episodic) {
                    state_counts.maybe_reset(reset_rng, L.counts_cfg.resets, true);
                    change_counts.maybe_reset(reset_rng, L.counts_cfg.resets, true);
                }
            }

            s = std::move(tr.state_after);
            ego = ego2;
            pano = pano2;
            pol_key = pol_key2;
        }

        // Run budget exhausted mid-episode: bootstrap pending updates out.
        while (!buf.empty()) flush_front(pol_key, false);

        if (hooks.on_episode) hooks.on_episode(record);
        ++episode_index;
    }

    episodes_out = episode_index;
    steps_out = steps;
    rng_state_out = serialize_rngs(act_rng, reset_rng, tv_rng);
}

}  // namespace

PretrainResult pretrain(const TrainConfig& cfg, const RewardSpec& reward,
                        const CountsConfig& counts, uint64_t master_seed,
                        const TrainHooks& hooks) {
    PretrainResult result;
    const ObsPipeline pipeline(counts.keying, counts.hash_k, counts.hash_seed,
                               reward.state_view, reward.change_view);
    const LoopSettings L{cfg,     pipeline, counts, &reward, /*feed_extrinsic=*/false,
                         nullptr, {},       cfg.gamma_i};
    run_loop(L, master_seed, result.policy, result.state_counts, result.change_counts,
             result.episodes, result.steps, result.rng_state, hooks);
    return result;
}

TaskTrainResult transfer_train(const TransferSetup& setup, const TrainConfig& cfg,
                               const CountsConfig& counts, uint64_t master_seed,
                               const TrainHooks& hooks) {
    TaskTrainResult result;
    TrainConfig task_cfg = cfg;
    task_cfg.env_schedule = {setup.task_env};
    const RewardSpec* intrinsic = setup.intrinsic ? &*setup.intrinsic : nullptr;
    const View state_view = intrinsic ? intrinsic->state_view : View::Ego;
    const View change_view = intrinsic ? intrinsic->change_view : View::Pano;
    const ObsPipeline pipeline(counts.keying, counts.hash_k, counts.hash_seed, state_view,
                               change_view);
    const LoopSettings L{task_cfg,          pipeline,    counts,   intrinsic,
                         /*feed_extrinsic=*/true,
                         setup.frozen_bias, setup.alpha, cfg.gamma};
    run_loop(L, master_seed, result.policy, result.state_counts, result.change_counts,
             result.episodes, result.steps, result.rng_state, hooks);
    return result;
}

}  // namespace cbet
