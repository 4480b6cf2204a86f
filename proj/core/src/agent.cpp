#include "cbet/agent.hpp"

#include <algorithm>
#include <cmath>

#include "cbet/errors.hpp"

namespace cbet {

std::array<double, kNumActions> softmax(const Logits& logits) {
    double max_logit = logits[0];
    for (double v : logits) {
        if (!std::isfinite(v)) throw NumericalError("softmax: non-finite logit");
        max_logit = std::max(max_logit, v);
    }
    std::array<double, kNumActions> probs{};
    double total = 0.0;
    for (int i = 0; i < kNumActions; ++i) {
        probs[i] = std::exp(logits[i] - max_logit);
        total += probs[i];
    }
    for (double& p : probs) p /= total;
    return probs;
}

Action sample_action(const std::array<double, kNumActions>& probs, Rng& rng) {
    const double u = rng.uniform_real();
    double cum = 0.0;
    for (int i = 0; i < kNumActions; ++i) {
        cum += probs[i];
        if (u < cum) return static_cast<Action>(i);
    }
    return static_cast<Action>(kNumActions - 1);
}

Action act(const Logits& logits, Rng& rng) { return sample_action(softmax(logits), rng); }

Action greedy_action(const Logits& logits) {
    int best = 0;
    for (int i = 1; i < kNumActions; ++i)
        if (logits[i] > logits[best]) best = i;
    return static_cast<Action>(best);
}

Logits compose_task_policy(const Logits& f_e, const Logits& f_i, double alpha) {
    Logits out;
    for (int i = 0; i < kNumActions; ++i) out[i] = alpha * f_i[i] + f_e[i];
    return out;
}

void ac_apply(PolicyTable& policy, const CountKey& s_key, Action a,
              const std::array<double, kNumActions>& acting_probs, double delta,
              const TrainConfig& cfg) {
    policy.values[s_key] = policy.value_at(s_key) + cfg.critic_lr * delta;

    // Entropy bonus on the acting distribution; dH/df_b = -p_b (log p_b + H).
    double entropy = 0.0;
    for (double p : acting_probs)
        if (p > 0.0) entropy -= p * std::log(p);

    Logits& f = policy.logits[s_key];
    for (int b = 0; b < kNumActions; ++b) {
        const double indicator = (b == static_cast<int>(a)) ? 1.0 : 0.0;
        const double pg = delta * (indicator - acting_probs[b]);
        const double ent_grad =
            acting_probs[b] > 0.0 ? -acting_probs[b] * (std::log(acting_probs[b]) + entropy) : 0.0;
        f[b] += cfg.actor_lr * (pg + cfg.entropy_coeff * ent_grad);
    }
}

double ac_update_composed(PolicyTable& policy, const CountKey& s_key, Action a,
                          const std::array<double, kNumActions>& acting_probs, double r,
                          const CountKey& s2_key, bool done, double gamma,
                          const TrainConfig& cfg) {
    const double v_s = policy.value_at(s_key);
    const double v_s2 = done ? 0.0 : policy.value_at(s2_key);
    const double delta = r + gamma * v_s2 - v_s;
    ac_apply(policy, s_key, a, acting_probs, delta, cfg);
    return delta;
}

double ac_update(PolicyTable& policy, const CountKey& s_key, Action a, double r,
                 const CountKey& s2_key, bool done, const TrainConfig& cfg) {
    return ac_update_composed(policy, s_key, a, softmax(policy.logits_at(s_key)), r, s2_key,
                              done, cfg.gamma, cfg);
}

}  // namespace cbet
