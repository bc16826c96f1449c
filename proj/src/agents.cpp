#include "sysrisk/agents.hpp"

#include <algorithm>
#include <cmath>

namespace sysrisk::abm {

double draw_switch_cost(const ModelParams& params, Rng& rng) {
    if (params.cost_dist == CostDist::Uniform)
        return params.cost_loc + params.cost_scale * (2.0 * rng.uniform() - 1.0);
    // Logistic quantile draw.
    const double u = rng.uniform_open();
    return params.cost_loc + params.cost_scale * std::log(u / (1.0 - u));
}

std::vector<Agent> init_population(const ModelParams& params, Rng& rng) {
    const int n_ai = static_cast<int>(std::floor(params.phi * params.n_agents));
    std::vector<Agent> agents(static_cast<std::size_t>(params.n_agents));
    for (int i = 0; i < params.n_agents; ++i) {
        Agent& a = agents[static_cast<std::size_t>(i)];
        a.id = i;
        a.strategy = i < n_ai ? Strategy::AI : Strategy::Human;
        a.d = i < n_ai ? params.phi : 0.0;
        a.sigma_h2 = params.sigma_h2_initial();
        a.switch_cost = draw_switch_cost(params, rng);
        // Accuracy trackers start at the unconditional expectations so the
        // first epochs are not distorted by an empty-EWMA transient.
        const double rho2 = params.rho * params.rho;
        a.acc_ai = -(rho2 * params.sigma_eta * params.sigma_eta +
                     (1.0 - rho2) * params.sigma_nu * params.sigma_nu);
        a.acc_h = -params.sigma_h2_initial();
    }
    return agents;
}

double effective_signal(const Agent& agent) {
    if (agent.strategy == Strategy::Human) return agent.x_h;
    return agent.d * agent.x_ai + (1.0 - agent.d) * agent.x_h;
}

double effective_aggressiveness(const Agent& agent, const ModelParams& params) {
    switch (agent.strategy) {
        case Strategy::AI: return params.a_ai;
        case Strategy::Human: return params.a_h;
        case Strategy::Mixed:
            return agent.d * params.a_ai + (1.0 - agent.d) * params.a_h;
    }
    return params.a_h;
}

double agent_demand(const Agent& agent, double price, const ModelParams& params) {
    return effective_aggressiveness(agent, params) * (effective_signal(agent) - price);
}

double update_dependency(const Agent& agent, double mean_d, const ModelParams& params) {
    // The perceived-differential term only moves agents who actually run the
    // AI pipeline; reliance on an unused tool cannot ratchet. Non-adopters
    // are still pulled by conformity toward the population mean.
    const double differential =
        agent.strategy == Strategy::Human
            ? 0.0
            : params.delta_sens * (agent.acc_ai - agent.acc_h);
    const double next = agent.d + differential + params.gamma * (mean_d - agent.d);
    return std::clamp(next, 0.0, 1.0);
}

double degrade_skill(const Agent& agent, const ModelParams& params) {
    const double next = agent.sigma_h2 * (1.0 + params.kappa * agent.d);
    return std::min(next, params.sigma_h2_ceiling());
}

double bayesian_precision_step(double tau_h, double d, const ModelParams& params) {
    return (1.0 - params.forgetting_rate()) * tau_h +
           params.precision_inflow() * (1.0 - d);
}

double step_skill(const Agent& agent, const ModelParams& params) {
    if (params.skill_law == SkillLaw::Multiplicative) return degrade_skill(agent, params);
    const double tau = 1.0 / agent.sigma_h2;
    const double tau_next = bayesian_precision_step(tau, agent.d, params);
    const double floor_tau = 1.0 / params.sigma_h2_ceiling();
    const double sigma2 = 1.0 / std::max(tau_next, floor_tau);
    return std::clamp(sigma2, params.sigma_h2_initial(), params.sigma_h2_ceiling());
}

double update_market_impact(MarketMaker& mm, double last_return) {
    mm.ewma_var = (1.0 - mm.ewma_decay) * mm.ewma_var +
                  mm.ewma_decay * last_return * last_return;
    return mm.lambda();
}

}  // namespace sysrisk::abm
