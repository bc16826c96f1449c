#include "sysrisk/simulator.hpp"

#include <algorithm>
#include <cmath>

#include "sysrisk/market.hpp"

namespace sysrisk::abm {

PeriodPolicy apply_intervention(const SimConfig& config, int period) {
    const Intervention& iv = config.intervention;
    PeriodPolicy policy;
    policy.rho_eff = config.params.rho;
    policy.d_cap = 1.0;
    policy.refresh_ai = true;

    const bool diversity = iv.kind == InterventionKind::DiversityCap ||
                           iv.kind == InterventionKind::Combined;
    const bool dependency = iv.kind == InterventionKind::DependencyCap ||
                            iv.kind == InterventionKind::Combined;
    const bool speed = iv.kind == InterventionKind::SpeedBump ||
                       iv.kind == InterventionKind::Combined;

    if (diversity) policy.rho_eff = std::min(config.params.rho, iv.rho_cap);
    if (dependency) policy.d_cap = iv.d_cap;
    if (speed && iv.speed_k > 1) policy.refresh_ai = period % iv.speed_k == 0;
    return policy;
}

double adoption_update(std::vector<Agent>& agents, const ModelParams& params,
                       double phi, double career_pressure, Rng& rng) {
    const auto logistic = [](double z) {
        if (z < -500.0) return 0.0;
        if (z > 500.0) return 1.0;
        return 1.0 / (1.0 + std::exp(-z));
    };

    int n_ai = 0;
    for (auto& agent : agents) {
        // Adoption incentive: perceived accuracy differential plus the
        // career-concern complementarity, net of the AI strategy's running
        // cost. The switching cost is a friction paid in either direction.
        // The differential is clamped: once an agent's own judgment has
        // fully atrophied the wedge saturates instead of growing without
        // bound with sigma_H^2.
        const double differential = std::clamp(
            params.delta_u_scale * (agent.acc_ai - agent.acc_h), -2.0, 2.0);
        const double du = differential + career_pressure * phi - params.ai_cost0;
        // One uniform per agent regardless of outcome keeps paired streams
        // aligned across intervention arms.
        const double u = rng.uniform();
        if (agent.strategy == Strategy::Human) {
            const double z = (du - agent.switch_cost) / params.adopt_temp;
            if (u < params.adopt_rate * logistic(z)) agent.strategy = Strategy::AI;
        } else {
            const double z = (-du - agent.switch_cost) / params.adopt_temp;
            if (u < params.adopt_rate * logistic(z)) agent.strategy = Strategy::Human;
        }
        if (agent.strategy != Strategy::Human) ++n_ai;
    }
    return static_cast<double>(n_ai) / static_cast<double>(agents.size());
}

namespace {

bool level_out_of_bounds(double x) {
    return !std::isfinite(x) || x <= 0.0 || std::abs(std::log(x)) > 10.0;
}

}  // namespace

SimResult simulate(const SimConfig& config) {
    const ModelParams& pr = config.params;
    const int n_periods = pr.n_periods;
    const int n_agents = pr.n_agents;

    SimResult result;
    result.seed = config.seed;
    result.config_hash = config.config_hash;
    result.n_agents = n_agents;
    result.v.reserve(static_cast<std::size_t>(n_periods));
    result.p.reserve(static_cast<std::size_t>(n_periods));
    result.log_return.reserve(static_cast<std::size_t>(n_periods));
    result.phi.reserve(static_cast<std::size_t>(n_periods));
    result.mean_d.reserve(static_cast<std::size_t>(n_periods));
    result.mean_sigma_h2.reserve(static_cast<std::size_t>(n_periods));
    result.lambda.reserve(static_cast<std::size_t>(n_periods));
    result.eta.reserve(static_cast<std::size_t>(n_periods));
    if (config.record_agents)
        result.agent_q.reserve(static_cast<std::size_t>(n_periods) *
                               static_cast<std::size_t>(n_agents));

    Rng rng(config.seed);
    std::vector<Agent> agents = init_population(pr, rng);

    double phi_t = pr.phi;
    {
        int n_ai = 0;
        for (const auto& a : agents)
            if (a.strategy != Strategy::Human) ++n_ai;
        phi_t = static_cast<double>(n_ai) / static_cast<double>(n_agents);
    }

    MarketState state;
    state.v = pr.v0;
    state.p = pr.v0;
    state.eta = 0.0;

    const double typical_return = pr.sigma_v / pr.v0;
    MarketMaker mm;
    mm.lambda1 = pr.lambda1;
    mm.ewma_decay = pr.ewma_decay;
    mm.ewma_var = typical_return * typical_return;
    state.ewma_var = mm.ewma_var;

    const double sigma_h2_init = pr.sigma_h2_initial();

    for (int t = 0; t < n_periods; ++t) {
        const PeriodPolicy policy = apply_intervention(config, t);
        const double career = config.career_schedule.empty()
                                  ? pr.c_career
                                  : config.career_schedule[std::min(
                                        static_cast<std::size_t>(t),
                                        config.career_schedule.size() - 1)];

        // --- stochastic inputs, fixed draw order -------------------------
        state.eta = step_common_noise(state.eta, pr, rng);
        const double dv_exo = step_fundamental(state, pr, rng);
        const double noise_flow = pr.sigma_u * rng.normal();
        for (auto& agent : agents) {
            const double nu = rng.normal();
            const double eps = rng.normal();
            agent.x_ai = ai_signal(state.v, state.eta, policy.rho_eff, pr.sigma_nu, nu);
            agent.x_h = human_signal(state.v, agent.sigma_h2, eps);
        }

        // --- clearing -----------------------------------------------------
        // The correlated-flow discount in the base impact applies only to
        // the share of AI flow actually present this period; on speed-bump
        // withdrawal days the market is effectively uninformed-only.
        mm.lambda0 = kyle_lambda(policy.refresh_ai ? phi_t : 0.0, policy.rho_eff, pr);
        const double lambda_t = mm.lambda();
        const double prior = state.p + pr.mu;

        // Demands are quote schedules a (x - p), all evaluated at the clearing
        // price. Under a speed bump, AI demands are recomputed only every
        // k-th period; in between those agents sit out, so informed depth
        // thins and returns in bursts.
        double sum_a = 0.0, sum_ax = 0.0;
        for (auto& agent : agents) {
            const bool active = agent.strategy == Strategy::Human || policy.refresh_ai;
            if (!active) continue;
            agent.x_quote = effective_signal(agent);
            const double a = effective_aggressiveness(agent, pr);
            sum_a += a;
            sum_ax += a * agent.x_quote;
        }
        const double price =
            solve_clearing(prior, lambda_t, sum_a, sum_ax, 0.0, noise_flow);

        if (level_out_of_bounds(price) || !std::isfinite(state.v)) {
            result.unstable = true;
            result.unstable_at = t;
            break;
        }

        for (auto& agent : agents) {
            const bool active = agent.strategy == Strategy::Human || policy.refresh_ai;
            agent.q = active ? effective_aggressiveness(agent, pr) *
                                   (agent.x_quote - price)
                             : 0.0;
            if (config.record_agents) result.agent_q.push_back(agent.q);
        }

        const double log_ret = std::log(price / state.p);
        update_market_impact(mm, log_ret);

        // --- fundamental: exogenous increment + performative feedback ----
        const double v_next =
            state.v + dv_exo + performative_feedback(pr.beta, state.v, price);
        if (!std::isfinite(v_next) || v_next <= 0.0 ||
            std::abs(std::log(std::max(v_next, 1e-300))) > 10.0) {
            result.unstable = true;
            result.unstable_at = t;
            break;
        }

        // --- agent state updates ------------------------------------------
        double mean_d = 0.0;
        for (const auto& agent : agents) mean_d += agent.d;
        mean_d /= static_cast<double>(n_agents);

        double mean_sh2 = 0.0;
        for (auto& agent : agents) {
            const double err_ai = agent.x_ai - v_next;
            const double err_h = agent.x_h - v_next;
            agent.acc_ai = (1.0 - pr.acc_ewma) * agent.acc_ai -
                           pr.acc_ewma * err_ai * err_ai;
            agent.acc_h = (1.0 - pr.acc_ewma) * agent.acc_h -
                          pr.acc_ewma * err_h * err_h;
            agent.wealth += agent.q * (v_next - price);

            agent.d = std::min(update_dependency(agent, mean_d, pr), policy.d_cap);
            agent.sigma_h2 = step_skill(agent, pr);
            mean_sh2 += agent.sigma_h2;

            const double skill = std::sqrt(sigma_h2_init / agent.sigma_h2);
            result.min_skill_index = std::min(result.min_skill_index, skill);
        }
        mean_sh2 /= static_cast<double>(n_agents);

        if ((t + 1) % pr.tau_decide == 0) {
            if (config.freeze_adoption) {
                for (std::size_t i = 0; i < agents.size(); ++i) rng.uniform();
            } else {
                phi_t = adoption_update(agents, pr, phi_t, career, rng);
            }
        }

        // --- record -------------------------------------------------------
        result.v.push_back(state.v);
        result.p.push_back(price);
        result.log_return.push_back(log_ret);
        result.phi.push_back(phi_t);
        result.mean_d.push_back(mean_d);
        result.mean_sigma_h2.push_back(mean_sh2);
        result.lambda.push_back(lambda_t);
        result.eta.push_back(state.eta);

        state.p = price;
        state.v = v_next;
        state.ewma_var = mm.ewma_var;
        state.t = t + 1;
    }

    result.agents.reserve(agents.size());
    for (const auto& a : agents)
        result.agents.push_back(
            {a.id, a.strategy, a.d, a.sigma_h2, a.switch_cost, a.wealth});
    return result;
}

}  // namespace sysrisk::abm
