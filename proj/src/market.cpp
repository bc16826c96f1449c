#include "sysrisk/market.hpp"

#include <cmath>
#include <sstream>

#include "sysrisk/errors.hpp"

namespace sysrisk {

JumpDraw draw_jumps(const ModelParams& params, Rng& rng) {
    JumpDraw jd;
    jd.count = rng.poisson(params.lambda_jump);
    for (int k = 0; k < jd.count; ++k)
        jd.size_sum += rng.normal(params.mu_jump, params.sigma_jump);
    return jd;
}

double step_fundamental(const MarketState& state, const ModelParams& params, Rng& rng) {
    const double diffusion = params.sigma_v > 0.0 ? params.sigma_v * rng.normal() : 0.0;
    const JumpDraw jd = draw_jumps(params, rng);
    return params.mu + diffusion + state.v * jd.size_sum;
}

double step_common_noise(double eta_prev, const ModelParams& params, Rng& rng) {
    const double var = params.sigma_eta * params.sigma_eta *
                       (1.0 - params.theta * params.theta);
    const double xi = var > 0.0 ? std::sqrt(var) * rng.normal() : 0.0;
    return params.theta * eta_prev + xi;
}

double ai_signal(double v, double eta, double rho, double sigma_nu, double nu_std) {
    return v + rho * eta + std::sqrt(1.0 - rho * rho) * sigma_nu * nu_std;
}

double human_signal(double v, double sigma_h2, double eps_std) {
    return v + std::sqrt(sigma_h2) * eps_std;
}

std::vector<SignalDraw> draw_signals(const MarketState& state, const ModelParams& params,
                                     const std::vector<SignalAgentView>& agents,
                                     Rng& rng) {
    std::vector<SignalDraw> out;
    out.reserve(agents.size());
    for (const auto& agent : agents) {
        // Both innovations are drawn for every agent so the stream layout is
        // identical regardless of strategy composition.
        const double nu = rng.normal();
        const double eps = rng.normal();
        SignalDraw draw;
        draw.agent_id = agent.id;
        draw.kind = agent.kind;
        draw.value = agent.kind == SignalKind::AI
                         ? ai_signal(state.v, state.eta, params.rho, params.sigma_nu, nu)
                         : human_signal(state.v, agent.sigma_h2, eps);
        out.push_back(draw);
    }
    return out;
}

double kyle_lambda(double phi, double rho, const ModelParams& params) {
    if (params.sigma_v <= 0.0) return 0.0;
    const double lambda0 = params.sigma_v / (2.0 * params.sigma_u);
    const double ratio = params.sigma_eta / params.sigma_v;
    const double h = 1.0 / std::sqrt(1.0 + phi * phi * rho * rho * ratio * ratio);
    return lambda0 * h;
}

double effective_lambda(double phi, double rho, double beta, const ModelParams& params) {
    return effective_lambda(phi, rho, beta, kyle_lambda(phi, rho, params),
                            params.n_agents);
}

double effective_lambda(double phi, double rho, double beta, double kyle, int n_agents) {
    const double correction = phi * rho * beta / static_cast<double>(n_agents);
    if (correction >= kyle) {
        std::ostringstream os;
        os << "no linear equilibrium: phi*rho*beta/N = " << correction
           << " >= lambda(phi) = " << kyle;
        throw EquilibriumViolation(os.str());
    }
    return kyle + correction;
}

double clearing_price(double prior, double lambda, double informed_flow,
                      double noise_flow) {
    return prior + lambda * (informed_flow + noise_flow);
}

double solve_clearing(double prior, double lambda, double sum_a, double sum_ax,
                      double stale_flow, double noise_flow) {
    return (prior + lambda * (sum_ax + stale_flow + noise_flow)) /
           (1.0 + lambda * sum_a);
}

double performative_feedback(double beta, double v, double p) {
    return beta * (p - v);
}

double performative_step(const MarketState& state, const ModelParams& params, Rng& rng) {
    const double diffusion = params.sigma_v > 0.0 ? params.sigma_v * rng.normal() : 0.0;
    return state.v + params.mu + diffusion +
           performative_feedback(params.beta, state.v, state.p);
}

}  // namespace sysrisk
