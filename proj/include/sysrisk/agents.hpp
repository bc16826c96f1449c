#pragma once

#include <vector>

#include "sysrisk/params.hpp"
#include "sysrisk/rng.hpp"

namespace sysrisk::abm {

enum class Strategy { AI, Human, Mixed };

struct Agent {
    int id = 0;
    Strategy strategy = Strategy::Human;
    double d = 0.0;          // cognitive dependency, clamped to [0,1]
    double sigma_h2 = 0.0;   // human signal variance (monotone state)
    double switch_cost = 0.0;
    double wealth = 0.0;
    double acc_ai = 0.0;     // EWMA of -(AI prediction error)^2
    double acc_h = 0.0;      // EWMA of -(human prediction error)^2
    double x_ai = 0.0;       // current-period signals
    double x_h = 0.0;
    double x_quote = 0.0;    // signal behind the standing quote schedule
    double q = 0.0;          // last executed demand
};

// Volatility-reactive market maker: lambda(t) = lambda0 + lambda1 * ewma_var,
// with lambda0 re-based on the Kyle closed form as adoption moves.
struct MarketMaker {
    double lambda0 = 0.0;
    double lambda1 = 0.0;
    double ewma_var = 0.0;
    double ewma_decay = 0.0;
    double lambda() const { return lambda0 + lambda1 * ewma_var; }
};

double draw_switch_cost(const ModelParams& params, Rng& rng);

// floor(phi0 * N) agents start on AI with dependency d = phi0; the rest are
// human with d = 0. Switch costs are i.i.d. draws from G.
std::vector<Agent> init_population(const ModelParams& params, Rng& rng);

// Signal the agent trades on: AI and Mixed blend d*x_ai + (1-d)*x_h, humans
// use their own judgment only.
double effective_signal(const Agent& agent);
double effective_aggressiveness(const Agent& agent, const ModelParams& params);

// Linear demand q = a_s (x - p).
double agent_demand(const Agent& agent, double price, const ModelParams& params);

// d' = clamp01(d + delta (acc_ai - acc_h) + gamma (dbar - d)).
double update_dependency(const Agent& agent, double mean_d, const ModelParams& params);

// Multiplicative skill atrophy sigma^2 (1 + kappa d), capped at the ceiling.
double degrade_skill(const Agent& agent, const ModelParams& params);

// Bayesian posterior precision recursion
//   tau' = (1 - delta_forget) tau + n0 (1 - d) tau_signal.
double bayesian_precision_step(double tau_h, double d, const ModelParams& params);

// Applies the configured skill law to the agent's sigma_h2.
double step_skill(const Agent& agent, const ModelParams& params);

// EWMA squared-return update; returns the new lambda(t).
double update_market_impact(MarketMaker& mm, double last_return);

}  // namespace sysrisk::abm
