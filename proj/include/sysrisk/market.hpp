#pragma once

#include <vector>

#include "sysrisk/params.hpp"
#include "sysrisk/rng.hpp"

namespace sysrisk {

// Within-period market state. t advances by exactly 1 per step; ewma_var is
// the market maker's exponentially weighted estimate of squared returns.
struct MarketState {
    double v = 0.0;        // fundamental value
    double p = 0.0;        // last clearing price
    double eta = 0.0;      // current common noise level
    double ewma_var = 0.0; // EWMA of squared log returns
    int t = 0;             // period index
};

enum class SignalKind { AI, Human };

struct SignalDraw {
    double value = 0.0;
    SignalKind kind = SignalKind::AI;
    int agent_id = 0;
};

// Minimal agent view needed to generate signals; the simulator maps its
// richer agent records onto this.
struct SignalAgentView {
    int id = 0;
    SignalKind kind = SignalKind::AI;
    double sigma_h2 = 0.0; // per-agent human noise variance
};

struct JumpDraw {
    int count = 0;       // Poisson jump count this period
    double size_sum = 0; // sum of relative jump sizes
};

JumpDraw draw_jumps(const ModelParams& params, Rng& rng);

// Exogenous fundamental increment: drift + diffusion + compound Poisson jumps
// (jump sizes are relative, scaled by the current level).
double step_fundamental(const MarketState& state, const ModelParams& params, Rng& rng);

// AR(1) common noise with innovation variance sigma_eta^2 (1 - theta^2), so
// the stationary variance is sigma_eta^2 for any theta.
double step_common_noise(double eta_prev, const ModelParams& params, Rng& rng);

double ai_signal(double v, double eta, double rho, double sigma_nu, double nu_std);
double human_signal(double v, double sigma_h2, double eps_std);

// One signal per agent; all AI draws share the period's common noise level.
std::vector<SignalDraw> draw_signals(const MarketState& state, const ModelParams& params,
                                     const std::vector<SignalAgentView>& agents, Rng& rng);

// Base Kyle price impact with correlated informed flow:
//   lambda(phi) = sigma_v/(2 sigma_u) / sqrt(1 + phi^2 rho^2 sigma_eta^2/sigma_v^2).
double kyle_lambda(double phi, double rho, const ModelParams& params);

// Effective impact lambda' = lambda(phi) + phi rho beta / N from the market
// maker's break-even condition under performative feedback. Throws
// EquilibriumViolation when phi rho beta / N >= lambda(phi).
double effective_lambda(double phi, double rho, double beta, const ModelParams& params);
double effective_lambda(double phi, double rho, double beta, double kyle, int n_agents);

// Posted-price rule p = prior + lambda * (informed_flow + noise_flow).
double clearing_price(double prior, double lambda, double informed_flow,
                      double noise_flow);

// Closed-form fixed point of linear clearing when fresh demands q_i = a_i (x_i - p)
// are evaluated at the clearing price itself:
//   p = (prior + lambda (sum_ax + stale_flow + noise_flow)) / (1 + lambda sum_a).
double solve_clearing(double prior, double lambda, double sum_a, double sum_ax,
                      double stale_flow, double noise_flow);

double performative_feedback(double beta, double v, double p);

// Next fundamental with performative feedback (jump term layered separately
// by step_fundamental): v' = v + mu + sigma_v W + beta (p - v).
double performative_step(const MarketState& state, const ModelParams& params, Rng& rng);

}  // namespace sysrisk
