#pragma once

#include <cstdint>
#include <vector>

#include "sysrisk/agents.hpp"
#include "sysrisk/params.hpp"

namespace sysrisk::abm {

enum class InterventionKind { None, DiversityCap, DependencyCap, SpeedBump, Combined };

struct Intervention {
    InterventionKind kind = InterventionKind::None;
    double rho_cap = 0.5; // diversity requirement: effective rho <= rho_cap
    double d_cap = 0.7;   // human-in-the-loop mandate: d_i <= d_cap
    int speed_k = 5;      // AI demands refresh every k-th period
};

struct SimConfig {
    ModelParams params;
    Intervention intervention;
    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    bool record_agents = false;
    // Pin the strategy mix for configuration-grid runs. The adoption epoch
    // still consumes its random draws so paired streams stay aligned.
    bool freeze_adoption = false;
    // Optional per-period career pressure overriding params.c_career
    // (clamped to the last entry past the end); used by hysteresis protocols.
    std::vector<double> career_schedule;
};

// Per-period intervention view.
struct PeriodPolicy {
    double rho_eff = 0.0;      // signal correlation after any diversity cap
    double d_cap = 1.0;        // dependency ceiling after update
    bool refresh_ai = true;    // false: AI demands held stale this period
};
PeriodPolicy apply_intervention(const SimConfig& config, int period);

struct TerminalAgent {
    int id = 0;
    Strategy strategy = Strategy::Human;
    double d = 0.0;
    double sigma_h2 = 0.0;
    double switch_cost = 0.0;
    double wealth = 0.0;
};

struct SimResult {
    // Per-period series, each n_periods long (truncated at an unstable stop).
    std::vector<double> v, p, log_return, phi, mean_d, mean_sigma_h2, lambda, eta;
    // Flattened [period][agent] demand record, filled when record_agents.
    std::vector<double> agent_q;
    std::vector<TerminalAgent> agents;

    std::uint64_t seed = 0;
    std::uint64_t config_hash = 0;
    int n_agents = 0;
    bool unstable = false;
    int unstable_at = -1;
    double min_skill_index = 1.0; // min over agents/time of sigma_h0/sigma_H

    std::size_t periods() const { return p.size(); }
};

// Full agent-based run: per period draw the common noise, signals and noise
// flow, clear the price against fresh/stale linear demands, update the
// market maker's impact, apply the performative fundamental step with jumps,
// then update accuracy trackers, dependencies and skills; adoption decisions
// run every tau_decide periods. Deterministic per (config, seed). Runs whose
// price or fundamental leave the overflow guard (|log p| > 10, or a
// non-positive level) are flagged unstable and truncated, not thrown.
SimResult simulate(const SimConfig& config);

// Adoption epoch: logistic switching in (dU_i - switch_cost_i) with
// dU_i = delta_u_scale (acc_ai - acc_h) + c phi. Returns the new AI share.
double adoption_update(std::vector<Agent>& agents, const ModelParams& params,
                       double phi, double career_pressure, Rng& rng);

}  // namespace sysrisk::abm
