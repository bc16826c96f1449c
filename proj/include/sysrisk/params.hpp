#pragma once

#include <string>

namespace sysrisk {

enum class SkillLaw { Bayesian, Multiplicative };
enum class CostDist { Uniform, Logistic };

// Full structural parameter set. Defaults are the baseline calibration
// (daily periods, 252 per year); any field can be overridden from a config
// file, and validate() rejects out-of-range values before any simulation.
struct ModelParams {
    // Channel intensities
    double phi = 0.70;    // AI adoption share, in [0,1]
    double rho = 0.60;    // algorithmic signal correlation, in [0,1]
    double beta = 0.30;   // performative feedback, in [0,1)
    double kappa = 0.02;  // skill atrophy rate per period, >= 0

    // Fundamental process, absolute price units per period
    double mu = 0.004;            // drift per period
    double sigma_v = 0.108;     // diffusion volatility per sqrt(period)
    double lambda_jump = 0.016; // Poisson jump intensity per period
    double mu_jump = -0.025;     // mean relative jump size (fraction of level)
    double sigma_jump = 0.04;   // sd of relative jump size
    double v0 = 10.0;           // initial fundamental level

    // Signal structure
    double sigma_eta = 0.35; // common AI noise sd
    double sigma_nu = 0.08;  // idiosyncratic AI noise sd
    double sigma_h0 = 0.22;  // initial human noise sd
    double theta = 0.85;      // AR(1) coefficient of common noise, |theta| < 1

    // Market making / trading
    double sigma_u = 80.0;    // aggregate noise-trader flow sd
    double a_ai = 1.0;        // AI trader aggressiveness
    double a_h = 1.0;         // human trader aggressiveness
    double tau_risk = 2.0;    // CARA risk aversion
    double lambda1 = 12.0;    // impact response to EWMA return variance
    double ewma_decay = 0.06; // weight on the newest squared return

    // Dependency / adoption dynamics
    double gamma = 0.001;        // conformity pressure per period
    double delta_sens = 0.3;     // dependency sensitivity to accuracy differential
    double c_career = 0.45;      // career pressure in the adoption utility
    double delta_u_scale = 6.0; // accuracy differential -> utility scale
    double ai_cost0 = 0.35;      // intrinsic operating cost of the AI strategy
    double adopt_temp = 0.25;    // logistic choice temperature
    double adopt_rate = 0.15;    // fraction of agents reconsidering per epoch
    int tau_decide = 21;         // adoption epoch length in periods
    double acc_ewma = 0.05;      // weight of the perceived-accuracy tracker

    // Switching-cost distribution G
    CostDist cost_dist = CostDist::Uniform;
    double cost_loc = 0.5;   // uniform midpoint / logistic location
    double cost_scale = 0.4; // uniform half-width / logistic scale

    // Skill law
    SkillLaw skill_law = SkillLaw::Bayesian;
    double skill_floor = 0.01;  // floor on sigma_h0/sigma_H; caps sigma_H at sigma_h0/floor
    double delta_forget = -1.0; // Bayesian forgetting rate; derived from kappa when < 0
    double n0 = 1.0;            // full-attention observation capacity
    double tau_signal = -1.0;   // per-observation precision; derived when < 0

    // Population / horizon
    int n_agents = 500;
    int n_noise = 1000; // metadata; aggregate noise flow is drawn once per period
    int n_periods = 1260;

    // Endogenous channel maps rho(phi), beta(phi)
    double delta_share = 0.5; // market-share curvature of beta(phi)
    double alpha_rho = 2.0;
    double rho0 = 0.2;
    double rho_bar = 0.8;
    double beta_max = 0.4;

    // Derived quantities -------------------------------------------------

    double sigma_h2_initial() const { return sigma_h0 * sigma_h0; }
    double sigma_h2_ceiling() const {
        const double s = sigma_h0 / skill_floor;
        return s * s;
    }
    double forgetting_rate() const {
        return delta_forget >= 0.0 ? delta_forget : kappa / (1.0 + kappa);
    }
    // Inflow normalized so the d=0 steady state is exactly sigma_h0 and
    // kappa=0 degenerates to a static skill.
    double precision_inflow() const {
        return tau_signal >= 0.0 ? n0 * tau_signal
                                 : forgetting_rate() / sigma_h2_initial();
    }

    // Throws ConfigError naming the offending field and bound.
    void validate() const;
};

// One line per violated invariant; used by validate().
void throw_config_error(const std::string& field, const std::string& requirement,
                        double value);

}  // namespace sysrisk
