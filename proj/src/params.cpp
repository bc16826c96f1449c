#include "sysrisk/params.hpp"

#include <cmath>
#include <sstream>

#include "sysrisk/errors.hpp"

namespace sysrisk {

void throw_config_error(const std::string& field, const std::string& requirement,
                        double value) {
    std::ostringstream os;
    os << field << "=" << value << " violates " << requirement;
    throw ConfigError(os.str());
}

namespace {

void require(bool ok, const char* field, const char* requirement, double value) {
    if (!ok) throw_config_error(field, requirement, value);
}

}  // namespace

void ModelParams::validate() const {
    require(phi >= 0.0 && phi <= 1.0, "phi", "phi in [0,1]", phi);
    require(rho >= 0.0 && rho <= 1.0, "rho", "rho in [0,1]", rho);
    require(beta >= 0.0 && beta < 1.0, "beta", "beta in [0,1)", beta);
    require(kappa >= 0.0, "kappa", "kappa >= 0", kappa);

    require(std::isfinite(mu), "mu", "mu finite", mu);
    require(sigma_v > 0.0, "sigma_v", "sigma_v > 0", sigma_v);
    require(lambda_jump >= 0.0, "lambda_jump", "lambda_jump >= 0", lambda_jump);
    require(std::isfinite(mu_jump), "mu_jump", "mu_jump finite", mu_jump);
    require(sigma_jump > 0.0, "sigma_jump", "sigma_jump > 0", sigma_jump);
    require(v0 > 0.0, "v0", "v0 > 0", v0);

    require(sigma_eta > 0.0, "sigma_eta", "sigma_eta > 0", sigma_eta);
    require(sigma_nu > 0.0, "sigma_nu", "sigma_nu > 0", sigma_nu);
    require(sigma_h0 > 0.0, "sigma_h0", "sigma_h0 > 0", sigma_h0);
    require(std::abs(theta) < 1.0, "theta", "|theta| < 1", theta);

    require(sigma_u > 0.0, "sigma_u", "sigma_u > 0", sigma_u);
    require(a_ai > 0.0, "a_ai", "a_ai > 0", a_ai);
    require(a_h > 0.0, "a_h", "a_h > 0", a_h);
    require(tau_risk > 0.0, "tau_risk", "tau_risk > 0", tau_risk);
    require(lambda1 >= 0.0, "lambda1", "lambda1 >= 0", lambda1);
    require(ewma_decay > 0.0 && ewma_decay < 1.0, "ewma_decay", "ewma_decay in (0,1)",
            ewma_decay);

    require(gamma >= 0.0, "gamma", "gamma >= 0", gamma);
    require(delta_sens >= 0.0, "delta_sens", "delta_sens >= 0", delta_sens);
    require(std::isfinite(c_career), "c_career", "c_career finite", c_career);
    require(delta_u_scale >= 0.0, "delta_u_scale", "delta_u_scale >= 0", delta_u_scale);
    require(std::isfinite(ai_cost0), "ai_cost0", "ai_cost0 finite", ai_cost0);
    require(adopt_temp > 0.0, "adopt_temp", "adopt_temp > 0", adopt_temp);
    require(adopt_rate > 0.0 && adopt_rate <= 1.0, "adopt_rate", "adopt_rate in (0,1]",
            adopt_rate);
    require(tau_decide >= 1, "tau_decide", "tau_decide >= 1", tau_decide);
    require(acc_ewma > 0.0 && acc_ewma < 1.0, "acc_ewma", "acc_ewma in (0,1)", acc_ewma);

    require(std::isfinite(cost_loc), "cost_loc", "cost_loc finite", cost_loc);
    require(cost_scale >= 0.0, "cost_scale", "cost_scale >= 0", cost_scale);

    require(skill_floor > 0.0 && skill_floor <= 1.0, "skill_floor",
            "skill_floor in (0,1]", skill_floor);
    if (delta_forget >= 0.0)
        require(delta_forget < 1.0, "delta_forget", "delta_forget in [0,1)", delta_forget);
    require(n0 > 0.0, "n0", "n0 > 0", n0);

    require(n_agents >= 1, "n_agents", "n_agents >= 1", n_agents);
    require(n_noise >= 0, "n_noise", "n_noise >= 0", n_noise);
    require(n_periods >= 1, "n_periods", "n_periods >= 1", n_periods);

    require(delta_share > 0.0, "delta_share", "delta_share > 0", delta_share);
    require(alpha_rho > 0.0, "alpha_rho", "alpha_rho > 0", alpha_rho);
    require(rho0 >= 0.0 && rho0 <= 1.0, "rho0", "rho0 in [0,1]", rho0);
    require(rho_bar >= rho0 && rho_bar <= 1.0, "rho_bar", "rho0 <= rho_bar <= 1", rho_bar);
    require(beta_max >= 0.0 && beta_max < 1.0, "beta_max", "beta_max in [0,1)", beta_max);
}

}  // namespace sysrisk
