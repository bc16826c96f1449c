#include "sysrisk/analytic.hpp"

#include <cmath>
#include <sstream>

#include "sysrisk/errors.hpp"
#include "sysrisk/market.hpp"

namespace sysrisk::analytic {

double coupling_r(double phi, double rho, double beta, const ModelParams& params) {
    const double lam = effective_lambda(phi, rho, beta, params);
    return phi * rho * beta / lam;
}

double multiplier_m(double r) {
    if (r < 0.0) {
        std::ostringstream os;
        os << "coupling r = " << r << " outside [0,1)";
        throw DomainError(os.str());
    }
    if (r >= 1.0) {
        std::ostringstream os;
        os << "coupling r = " << r << " >= 1: performative instability region";
        throw DivergentCoupling(os.str());
    }
    return 1.0 / (1.0 - r);
}

CouplingPoint coupling_point(double phi, double rho, double beta,
                             const ModelParams& params) {
    CouplingPoint pt;
    pt.phi = phi;
    pt.rho = rho;
    pt.beta = beta;
    pt.lambda_eff = effective_lambda(phi, rho, beta, params);
    pt.r = phi * rho * beta / pt.lambda_eff;
    pt.m = multiplier_m(pt.r);
    return pt;
}

double dlambda_eff_dphi(double phi, double rho, double beta, const ModelParams& params) {
    // lambda(phi) = lambda0 (1 + phi^2 rho^2 s)^{-1/2},  s = sigma_eta^2/sigma_v^2
    const double lambda0 = params.sigma_v / (2.0 * params.sigma_u);
    const double s = (params.sigma_eta / params.sigma_v) * (params.sigma_eta / params.sigma_v);
    const double base = 1.0 + phi * phi * rho * rho * s;
    const double dkyle = -lambda0 * phi * rho * rho * s / (base * std::sqrt(base));
    return dkyle + rho * beta / static_cast<double>(params.n_agents);
}

SensitivityCheck excess_sensitivity(double phi, double rho, double beta,
                                    const ModelParams& params, double h) {
    SensitivityCheck chk;
    const double lam = effective_lambda(phi, rho, beta, params);
    chk.analytic_rhs = phi * rho * beta / (lam * lam) *
                       (-dlambda_eff_dphi(phi, rho, beta, params));

    const auto lhs_at = [&](double step) {
        const double r_plus = coupling_r(phi + step, rho, beta, params);
        const double r_minus = coupling_r(phi - step, rho, beta, params);
        const double drdphi = (r_plus - r_minus) / (2.0 * step);
        return drdphi - coupling_r(phi, rho, beta, params) / phi;
    };
    chk.finite_difference_lhs = lhs_at(h);
    chk.richardson_half_step = lhs_at(0.5 * h);
    return chk;
}

double stability_margin(double phi, double rho, double beta, double a, double lambda) {
    const double denom = lambda * lambda + phi * a * phi * a;
    const double gain = phi * phi * rho * rho * a * a / denom;
    return 1.0 - beta * (1.0 + gain);
}

VarianceTerms price_variance_decomposition(double phi, double rho,
                                           const ModelParams& params) {
    const double lam = effective_lambda(phi, rho, params.beta, params);
    const double n = static_cast<double>(params.n_agents);
    const double a = params.a_ai;
    const double a_h = params.a_h;
    const double phi_h = 1.0 - phi;

    VarianceTerms t;
    t.fundamental = params.sigma_v * params.sigma_v;

    const double depth_ai = lam + n * phi * a;
    t.common_ai = phi * phi * rho * rho * a * a * params.sigma_eta * params.sigma_eta /
                  (depth_ai * depth_ai);
    t.idio_ai = phi * (1.0 - rho * rho) * a * a * params.sigma_nu * params.sigma_nu /
                (n * depth_ai * depth_ai);

    const double depth_h = lam + n * phi_h * a_h;
    t.human = phi_h * a_h * a_h * params.sigma_h2_initial() / (n * depth_h * depth_h);
    return t;
}

double limit_variance(double rho, const ModelParams& params) {
    const double lam = effective_lambda(params.phi, rho, params.beta, params);
    return params.sigma_v * params.sigma_v +
           rho * rho * params.sigma_eta * params.sigma_eta / (lam * lam);
}

double rho_of_phi(double phi, const ModelParams& params) {
    return params.rho0 +
           (params.rho_bar - params.rho0) * (1.0 - std::exp(-params.alpha_rho * phi));
}

double beta_of_phi(double phi, const ModelParams& params) {
    const double denom = phi + (1.0 - phi) * params.delta_share;
    if (denom <= 0.0) return 0.0;
    return params.beta_max * phi / denom;
}

double unified_coupling(double phi, const ModelParams& params) {
    const double rr = rho_of_phi(phi, params);
    const double bb = beta_of_phi(phi, params);
    return coupling_r(phi, rr, bb, params);
}

double ami_index(double phi_hat, double rho_hat, double beta_hat) {
    return phi_hat * rho_hat * beta_hat;
}

}  // namespace sysrisk::analytic
