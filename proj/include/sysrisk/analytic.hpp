#pragma once

#include "sysrisk/params.hpp"

namespace sysrisk::analytic {

// One evaluated point of the coupling surface.
struct CouplingPoint {
    double phi = 0.0;
    double rho = 0.0;
    double beta = 0.0;
    double lambda_eff = 0.0; // lambda'(phi)
    double r = 0.0;          // systemic risk coupling phi rho beta / lambda'
    double m = 1.0;          // multiplier 1/(1-r)
};

// r = phi rho beta / lambda'(phi); zero iff any of phi, rho, beta is zero.
// Propagates EquilibriumViolation from effective_lambda.
double coupling_r(double phi, double rho, double beta, const ModelParams& params);

// M = 1/(1-r) = sum_k r^k. Throws DivergentCoupling for r >= 1 and
// DomainError for r < 0.
double multiplier_m(double r);

CouplingPoint coupling_point(double phi, double rho, double beta,
                             const ModelParams& params);

// Analytic d lambda'/d phi for the closed-form impact.
double dlambda_eff_dphi(double phi, double rho, double beta, const ModelParams& params);

// Both sides of the excess-sensitivity identity
//   dr/dphi - r/phi = (phi rho beta / lambda'^2) (-dlambda'/dphi),
// the left side by central finite difference (with a half-step Richardson
// estimate), the right side in closed form.
struct SensitivityCheck {
    double finite_difference_lhs = 0.0;
    double analytic_rhs = 0.0;
    double richardson_half_step = 0.0; // LHS recomputed at h/2
};
SensitivityCheck excess_sensitivity(double phi, double rho, double beta,
                                    const ModelParams& params, double h = 1e-5);

// Performative stability margin 1 - beta (1 + phi^2 rho^2 a^2/(lambda^2 + (phi a)^2));
// the market is performatively stable iff the margin is positive.
double stability_margin(double phi, double rho, double beta, double a, double lambda);

// The four additive price-variance terms, exactly as the closed form states
// them (the idiosyncratic terms carry the finite-N denominators as written;
// see limit_variance for the asymptotic claim, which does not follow from
// this expression term-by-term).
struct VarianceTerms {
    double fundamental = 0.0;
    double common_ai = 0.0;
    double idio_ai = 0.0;
    double human = 0.0;
    double total() const { return fundamental + common_ai + idio_ai + human; }
};
VarianceTerms price_variance_decomposition(double phi, double rho,
                                           const ModelParams& params);

// Stated large-N limit sigma_v^2 + rho^2 sigma_eta^2 / lambda'^2 (lambda'
// evaluated at params.phi and the given rho).
double limit_variance(double rho, const ModelParams& params);

// Endogenous channel maps and their composition.
double rho_of_phi(double phi, const ModelParams& params);   // concave, increasing
double beta_of_phi(double phi, const ModelParams& params);  // increasing, convex for delta<1
double unified_coupling(double phi, const ModelParams& params);

// AI monoculture index phi_hat * rho_hat * beta_hat.
double ami_index(double phi_hat, double rho_hat, double beta_hat);

}  // namespace sysrisk::analytic
