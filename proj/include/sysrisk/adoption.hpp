#pragma once

#include <vector>

#include "sysrisk/params.hpp"

namespace sysrisk::analytic {

// Switching-cost game: in equilibrium phi* = G(dU(phi*)) where G is the cost
// CDF and dU(phi; c) = u0 + c*phi - cost0 + skill_shift is the adoption
// incentive (c*phi is the career-concern complementarity; skill_shift is the
// outside-option degradation accumulated during a monoculture phase).
struct AdoptionGameSpec {
    CostDist cdf = CostDist::Logistic;
    double cdf_loc = 0.5;
    double cdf_scale = 0.05;

    double u0 = 0.35;           // intrinsic AI accuracy gain
    double cost0 = 0.10;        // intrinsic cost of the AI strategy
    double skill_shift = 0.0;   // added to dU; >0 after skill degradation
    bool complementarity = true; // false: dU constant in phi (c ignored)

    int grid_points = 10000;    // sign-change scan resolution, >= 1000
    double root_tol = 1e-8;
};

double cost_cdf(const AdoptionGameSpec& spec, double x);
double adoption_incentive(const AdoptionGameSpec& spec, double phi, double c);

struct FixedPoint {
    double phi = 0.0;
    bool stable = false; // |d/dphi G(dU)| < 1 at the root
};

// All roots of f(phi) = phi - G(dU(phi; c)) on [0,1], bracketed on a uniform
// grid and bisected to root_tol. At least one root always exists because
// G maps into [0,1]; an empty result is an internal error.
std::vector<FixedPoint> adoption_fixed_points(const AdoptionGameSpec& spec, double c);

enum class SweepDirection { Forward, Backward };

struct BifurcationResult {
    std::vector<double> c_grid;
    std::vector<std::vector<FixedPoint>> fixed_points_per_c;
    bool fold_found = false;
    double c_star = 0.0;      // forward collapse of the diversified branch
    double c_star_star = 0.0; // backward re-emergence point under the skill shift
    double hysteresis_gap = 0.0;
};

// dU shift from deterministically degraded human precision after `duration`
// periods at mean dependency dbar: u_skill * duration * ln(1 + kappa*dbar)
// (log of the variance ratio, increasing in kappa*duration, zero at kappa=0).
double skill_shift_term(double u_skill, double kappa, double dbar, double duration);

// Single-direction fold scan. Forward scans c ascending on the game as given
// and reports where the lowest stable (diversified) branch disappears;
// backward scans descending, warm-starting each step from the previous
// equilibrium set (sequential by contract), and reports where the diversified
// branch re-emerges. Throws GridTooCoarse when the root count jumps by more
// than 2 between adjacent grid points.
struct FoldScan {
    std::vector<double> c_grid;
    std::vector<std::vector<FixedPoint>> fixed_points_per_c;
    bool fold_found = false;
    double c_fold = 0.0;
};
FoldScan fold_scan(const AdoptionGameSpec& spec, const std::vector<double>& c_grid,
                   SweepDirection direction);

// Full sweep: forward pass on the unshifted game gives c*; backward pass on
// the skill-shifted game gives c**. With kappa = 0 the shift vanishes and the
// two passes bracket the same fold, so c* = c** to within one grid step.
BifurcationResult bifurcation_sweep(const AdoptionGameSpec& spec,
                                    const std::vector<double>& c_grid, double kappa,
                                    double duration, double u_skill, double dbar = 1.0);

}  // namespace sysrisk::analytic
