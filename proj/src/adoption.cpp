#include "sysrisk/adoption.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sysrisk/errors.hpp"

namespace sysrisk::analytic {

double cost_cdf(const AdoptionGameSpec& spec, double x) {
    if (spec.cdf == CostDist::Uniform) {
        const double lo = spec.cdf_loc - spec.cdf_scale;
        const double hi = spec.cdf_loc + spec.cdf_scale;
        if (x <= lo) return 0.0;
        if (x >= hi) return 1.0;
        return (x - lo) / (hi - lo);
    }
    // Logistic CDF; -inf maps to 0 cleanly through the exp underflow.
    const double z = (x - spec.cdf_loc) / spec.cdf_scale;
    if (z < -500.0) return 0.0;
    if (z > 500.0) return 1.0;
    return 1.0 / (1.0 + std::exp(-z));
}

double adoption_incentive(const AdoptionGameSpec& spec, double phi, double c) {
    const double complement = spec.complementarity ? c * phi : 0.0;
    return spec.u0 + complement - spec.cost0 + spec.skill_shift;
}

namespace {

double best_response(const AdoptionGameSpec& spec, double phi, double c) {
    return cost_cdf(spec, adoption_incentive(spec, phi, c));
}

double excess_demand(const AdoptionGameSpec& spec, double phi, double c) {
    return phi - best_response(spec, phi, c);
}

bool is_stable(const AdoptionGameSpec& spec, double phi, double c) {
    const double h = 1e-6;
    const double lo = std::max(0.0, phi - h);
    const double hi = std::min(1.0, phi + h);
    const double slope =
        (best_response(spec, hi, c) - best_response(spec, lo, c)) / (hi - lo);
    return std::abs(slope) < 1.0;
}

}  // namespace

std::vector<FixedPoint> adoption_fixed_points(const AdoptionGameSpec& spec, double c) {
    if (spec.grid_points < 1000)
        throw DomainError("adoption grid resolution must be >= 1000 points");

    const int n = spec.grid_points;
    std::vector<FixedPoint> roots;
    double prev_phi = 0.0;
    double prev_f = excess_demand(spec, prev_phi, c);

    auto push_root = [&](double phi) {
        for (const auto& r : roots)
            if (std::abs(r.phi - phi) < 4.0 * spec.root_tol) return;
        roots.push_back({phi, is_stable(spec, phi, c)});
    };

    if (std::abs(prev_f) < spec.root_tol) push_root(0.0);
    for (int i = 1; i <= n; ++i) {
        const double phi = static_cast<double>(i) / n;
        const double f = excess_demand(spec, phi, c);
        if (std::abs(f) < spec.root_tol) {
            push_root(phi);
        } else if ((prev_f < 0.0) != (f < 0.0)) {
            double lo = prev_phi, hi = phi;
            double flo = prev_f;
            while (hi - lo > spec.root_tol) {
                const double mid = 0.5 * (lo + hi);
                const double fm = excess_demand(spec, mid, c);
                if ((flo < 0.0) != (fm < 0.0)) {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            push_root(0.5 * (lo + hi));
        }
        prev_phi = phi;
        prev_f = f;
    }

    if (roots.empty()) {
        // G maps into [0,1], so f(0) <= 0 <= f(1); a sign change (or boundary
        // root) is guaranteed and an empty scan means the scan itself broke.
        throw Error(ErrorCode::Internal, "adoption fixed-point scan found no root");
    }
    std::sort(roots.begin(), roots.end(),
              [](const FixedPoint& a, const FixedPoint& b) { return a.phi < b.phi; });
    return roots;
}

double skill_shift_term(double u_skill, double kappa, double dbar, double duration) {
    return u_skill * duration * std::log1p(kappa * dbar);
}

namespace {

double lowest_stable(const std::vector<FixedPoint>& pts) {
    for (const auto& p : pts)
        if (p.stable) return p.phi;
    return pts.front().phi;
}

void check_grid(const std::vector<FixedPoint>& a, const std::vector<FixedPoint>& b,
                double c_from, double c_to) {
    const int jump = std::abs(static_cast<int>(a.size()) - static_cast<int>(b.size()));
    if (jump > 2) {
        std::ostringstream os;
        os << "fixed-point count jumped by " << jump << " between c = " << c_from
           << " and c = " << c_to << "; refine the c grid";
        throw GridTooCoarse(os.str());
    }
}

}  // namespace

FoldScan fold_scan(const AdoptionGameSpec& spec, const std::vector<double>& c_grid,
                   SweepDirection direction) {
    FoldScan scan;
    if (c_grid.empty()) return scan;

    // Jump in the tracked diversified branch that flags annihilation at a fold.
    constexpr double kBranchJump = 0.2;

    std::vector<double> cs = c_grid;
    std::sort(cs.begin(), cs.end());
    if (direction == SweepDirection::Backward) std::reverse(cs.begin(), cs.end());

    scan.c_grid = cs;
    scan.fixed_points_per_c.reserve(cs.size());

    double prev_branch = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto pts = adoption_fixed_points(spec, cs[i]);
        if (i > 0)
            check_grid(scan.fixed_points_per_c.back(), pts, cs[i - 1], cs[i]);

        const double branch = lowest_stable(pts);
        if (have_prev && !scan.fold_found) {
            if (direction == SweepDirection::Forward && branch - prev_branch > kBranchJump) {
                // Diversified branch vanished between the two grid points.
                scan.fold_found = true;
                scan.c_fold = 0.5 * (cs[i - 1] + cs[i]);
            } else if (direction == SweepDirection::Backward &&
                       prev_branch - branch > kBranchJump) {
                // Coming down in c, the diversified branch re-emerged here.
                scan.fold_found = true;
                scan.c_fold = 0.5 * (cs[i - 1] + cs[i]);
            }
        }
        prev_branch = branch;
        have_prev = true;
        scan.fixed_points_per_c.push_back(pts);
    }
    return scan;
}

BifurcationResult bifurcation_sweep(const AdoptionGameSpec& spec,
                                    const std::vector<double>& c_grid, double kappa,
                                    double duration, double u_skill, double dbar) {
    BifurcationResult result;

    const FoldScan forward = fold_scan(spec, c_grid, SweepDirection::Forward);
    result.c_grid = forward.c_grid;
    result.fixed_points_per_c = forward.fixed_points_per_c;

    AdoptionGameSpec shifted = spec;
    shifted.skill_shift += skill_shift_term(u_skill, kappa, dbar, duration);
    const FoldScan backward = fold_scan(shifted, c_grid, SweepDirection::Backward);

    result.fold_found = forward.fold_found && backward.fold_found;
    if (result.fold_found) {
        result.c_star = forward.c_fold;
        result.c_star_star = backward.c_fold;
        result.hysteresis_gap = result.c_star - result.c_star_star;
    }
    return result;
}

}  // namespace sysrisk::analytic
