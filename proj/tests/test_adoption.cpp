#include <cmath>
#include <doctest.h>

#include "sysrisk/adoption.hpp"
#include "sysrisk/errors.hpp"

using namespace sysrisk;
using namespace sysrisk::analytic;

namespace {

// Independent oracle: count sign changes of phi - G(dU(phi)) on a dense grid.
int grid_scan_root_count(const AdoptionGameSpec& spec, double c, int n = 20001) {
    int count = 0;
    double prev = -cost_cdf(spec, adoption_incentive(spec, 0.0, c));
    if (std::abs(prev) < 1e-12) ++count;
    for (int i = 1; i <= n; ++i) {
        const double phi = static_cast<double>(i) / n;
        const double f = phi - cost_cdf(spec, adoption_incentive(spec, phi, c));
        if ((prev < 0.0) != (f < 0.0) || std::abs(f) < 1e-12) ++count;
        prev = f;
    }
    return count;
}

}  // namespace

TEST_CASE("uniform game: unique interior fixed point") {
    // G = uniform on [0, 1], dU(phi) = 0.2 + 0.6 phi: 0.2 + 0.6 phi = phi at 0.5.
    AdoptionGameSpec spec;
    spec.cdf = CostDist::Uniform;
    spec.cdf_loc = 0.5;
    spec.cdf_scale = 0.5;
    spec.u0 = 0.2;
    spec.cost0 = 0.0;
    const double c = 0.6;

    CHECK(grid_scan_root_count(spec, c) == 1);
    const auto roots = adoption_fixed_points(spec, c);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].phi == doctest::Approx(0.5).epsilon(1e-7));
    CHECK(roots[0].stable); // slope 0.6 < 1
}

TEST_CASE("steep logistic game: three roots, stable-unstable-stable") {
    AdoptionGameSpec spec;
    spec.cdf = CostDist::Logistic;
    spec.cdf_loc = 0.5;
    spec.cdf_scale = 0.05;
    spec.u0 = 0.0;
    spec.cost0 = 0.0;
    const double c = 1.0; // dU = phi

    CHECK(grid_scan_root_count(spec, c) == 3);
    const auto roots = adoption_fixed_points(spec, c);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0].phi < 0.01);
    CHECK(roots[1].phi == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(roots[2].phi > 0.99);
    CHECK(roots[0].stable);
    CHECK_FALSE(roots[1].stable); // slope 1/(4 * 0.05) = 5 at the middle root
    CHECK(roots[2].stable);
}

TEST_CASE("dominated AI strategy pins the unique root at zero") {
    AdoptionGameSpec spec;
    spec.cdf = CostDist::Uniform;
    spec.cdf_loc = 0.5;
    spec.cdf_scale = 0.5;
    spec.u0 = -1e12; // dU -> -inf: G(dU) = 0
    spec.cost0 = 0.0;
    const auto roots = adoption_fixed_points(spec, 1.0);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].phi == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(roots[0].stable);
}

TEST_CASE("skill shift term") {
    CHECK(skill_shift_term(0.003, 0.0, 1.0, 2520) == 0.0);
    const double s1 = skill_shift_term(0.003, 0.01, 1.0, 2520);
    const double s2 = skill_shift_term(0.003, 0.04, 1.0, 2520);
    CHECK(s1 > 0.0);
    CHECK(s2 > s1);
    // log of the degraded variance ratio: u_skill * T * ln(1 + kappa)
    CHECK(s1 == doctest::Approx(0.003 * 2520 * std::log1p(0.01)).epsilon(1e-12));
}

TEST_CASE("bifurcation sweep: fold, path independence at kappa 0, gap monotone") {
    AdoptionGameSpec spec; // defaults: logistic(0.5, 0.05), u0 0.35, cost0 0.10
    std::vector<double> c_grid;
    for (int i = 0; i <= 175; ++i) c_grid.push_back(i * 0.02);

    const auto r0 = bifurcation_sweep(spec, c_grid, 0.0, 2520.0, 0.001);
    REQUIRE(r0.fold_found);
    CHECK(std::abs(r0.c_star - r0.c_star_star) <= 0.02 + 1e-12);

    const auto r1 = bifurcation_sweep(spec, c_grid, 0.01, 2520.0, 0.001);
    const auto r2 = bifurcation_sweep(spec, c_grid, 0.02, 2520.0, 0.001);
    const auto r4 = bifurcation_sweep(spec, c_grid, 0.04, 2520.0, 0.001);
    REQUIRE(r1.fold_found);
    REQUIRE(r2.fold_found);
    REQUIRE(r4.fold_found);
    CHECK(r2.c_star_star < r2.c_star);
    CHECK(r1.hysteresis_gap > 0.0);
    CHECK(r4.hysteresis_gap > r1.hysteresis_gap);

    // Path independence under no skill accumulation: the backward pass visits
    // the same equilibria at every shared c.
    const auto forward = fold_scan(spec, c_grid, SweepDirection::Forward);
    const auto backward = fold_scan(spec, c_grid, SweepDirection::Backward);
    REQUIRE(forward.c_grid.size() == backward.c_grid.size());
    for (std::size_t i = 0; i < forward.c_grid.size(); ++i) {
        const std::size_t j = backward.c_grid.size() - 1 - i;
        REQUIRE(forward.c_grid[i] == backward.c_grid[j]);
        REQUIRE(forward.fixed_points_per_c[i].size() ==
                backward.fixed_points_per_c[j].size());
        for (std::size_t k = 0; k < forward.fixed_points_per_c[i].size(); ++k)
            CHECK(forward.fixed_points_per_c[i][k].phi ==
                  doctest::Approx(backward.fixed_points_per_c[j][k].phi).epsilon(1e-9));
    }
}

TEST_CASE("no complementarity: single equilibrium for every c, no fold") {
    AdoptionGameSpec spec;
    spec.complementarity = false; // dU constant in phi
    std::vector<double> c_grid;
    for (int i = 0; i <= 100; ++i) c_grid.push_back(i * 0.015);
    const auto result = bifurcation_sweep(spec, c_grid, 0.02, 2520.0, 0.003);
    CHECK_FALSE(result.fold_found);
    for (const auto& pts : result.fixed_points_per_c) CHECK(pts.size() == 1);
}

TEST_CASE("grid resolution guard") {
    AdoptionGameSpec spec;
    spec.grid_points = 100;
    CHECK_THROWS_AS(adoption_fixed_points(spec, 0.5), DomainError);
}
