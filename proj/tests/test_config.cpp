#include <doctest.h>

#include "sysrisk/config.hpp"
#include "sysrisk/errors.hpp"

using namespace sysrisk;

TEST_CASE("empty config yields the full baseline calibration") {
    const RunConfig config = parse_config("");
    CHECK(config.params.sigma_v == doctest::Approx(0.108));
    CHECK(config.params.rho == doctest::Approx(0.60));
    CHECK(config.params.beta == doctest::Approx(0.30));
    CHECK(config.params.kappa == doctest::Approx(0.02));
    CHECK(config.params.lambda_jump == doctest::Approx(0.016));
    CHECK(config.params.phi == doctest::Approx(0.70));
    CHECK(config.params.n_agents == 500);
    CHECK(config.explicit_keys.empty());
}

TEST_CASE("key parsing, comments and whitespace") {
    const RunConfig config = parse_config(
        "# comment line\n"
        "phi = 0.25   # trailing comment\n"
        "n_periods=500\n"
        "\n"
        "skill_law = multiplicative\n"
        "grid.rho = 0.1, 0.2, 0.3\n"
        "experiment = tail-grid\n");
    CHECK(config.params.phi == doctest::Approx(0.25));
    CHECK(config.params.n_periods == 500);
    CHECK(config.params.skill_law == SkillLaw::Multiplicative);
    CHECK(config.spec.kind == ExperimentKind::TailGrid);
    REQUIRE(config.spec.grid.count("rho") == 1);
    CHECK(config.spec.grid.at("rho").size() == 3);
    CHECK(config.is_explicit("phi"));
    CHECK_FALSE(config.is_explicit("rho"));
}

TEST_CASE("bound violations carry the field name") {
    CHECK_THROWS_WITH_AS(parse_config("beta = 1.0\n"),
                         doctest::Contains("beta"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("theta = 1.5\n"),
                         doctest::Contains("theta"), ConfigError);
    CHECK_THROWS_AS(parse_config("sigma_v = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("n_agents = 0\n"), ConfigError);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config("sigma_w = 0.1\n"), UnknownKeyError);
    CHECK_THROWS_AS(parse_config("grid.not_a_param = 1,2\n"), ConfigError);
}

TEST_CASE("malformed lines are rejected with location") {
    CHECK_THROWS_WITH_AS(parse_config("just some words\n", "test.cfg"),
                         doctest::Contains("test.cfg:1"), ConfigError);
    CHECK_THROWS_AS(parse_config("phi = abc\n"), ConfigError);
}

TEST_CASE("canonical config and hash are stable and value-sensitive") {
    const RunConfig a = parse_config("phi = 0.5\n");
    const RunConfig b = parse_config("phi = 0.5\n");
    const RunConfig c = parse_config("phi = 0.6\n");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a) != config_hash(c));
    CHECK(canonical_config(a) == canonical_config(b));
}

TEST_CASE("horizon mapping respects explicit n_periods") {
    RunConfig config = parse_config("");
    apply_horizon(config, Horizon::Reduced);
    CHECK(config.params.n_periods == 1260);
    apply_horizon(config, Horizon::Full);
    CHECK(config.params.n_periods == 5040);

    RunConfig pinned = parse_config("n_periods = 777\n");
    apply_horizon(pinned, Horizon::Full);
    CHECK(pinned.params.n_periods == 777);
}

TEST_CASE("run seeds are stable in (master, index) and index-sensitive") {
    CHECK(run_seed(42, 0) == run_seed(42, 0));
    CHECK(run_seed(42, 0) != run_seed(42, 1));
    CHECK(run_seed(42, 0) != run_seed(43, 0));
}

TEST_CASE("experiment names round-trip") {
    for (const auto kind : all_experiments())
        CHECK(experiment_from_name(experiment_name(kind)) == kind);
    CHECK_THROWS_AS(experiment_from_name("not-an-experiment"), ConfigError);
}
