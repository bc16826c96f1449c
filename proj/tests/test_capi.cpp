// Exercises the public C surface the CLI (and any foreign-language binding)
// builds on: opaque handles, error codes, thread-local messages.
#include <cmath>
#include <cstdint>
#include <cstring>
#include <doctest.h>

#include "sysrisk/sysrisk.h"

TEST_CASE("config lifecycle and setters") {
    sr_config* config = nullptr;
    REQUIRE(sr_config_create(&config) == SR_OK);
    CHECK(sr_config_validate(config) == SR_OK);

    CHECK(sr_config_set(config, "phi", "0.4") == SR_OK);
    CHECK(sr_config_set(config, "nonsense_key", "1") == SR_ERR_UNKNOWN_KEY);
    CHECK(std::strlen(sr_last_error()) > 0);

    // Setters do not validate (multi-key updates may pass through invalid
    // intermediate states); validation is explicit.
    CHECK(sr_config_set(config, "beta", "1.0") == SR_OK);
    CHECK(sr_config_validate(config) == SR_ERR_CONFIG);
    CHECK(sr_config_set(config, "beta", "0.3") == SR_OK);
    CHECK(sr_config_validate(config) == SR_OK);

    uint64_t h1 = 0, h2 = 0;
    CHECK(sr_config_hash(config, &h1) == SR_OK);
    CHECK(sr_config_set(config, "rho", "0.1") == SR_OK);
    CHECK(sr_config_hash(config, &h2) == SR_OK);
    CHECK(h1 != h2);

    sr_config_free(config);
}

TEST_CASE("closed-form evaluators through the C API") {
    sr_config* config = nullptr;
    REQUIRE(sr_config_create(&config) == SR_OK);
    sr_config_set(config, "sigma_v", "1.0");
    sr_config_set(config, "sigma_u", "1.0");
    sr_config_set(config, "sigma_eta", "1.0");

    double out = 0.0;
    CHECK(sr_kyle_lambda(config, 1.0, 1.0, &out) == SR_OK);
    CHECK(out == doctest::Approx(0.353553).epsilon(1e-5));

    CHECK(sr_effective_lambda(config, 0.7, 0.6, 0.3, &out) == SR_OK);
    CHECK(out == doctest::Approx(0.461212).epsilon(3e-4));

    CHECK(sr_coupling_r(config, 0.7, 0.6, 0.3, &out) == SR_OK);
    CHECK(out == doctest::Approx(0.27320).epsilon(2e-4));

    CHECK(sr_multiplier_m(0.35, &out) == SR_OK);
    CHECK(out == doctest::Approx(1.5385).epsilon(5e-5));
    CHECK(sr_multiplier_m(1.2, &out) == SR_ERR_DIVERGENT_COUPLING);

    CHECK(sr_ami_index(0.7, 0.6, 0.28, &out) == SR_OK);
    CHECK(out == doctest::Approx(0.1176));

    sr_config_free(config);
}

TEST_CASE("experiment list and version strings") {
    CHECK(std::strlen(sr_version()) > 0);
    const char* list = sr_experiment_list();
    CHECK(std::strstr(list, "tail-grid") != nullptr);
    CHECK(std::strstr(list, "ablation") != nullptr);
    CHECK(std::strstr(list, "bifurcation") != nullptr);
}

TEST_CASE("analytic battery through the C API") {
    sr_report* report = nullptr;
    int failures = -1;
    REQUIRE(sr_check_analytic(&report, &failures) == SR_OK);
    CHECK(failures == 0);
    CHECK(sr_report_bands_pass(report) == 1);
    CHECK(std::strstr(sr_report_table(report), "multiplier identities") != nullptr);
    sr_report_free(report);
}

TEST_CASE("null-argument discipline") {
    CHECK(sr_config_create(nullptr) == SR_ERR_DOMAIN);
    double out = 0.0;
    CHECK(sr_kyle_lambda(nullptr, 0.5, 0.5, &out) == SR_ERR_DOMAIN);
    CHECK(sr_multiplier_m(0.5, nullptr) == SR_ERR_DOMAIN);
}
