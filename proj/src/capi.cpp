#include "sysrisk/sysrisk.h"

#include <cstring>
#include <string>

#include "sysrisk/analytic.hpp"
#include "sysrisk/config.hpp"
#include "sysrisk/errors.hpp"
#include "sysrisk/experiments.hpp"
#include "sysrisk/market.hpp"
#include "sysrisk/version.hpp"

using namespace sysrisk;

struct sr_config {
    RunConfig config;
};

struct sr_report {
    std::string summary_json;
    std::string table;
    bool bands_pass = true;
};

namespace {

thread_local std::string g_last_error;

sr_status set_error(ErrorCode code, const char* what) {
    g_last_error = what ? what : "";
    return static_cast<sr_status>(code);
}

template <typename Fn>
sr_status guarded(Fn&& fn) {
    try {
        fn();
        return SR_OK;
    } catch (const Error& e) {
        return set_error(e.code(), e.what());
    } catch (const std::exception& e) {
        return set_error(ErrorCode::Internal, e.what());
    } catch (...) {
        return set_error(ErrorCode::Internal, "unknown error");
    }
}

}  // namespace

extern "C" {

const char* sr_version(void) { return kVersion; }

const char* sr_last_error(void) { return g_last_error.c_str(); }

sr_status sr_config_create(sr_config** out) {
    if (!out) return set_error(ErrorCode::Domain, "out is null");
    return guarded([&] { *out = new sr_config{}; });
}

sr_status sr_config_load(const char* path, sr_config** out) {
    if (!out) return set_error(ErrorCode::Domain, "out is null");
    return guarded([&] {
        auto config = load_config(path ? path : "");
        *out = new sr_config{std::move(config)};
    });
}

sr_status sr_config_set(sr_config* config, const char* key, const char* value) {
    if (!config || !key || !value)
        return set_error(ErrorCode::Domain, "null argument");
    return guarded([&] { apply_key(config->config, key, value); });
}

sr_status sr_config_validate(const sr_config* config) {
    if (!config) return set_error(ErrorCode::Domain, "config is null");
    return guarded([&] { config->config.params.validate(); });
}

sr_status sr_config_hash(const sr_config* config, uint64_t* out) {
    if (!config || !out) return set_error(ErrorCode::Domain, "null argument");
    return guarded([&] { *out = config_hash(config->config); });
}

void sr_config_free(sr_config* config) { delete config; }

const char* sr_experiment_list(void) {
    static const std::string list = [] {
        std::string out;
        for (const auto kind : all_experiments()) {
            out += experiment_name(kind);
            out += " - ";
            out += experiment_description(kind);
            out += "\n";
        }
        return out;
    }();
    return list.c_str();
}

sr_status sr_run_experiment(const sr_config* config, const sr_run_options* options,
                            sr_report** out) {
    if (!config || !out) return set_error(ErrorCode::Domain, "null argument");
    return guarded([&] {
        RunManifest manifest;
        manifest.experiment = config->config.spec.kind;
        if (options) {
            if (options->experiment && options->experiment[0])
                manifest.experiment = experiment_from_name(options->experiment);
            manifest.master_seed = options->master_seed;
            manifest.out_dir =
                options->out_dir && options->out_dir[0] ? options->out_dir : "";
            manifest.jobs = options->jobs;
            manifest.horizon = options->full_horizon ? Horizon::Full : Horizon::Reduced;
        }
        if (manifest.out_dir.empty()) manifest.out_dir = "out";
        const experiments::ExperimentReport report =
            experiments::run_experiment(config->config, manifest);
        auto* handle = new sr_report{};
        handle->summary_json = report.summary_json;
        handle->table = report.table_text;
        handle->bands_pass = report.all_bands_pass;
        *out = handle;
    });
}

const char* sr_report_summary_json(const sr_report* report) {
    return report ? report->summary_json.c_str() : "";
}

const char* sr_report_table(const sr_report* report) {
    return report ? report->table.c_str() : "";
}

int sr_report_bands_pass(const sr_report* report) {
    return report && report->bands_pass ? 1 : 0;
}

void sr_report_free(sr_report* report) { delete report; }

sr_status sr_check_analytic(sr_report** out, int* failures) {
    if (!out) return set_error(ErrorCode::Domain, "out is null");
    return guarded([&] {
        auto* handle = new sr_report{};
        const int failed = experiments::check_analytic(handle->table);
        handle->bands_pass = failed == 0;
        handle->summary_json =
            std::string("{\"failed_checks\": ") + std::to_string(failed) + "}";
        if (failures) *failures = failed;
        *out = handle;
    });
}

sr_status sr_kyle_lambda(const sr_config* config, double phi, double rho, double* out) {
    if (!config || !out) return set_error(ErrorCode::Domain, "null argument");
    return guarded([&] { *out = kyle_lambda(phi, rho, config->config.params); });
}

sr_status sr_effective_lambda(const sr_config* config, double phi, double rho,
                              double beta, double* out) {
    if (!config || !out) return set_error(ErrorCode::Domain, "null argument");
    return guarded([&] { *out = effective_lambda(phi, rho, beta, config->config.params); });
}

sr_status sr_coupling_r(const sr_config* config, double phi, double rho, double beta,
                        double* out) {
    if (!config || !out) return set_error(ErrorCode::Domain, "null argument");
    return guarded([&] { *out = analytic::coupling_r(phi, rho, beta, config->config.params); });
}

sr_status sr_multiplier_m(double r, double* out) {
    if (!out) return set_error(ErrorCode::Domain, "out is null");
    return guarded([&] { *out = analytic::multiplier_m(r); });
}

sr_status sr_ami_index(double phi_hat, double rho_hat, double beta_hat, double* out) {
    if (!out) return set_error(ErrorCode::Domain, "out is null");
    return guarded([&] { *out = analytic::ami_index(phi_hat, rho_hat, beta_hat); });
}

}  // extern "C"
