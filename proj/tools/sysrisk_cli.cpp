// Command-line front end. Deliberately built against the public C API only
// (sysrisk.h), the same surface other language bindings would use.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "sysrisk/sysrisk.h"

namespace {

struct ConfigDeleter {
    void operator()(sr_config* c) const { sr_config_free(c); }
};
struct ReportDeleter {
    void operator()(sr_report* r) const { sr_report_free(r); }
};
using ConfigPtr = std::unique_ptr<sr_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<sr_report, ReportDeleter>;

int fail(sr_status status, const std::string& context) {
    std::cerr << "error: " << context << ": " << sr_last_error() << "\n";
    // Config problems exit 2, IO problems 3, anything else 4.
    if (status == SR_ERR_CONFIG || status == SR_ERR_UNKNOWN_KEY) return 2;
    if (status == SR_ERR_IO) return 3;
    return 4;
}

ConfigPtr load(const std::string& path, sr_status& status) {
    sr_config* raw = nullptr;
    status = sr_config_load(path.empty() ? nullptr : path.c_str(), &raw);
    return ConfigPtr(raw);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sysrisk - three-channel systemic-risk market laboratory"};
    app.set_version_flag("--version", std::string(sr_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::string experiment;
    std::string out_dir;
    std::uint64_t seed = 42;
    int jobs = 0;
    std::string horizon = "reduced";

    const char* env_out = std::getenv("SYSRISK_OUT");
    std::string default_out = env_out && env_out[0] ? env_out : "out";

    auto* run = app.add_subcommand("run", "run an experiment and write its artifacts");
    run->add_option("--config", config_path, "key=value config file");
    run->add_option("--experiment", experiment, "experiment name (see list-experiments)");
    run->add_option("--seed", seed, "master seed (default 42)");
    run->add_option("--out", out_dir, "output directory (default $SYSRISK_OUT or ./out)");
    run->add_option("--jobs", jobs, "worker threads (default: hardware concurrency)");
    run->add_option("--horizon", horizon, "reduced (T=1260) or full (T=5040)")
        ->check(CLI::IsMember({"reduced", "full"}));

    auto* check = app.add_subcommand("check-analytic",
                                     "run the closed-form battery, no simulation");
    check->add_option("--config", config_path, "key=value config file");

    auto* list = app.add_subcommand("list-experiments", "list runnable experiments");

    auto* validate = app.add_subcommand("validate-config", "parse and validate a config");
    validate->add_option("--config", config_path, "key=value config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << sr_experiment_list();
        return 0;
    }

    if (validate->parsed()) {
        sr_status status = SR_OK;
        ConfigPtr config = load(config_path, status);
        if (status != SR_OK) return fail(status, "validate-config");
        std::uint64_t hash = 0;
        sr_config_hash(config.get(), &hash);
        std::cout << "config ok (hash " << hash << ")\n";
        return 0;
    }

    if (check->parsed()) {
        sr_report* raw = nullptr;
        int failures = 0;
        const sr_status status = sr_check_analytic(&raw, &failures);
        ReportPtr report(raw);
        if (status != SR_OK) return fail(status, "check-analytic");
        std::cout << sr_report_table(report.get());
        std::cout << (failures == 0 ? "all checks passed\n"
                                    : std::to_string(failures) + " check(s) failed\n");
        return failures == 0 ? 0 : 4;
    }

    // run
    sr_status status = SR_OK;
    ConfigPtr config = load(config_path, status);
    if (status != SR_OK) return fail(status, "loading config");

    sr_run_options options{};
    options.experiment = experiment.empty() ? nullptr : experiment.c_str();
    options.master_seed = seed;
    const std::string resolved_out = out_dir.empty() ? default_out : out_dir;
    options.out_dir = resolved_out.c_str();
    options.jobs = jobs > 0 ? jobs
                            : static_cast<int>(std::thread::hardware_concurrency());
    options.full_horizon = horizon == "full" ? 1 : 0;

    sr_report* raw = nullptr;
    status = sr_run_experiment(config.get(), &options, &raw);
    ReportPtr report(raw);
    if (status != SR_OK) return fail(status, "run");

    std::cout << sr_report_table(report.get());
    std::cout << "artifacts: " << resolved_out << "/"
              << (experiment.empty() ? "<experiment>" : experiment) << "/\n";
    // Acceptance-band outcomes are data, not process failures: exit 0 either
    // way; the summary carries the per-band pass flags.
    return 0;
}
