#pragma once

#include <map>
#include <string>
#include <vector>

#include "sysrisk/bands.hpp"
#include "sysrisk/config.hpp"
#include "sysrisk/metrics.hpp"
#include "sysrisk/output.hpp"
#include "sysrisk/simulator.hpp"

namespace sysrisk::experiments {

// Everything an experiment derives from one finished run. Fields without
// context for a given experiment stay NaN.
struct RunStats {
    bool unstable = false;
    int periods = 0;
    bool has_metrics = false;
    metrics::MetricsRecord rec;

    double cte95_gap = 0.0;   // upper-tail CTE of |p - v|
    double vol_daily = 0.0;   // per-period sd of log returns
    double tail_ratio99 = 0.0;
    double common_share = 0.0; // R^2 of returns on common-noise increments

    double terminal_phi = 0.0;
    double terminal_mean_d = 0.0;
    double time_avg_mean_d = 0.0;
    double terminal_mean_sigma_h2 = 0.0;
    double min_skill_index = 1.0;
    double sigma_h_growth = 1.0; // sqrt(mean sigma_h2 terminal / initial)

    double slope_first = 0.0, slope_middle = 0.0, slope_last = 0.0;

    int cross_forward = -1;  // first period with phi >= threshold
    int cross_backward = -1; // first period >= release with phi <= threshold

    double pi_early = 0.0, pi_late = 0.0;
    double persist_early = 0.0, persist_late = 0.0;

    double dispersion_ai = 0.0;
};

struct AnalyzeOptions {
    double cross_threshold = 0.35;
    int release_start = -1;   // hysteresis: first period of the ramp-down
    int pi_window = 126;
    bool want_dispersion = false;
};

RunStats analyze_run(const abm::SimConfig& config, const abm::SimResult& result,
                     const AnalyzeOptions& options);

struct ExperimentReport {
    ExperimentKind kind = ExperimentKind::Monoculture;
    io::Table cells;
    std::map<std::string, io::Table> extra_tables; // filename stem -> table
    std::string summary_json;                      // serialized summary
    std::string table_text;                        // human-readable report
    bool all_bands_pass = true;
};

ExperimentReport run_monoculture(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_tail_grid(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_performative(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_interventions(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_hysteresis(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_ablation(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_calm_storm(const RunConfig& config, const RunManifest& manifest);
ExperimentReport run_bifurcation(const RunConfig& config, const RunManifest& manifest);

// Dispatch on config.spec.kind, write cells.csv / summary.json / report.txt /
// manifest.json (plus any extra tables) under manifest.out_dir/<experiment>/,
// and return the report. Only the manifest carries a timestamp.
ExperimentReport run_experiment(const RunConfig& config, const RunManifest& manifest);

// Closed-form battery (no simulation): multiplier identities, beta = 0
// nullification, convexity and excess-sensitivity identities, cross-partial
// sign, endogenous channel curvature, and a coarse bifurcation sweep.
// Returns the number of failed checks and appends one line per check.
int check_analytic(std::string& report);

}  // namespace sysrisk::experiments
