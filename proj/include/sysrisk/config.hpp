#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sysrisk/adoption.hpp"
#include "sysrisk/params.hpp"
#include "sysrisk/simulator.hpp"

namespace sysrisk {

enum class ExperimentKind {
    Monoculture,
    TailGrid,
    Performative,
    Interventions,
    Hysteresis,
    Ablation,
    CalmStorm,
    Bifurcation,
};

const char* experiment_name(ExperimentKind kind);
ExperimentKind experiment_from_name(const std::string& name); // throws ConfigError
std::vector<ExperimentKind> all_experiments();
const char* experiment_description(ExperimentKind kind);

enum class Horizon { Reduced, Full };

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Monoculture;
    int seeds_per_cell = 20;

    // Grid axes keyed by ModelParams field name (validated at parse time).
    std::map<std::string, std::vector<double>> grid;

    // Intervention arm parameters.
    abm::Intervention intervention;
    // Restrict the interventions experiment to a subset of arms (empty: all).
    std::vector<std::string> arms;

    // Hysteresis protocol: ramp up over hyst_ramp periods, hold, ramp down
    // symmetrically, then a release tail.
    double hyst_c_low = 0.0;
    double hyst_c_high = 1.8;
    int hyst_ramp = 700;
    int hyst_hold = 400;
    int hyst_tail = 900;
    double hyst_cross = 0.35; // phi crossing level for transition times

    // Calm-before-storm configuration pair.
    double cs_div_phi = 0.2;
    double cs_div_rho = 0.2;
    double cs_mono_phi = 0.9;
    double cs_mono_rho = 0.7;

    // Adoption game for the bifurcation sweep.
    analytic::AdoptionGameSpec game;
    double game_c_min = 0.0;
    double game_c_max = 3.5;
    int game_c_steps = 176;
    double game_u_skill = 0.001;
    double game_duration = 2520.0;
    double game_dbar = 1.0;

    std::string bands_file; // empty: built-in defaults
};

struct RunConfig {
    ModelParams params;
    ExperimentSpec spec;
    std::set<std::string> explicit_keys; // keys set by the config file
    bool is_explicit(const std::string& key) const {
        return explicit_keys.count(key) > 0;
    }
};

// Plain-text key=value config ('#' comments). Every ModelParams field is
// settable by name; unknown keys are rejected with UnknownKey; all values are
// validated against the type invariants. An empty (or absent) file yields the
// full baseline calibration defaults.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, const std::string& origin = "<string>");

// Applies one key=value assignment (also the C API's setter hook).
void apply_key(RunConfig& config, const std::string& key, const std::string& value);

// Canonical serialization of everything that determines results (model
// parameters + experiment spec, not manifest-level paths), and its FNV-1a
// hash, embedded in all outputs.
std::string canonical_config(const RunConfig& config);
std::uint64_t config_hash(const RunConfig& config);

// Derived run seed for (master seed, run index); independent of scheduling.
std::uint64_t run_seed(std::uint64_t master, std::uint64_t index);

// Run manifest: everything the CLI adds on top of the config file.
struct RunManifest {
    std::string config_path;  // empty: defaults
    ExperimentKind experiment = ExperimentKind::Monoculture;
    std::uint64_t master_seed = 42;
    std::string out_dir = "out";
    int jobs = 1;
    Horizon horizon = Horizon::Reduced;
};

// Horizon override: reduced = 1,260 periods, full = 5,040, unless the config
// file set n_periods explicitly.
void apply_horizon(RunConfig& config, Horizon horizon);

}  // namespace sysrisk
