#include "sysrisk/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "sysrisk/errors.hpp"
#include "sysrisk/output.hpp"

namespace sysrisk {

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Monoculture: return "monoculture";
        case ExperimentKind::TailGrid: return "tail-grid";
        case ExperimentKind::Performative: return "performative";
        case ExperimentKind::Interventions: return "interventions";
        case ExperimentKind::Hysteresis: return "hysteresis";
        case ExperimentKind::Ablation: return "ablation";
        case ExperimentKind::CalmStorm: return "calm-storm";
        case ExperimentKind::Bifurcation: return "bifurcation";
    }
    return "unknown";
}

const char* experiment_description(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Monoculture:
            return "adoption S-curve, dependency ratchet and skill floor from phi0 = 0.1";
        case ExperimentKind::TailGrid:
            return "5x5 (phi, rho) grid: drawdowns, excess volatility, tail multiplier";
        case ExperimentKind::Performative:
            return "beta sweep up to the stability bound: self-reference and persistence";
        case ExperimentKind::Interventions:
            return "paired-seed comparison of diversity cap, dependency cap, speed bump";
        case ExperimentKind::Hysteresis:
            return "career-pressure ramp up/hold/down: forward vs backward transition times";
        case ExperimentKind::Ablation:
            return "channel ablation arms: Kyle, +rho, +rho+beta, +rho+beta+kappa";
        case ExperimentKind::CalmStorm:
            return "diversified vs monoculture: unconditional vol vs conditional tails";
        case ExperimentKind::Bifurcation:
            return "closed-form adoption game sweep: folds c*, c** and hysteresis gap";
    }
    return "";
}

ExperimentKind experiment_from_name(const std::string& name) {
    for (const auto kind : all_experiments())
        if (name == experiment_name(kind)) return kind;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::vector<ExperimentKind> all_experiments() {
    return {ExperimentKind::Monoculture,   ExperimentKind::TailGrid,
            ExperimentKind::Performative,  ExperimentKind::Interventions,
            ExperimentKind::Hysteresis,    ExperimentKind::Ablation,
            ExperimentKind::CalmStorm,     ExperimentKind::Bifurcation};
}

namespace {

struct DoubleField {
    const char* name;
    double ModelParams::*member;
};

const std::vector<DoubleField>& double_fields() {
    static const std::vector<DoubleField> fields = {
        {"phi", &ModelParams::phi},
        {"rho", &ModelParams::rho},
        {"beta", &ModelParams::beta},
        {"kappa", &ModelParams::kappa},
        {"mu", &ModelParams::mu},
        {"sigma_v", &ModelParams::sigma_v},
        {"lambda_jump", &ModelParams::lambda_jump},
        {"mu_jump", &ModelParams::mu_jump},
        {"sigma_jump", &ModelParams::sigma_jump},
        {"v0", &ModelParams::v0},
        {"sigma_eta", &ModelParams::sigma_eta},
        {"sigma_nu", &ModelParams::sigma_nu},
        {"sigma_h0", &ModelParams::sigma_h0},
        {"theta", &ModelParams::theta},
        {"sigma_u", &ModelParams::sigma_u},
        {"a_ai", &ModelParams::a_ai},
        {"a_h", &ModelParams::a_h},
        {"tau_risk", &ModelParams::tau_risk},
        {"lambda1", &ModelParams::lambda1},
        {"ewma_decay", &ModelParams::ewma_decay},
        {"gamma", &ModelParams::gamma},
        {"delta_sens", &ModelParams::delta_sens},
        {"c_career", &ModelParams::c_career},
        {"delta_u_scale", &ModelParams::delta_u_scale},
        {"ai_cost0", &ModelParams::ai_cost0},
        {"adopt_temp", &ModelParams::adopt_temp},
        {"adopt_rate", &ModelParams::adopt_rate},
        {"acc_ewma", &ModelParams::acc_ewma},
        {"cost_loc", &ModelParams::cost_loc},
        {"cost_scale", &ModelParams::cost_scale},
        {"skill_floor", &ModelParams::skill_floor},
        {"delta_forget", &ModelParams::delta_forget},
        {"n0", &ModelParams::n0},
        {"tau_signal", &ModelParams::tau_signal},
        {"delta_share", &ModelParams::delta_share},
        {"alpha_rho", &ModelParams::alpha_rho},
        {"rho0", &ModelParams::rho0},
        {"rho_bar", &ModelParams::rho_bar},
        {"beta_max", &ModelParams::beta_max},
    };
    return fields;
}

struct IntField {
    const char* name;
    int ModelParams::*member;
};

const std::vector<IntField>& int_fields() {
    static const std::vector<IntField> fields = {
        {"tau_decide", &ModelParams::tau_decide},
        {"n_agents", &ModelParams::n_agents},
        {"n_noise", &ModelParams::n_noise},
        {"n_periods", &ModelParams::n_periods},
    };
    return fields;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + value + "' as a number");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ConfigError(key + ": cannot parse '" + value + "' as an integer");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(key + ": cannot parse '" + value + "' as a boolean");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        out.push_back(parse_double(key, item.substr(b, e - b + 1)));
    }
    if (out.empty()) throw ConfigError(key + ": empty value list");
    return out;
}

bool is_grid_field(const std::string& name) {
    for (const auto& f : double_fields())
        if (name == f.name) return true;
    return false;
}

abm::InterventionKind intervention_from_name(const std::string& name) {
    if (name == "none") return abm::InterventionKind::None;
    if (name == "diversity-cap") return abm::InterventionKind::DiversityCap;
    if (name == "dependency-cap") return abm::InterventionKind::DependencyCap;
    if (name == "speed-bump") return abm::InterventionKind::SpeedBump;
    if (name == "combined") return abm::InterventionKind::Combined;
    throw ConfigError("unknown intervention '" + name + "'");
}

}  // namespace

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    ModelParams& p = config.params;
    ExperimentSpec& s = config.spec;

    for (const auto& f : double_fields()) {
        if (key == f.name) {
            p.*f.member = parse_double(key, value);
            config.explicit_keys.insert(key);
            return;
        }
    }
    for (const auto& f : int_fields()) {
        if (key == f.name) {
            p.*f.member = parse_int(key, value);
            config.explicit_keys.insert(key);
            return;
        }
    }

    if (key == "skill_law") {
        if (value == "bayesian") p.skill_law = SkillLaw::Bayesian;
        else if (value == "multiplicative") p.skill_law = SkillLaw::Multiplicative;
        else throw ConfigError("skill_law must be 'bayesian' or 'multiplicative'");
    } else if (key == "cost_dist") {
        if (value == "uniform") p.cost_dist = CostDist::Uniform;
        else if (value == "logistic") p.cost_dist = CostDist::Logistic;
        else throw ConfigError("cost_dist must be 'uniform' or 'logistic'");
    } else if (key == "experiment") {
        s.kind = experiment_from_name(value);
    } else if (key == "seeds_per_cell") {
        s.seeds_per_cell = parse_int(key, value);
        if (s.seeds_per_cell < 1) throw_config_error(key, "seeds_per_cell >= 1",
                                                     s.seeds_per_cell);
    } else if (key.rfind("grid.", 0) == 0) {
        const std::string field = key.substr(5);
        if (!is_grid_field(field))
            throw ConfigError("grid axis '" + field + "' is not a model parameter");
        s.grid[field] = parse_list(key, value);
    } else if (key == "intervention") {
        s.intervention.kind = intervention_from_name(value);
    } else if (key == "intervention_arms") {
        s.arms.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            if (b == std::string::npos) continue;
            const std::string name = item.substr(b, e - b + 1);
            intervention_from_name(name == "baseline" ? "none" : name);
            s.arms.push_back(name);
        }
    } else if (key == "rho_cap") {
        s.intervention.rho_cap = parse_double(key, value);
        if (s.intervention.rho_cap < 0 || s.intervention.rho_cap > 1)
            throw_config_error(key, "rho_cap in [0,1]", s.intervention.rho_cap);
    } else if (key == "d_cap") {
        s.intervention.d_cap = parse_double(key, value);
        if (s.intervention.d_cap < 0 || s.intervention.d_cap > 1)
            throw_config_error(key, "d_cap in [0,1]", s.intervention.d_cap);
    } else if (key == "speed_k") {
        s.intervention.speed_k = parse_int(key, value);
        if (s.intervention.speed_k < 1)
            throw_config_error(key, "speed_k >= 1", s.intervention.speed_k);
    } else if (key == "hyst.c_low") {
        s.hyst_c_low = parse_double(key, value);
    } else if (key == "hyst.c_high") {
        s.hyst_c_high = parse_double(key, value);
    } else if (key == "hyst.ramp") {
        s.hyst_ramp = parse_int(key, value);
    } else if (key == "hyst.hold") {
        s.hyst_hold = parse_int(key, value);
    } else if (key == "hyst.tail") {
        s.hyst_tail = parse_int(key, value);
    } else if (key == "hyst.cross") {
        s.hyst_cross = parse_double(key, value);
    } else if (key == "calm_storm.div_phi") {
        s.cs_div_phi = parse_double(key, value);
    } else if (key == "calm_storm.div_rho") {
        s.cs_div_rho = parse_double(key, value);
    } else if (key == "calm_storm.mono_phi") {
        s.cs_mono_phi = parse_double(key, value);
    } else if (key == "calm_storm.mono_rho") {
        s.cs_mono_rho = parse_double(key, value);
    } else if (key == "game.cdf") {
        if (value == "uniform") s.game.cdf = CostDist::Uniform;
        else if (value == "logistic") s.game.cdf = CostDist::Logistic;
        else throw ConfigError("game.cdf must be 'uniform' or 'logistic'");
    } else if (key == "game.loc") {
        s.game.cdf_loc = parse_double(key, value);
    } else if (key == "game.scale") {
        s.game.cdf_scale = parse_double(key, value);
        if (s.game.cdf_scale <= 0) throw_config_error(key, "game.scale > 0", s.game.cdf_scale);
    } else if (key == "game.u0") {
        s.game.u0 = parse_double(key, value);
    } else if (key == "game.cost0") {
        s.game.cost0 = parse_double(key, value);
    } else if (key == "game.grid_points") {
        s.game.grid_points = parse_int(key, value);
        if (s.game.grid_points < 1000)
            throw_config_error(key, "game.grid_points >= 1000", s.game.grid_points);
    } else if (key == "game.c_min") {
        s.game_c_min = parse_double(key, value);
    } else if (key == "game.c_max") {
        s.game_c_max = parse_double(key, value);
    } else if (key == "game.c_steps") {
        s.game_c_steps = parse_int(key, value);
        if (s.game_c_steps < 2) throw_config_error(key, "game.c_steps >= 2", s.game_c_steps);
    } else if (key == "game.u_skill") {
        s.game_u_skill = parse_double(key, value);
    } else if (key == "game.duration") {
        s.game_duration = parse_double(key, value);
    } else if (key == "game.dbar") {
        s.game_dbar = parse_double(key, value);
    } else if (key == "game.complementarity") {
        s.game.complementarity = parse_bool(key, value);
    } else if (key == "bands_file") {
        s.bands_file = value;
    } else {
        throw UnknownKeyError("unknown config key '" + key + "'");
    }
    config.explicit_keys.insert(key);
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig config;
    std::stringstream stream(text);
    std::string line;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": expected key = value";
            throw ConfigError(os.str());
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": empty key";
            throw ConfigError(os.str());
        }
        apply_key(config, key, value);
    }
    config.params.validate();
    return config;
}

RunConfig load_config(const std::string& path) {
    if (path.empty()) {
        RunConfig config;
        config.params.validate();
        return config;
    }
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), path);
}

std::string canonical_config(const RunConfig& config) {
    const ModelParams& p = config.params;
    const ExperimentSpec& s = config.spec;
    std::ostringstream os;
    for (const auto& f : double_fields())
        os << f.name << "=" << io::format_double(p.*f.member) << "\n";
    for (const auto& f : int_fields()) os << f.name << "=" << p.*f.member << "\n";
    os << "skill_law=" << (p.skill_law == SkillLaw::Bayesian ? "bayesian" : "multiplicative")
       << "\n";
    os << "cost_dist=" << (p.cost_dist == CostDist::Uniform ? "uniform" : "logistic")
       << "\n";
    os << "experiment=" << experiment_name(s.kind) << "\n";
    os << "seeds_per_cell=" << s.seeds_per_cell << "\n";
    for (const auto& [axis, values] : s.grid) {
        os << "grid." << axis << "=";
        for (std::size_t i = 0; i < values.size(); ++i)
            os << (i ? "," : "") << io::format_double(values[i]);
        os << "\n";
    }
    os << "intervention=" << static_cast<int>(s.intervention.kind) << ","
       << io::format_double(s.intervention.rho_cap) << ","
       << io::format_double(s.intervention.d_cap) << "," << s.intervention.speed_k << "\n";
    if (!s.arms.empty()) {
        os << "intervention_arms=";
        for (std::size_t i = 0; i < s.arms.size(); ++i) os << (i ? "," : "") << s.arms[i];
        os << "\n";
    }
    os << "hyst=" << io::format_double(s.hyst_c_low) << "," << io::format_double(s.hyst_c_high)
       << "," << s.hyst_ramp << "," << s.hyst_hold << "," << s.hyst_tail << ","
       << io::format_double(s.hyst_cross) << "\n";
    os << "calm_storm=" << io::format_double(s.cs_div_phi) << ","
       << io::format_double(s.cs_div_rho) << "," << io::format_double(s.cs_mono_phi) << ","
       << io::format_double(s.cs_mono_rho) << "\n";
    os << "game=" << (s.game.cdf == CostDist::Uniform ? "uniform" : "logistic") << ","
       << io::format_double(s.game.cdf_loc) << "," << io::format_double(s.game.cdf_scale)
       << "," << io::format_double(s.game.u0) << "," << io::format_double(s.game.cost0)
       << "," << s.game.grid_points << "," << (s.game.complementarity ? 1 : 0) << ","
       << io::format_double(s.game_c_min) << "," << io::format_double(s.game_c_max) << ","
       << s.game_c_steps << "," << io::format_double(s.game_u_skill) << ","
       << io::format_double(s.game_duration) << "," << io::format_double(s.game_dbar)
       << "\n";
    return os.str();
}

std::uint64_t config_hash(const RunConfig& config) {
    const std::string text = canonical_config(config);
    std::uint64_t hash = 1469598103934665603ull; // FNV-1a 64
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    return hash;
}

std::uint64_t run_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t sm = master ^ (0x9e3779b97f4a7c15ull + index * 0xbf58476d1ce4e5b9ull);
    return splitmix64(sm);
}

void apply_horizon(RunConfig& config, Horizon horizon) {
    if (config.is_explicit("n_periods")) return;
    config.params.n_periods = horizon == Horizon::Full ? 5040 : 1260;
}

}  // namespace sysrisk
