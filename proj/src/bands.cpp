#include "sysrisk/bands.hpp"

#include <fstream>
#include <sstream>

#include "sysrisk/errors.hpp"

namespace sysrisk {

namespace {

const std::map<std::string, double>& default_values() {
    static const std::map<std::string, double> table = {
        {"version", 1},

        // Closed-form multiplier identities (4-decimal targets).
        {"multiplier.m_at_015", 1.1765},
        {"multiplier.m_at_035", 1.5385},

        // Calibration moments, ensemble medians at reduced horizon.
        {"moments.ann_vol_min", 0.14},
        {"moments.ann_vol_max", 0.22},
        {"moments.kurtosis_min", 4.0},
        {"moments.kurtosis_max", 10.0},
        {"moments.abs_autocorr_min", 0.2},

        // Empirical multiplier band, baseline vs phi = 0.
        {"multiplier.empirical_min", 1.1},
        {"multiplier.empirical_max", 1.7},

        // Tail grid.
        {"tail_grid.corner_ratio_min", 2.0},
        {"tail_grid.corner_ratio_max", 4.0},
        {"tail_grid.excess_vol_corner_min_pct", 25.0},
        {"tail_grid.max_inversions_per_line", 1},

        // Interventions (paired ensembles).
        {"interventions.depcap_vol_cut_min", 0.10},
        {"interventions.depcap_vol_cut_max", 0.40},
        {"interventions.sign_test_critical", 15}, // of 20 pairs, one-sided 5%

        // Calm before the storm.
        {"calm_storm.vol_slack", 1.15},

        // Hysteresis.
        {"hysteresis.ratio_min", 1.5},
        {"hysteresis.kappa0_ratio_max", 2.0},
        {"hysteresis.revert_phi_max", 0.35},
        {"hysteresis.locked_phi_min", 0.6},

        // Monoculture emergence.
        {"monoculture.terminal_phi_min", 0.3},
        {"monoculture.terminal_phi_max", 0.5},
        {"monoculture.mean_d_min", 0.4},
        {"monoculture.mean_d_max", 0.6},
        {"monoculture.skill_floor_seed_frac", 0.8},

        // Dispersion-ratio regime invariance.
        {"dispersion.ratio_min", 0.8},
        {"dispersion.ratio_max", 1.2},

        // Ablation flags.
        {"ablation.multiplier_threshold", 1.15},
        {"ablation.common_share_threshold", 0.05},
        {"ablation.hysteresis_ratio_threshold", 1.25},
    };
    return table;
}

}  // namespace

Bands Bands::defaults() {
    Bands b;
    b.values_ = default_values();
    b.version_ = 1;
    return b;
}

Bands Bands::load(const std::string& path) {
    Bands b = defaults();
    std::ifstream in(path);
    if (!in) throw IoError("cannot open bands file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto b1 = s.find_first_not_of(" \t\r");
            const auto e1 = s.find_last_not_of(" \t\r");
            return b1 == std::string::npos ? std::string() : s.substr(b1, e1 - b1 + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) continue;
        try {
            b.values_[key] = std::stod(value);
        } catch (const std::exception&) {
            std::ostringstream os;
            os << path << ":" << lineno << ": bad numeric value '" << value << "'";
            throw ConfigError(os.str());
        }
    }
    b.version_ = static_cast<int>(b.get("version"));
    return b;
}

double Bands::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("unknown acceptance band key " + key);
    return it->second;
}

}  // namespace sysrisk
