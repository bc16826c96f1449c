#include "sysrisk/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sysrisk/adoption.hpp"
#include "sysrisk/analytic.hpp"
#include "sysrisk/errors.hpp"
#include "sysrisk/market.hpp"
#include "sysrisk/pool.hpp"
#include "sysrisk/rng.hpp"

namespace sysrisk::experiments {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> xs) {
    xs.erase(std::remove_if(xs.begin(), xs.end(),
                            [](double x) { return !std::isfinite(x); }),
             xs.end());
    if (xs.empty()) return kNaN;
    std::sort(xs.begin(), xs.end());
    const std::size_t n = xs.size();
    return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

std::string fmt(double v, int prec = 4) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

std::string d17(double v) { return io::format_double(v); }

// Normal tail normalizer: CTE_alpha of |N(0,1)| lower tail magnitude.
double normal_cte_factor(double alpha) {
    const double z = Rng::inverse_normal_cdf(alpha);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(8.0 * std::atan(1.0));
    return pdf / (1.0 - alpha);
}

struct SimProto {
    ModelParams params;
    abm::Intervention intervention{};
    std::vector<double> career_schedule{};
    bool record_agents = false;
    bool freeze_adoption = false;
};

abm::SimConfig make_config(const SimProto& proto, std::uint64_t chash,
                           std::uint64_t seed) {
    abm::SimConfig config;
    config.params = proto.params;
    config.intervention = proto.intervention;
    config.career_schedule = proto.career_schedule;
    config.record_agents = proto.record_agents;
    config.freeze_adoption = proto.freeze_adoption;
    config.config_hash = chash;
    config.seed = seed;
    return config;
}

struct SeriesBundle {
    std::vector<double> phi, mean_d, mean_sigma_h2;
};

std::vector<RunStats> run_ensemble(const SimProto& proto, int seeds,
                                   const RunManifest& manifest, std::uint64_t chash,
                                   const AnalyzeOptions& options,
                                   std::vector<SeriesBundle>* series_out = nullptr) {
    std::vector<RunStats> stats(static_cast<std::size_t>(seeds));
    if (series_out) series_out->resize(static_cast<std::size_t>(seeds));
    parallel_for(static_cast<std::size_t>(seeds), manifest.jobs, [&](std::size_t i) {
        const auto config =
            make_config(proto, chash, run_seed(manifest.master_seed, i));
        const abm::SimResult result = abm::simulate(config);
        stats[i] = analyze_run(config, result, options);
        if (series_out) {
            (*series_out)[i].phi = result.phi;
            (*series_out)[i].mean_d = result.mean_d;
            (*series_out)[i].mean_sigma_h2 = result.mean_sigma_h2;
        }
    });
    return stats;
}

std::vector<std::string> metrics_row(const metrics::MetricsRecord& rec) {
    std::vector<std::string> out;
    for (const double v : metrics::metrics_values(rec)) out.push_back(d17(v));
    return out;
}

void append_metrics_columns(std::vector<std::string>& cols) {
    for (const char* name : metrics::metrics_columns()) cols.push_back(name);
}

struct BandCheck {
    std::string name;
    double value;
    std::string requirement;
    bool pass;
};

json band_json(const std::vector<BandCheck>& checks) {
    json arr = json::array();
    for (const auto& c : checks)
        arr.push_back({{"name", c.name},
                       {"value", c.value},
                       {"requirement", c.requirement},
                       {"pass", c.pass}});
    return arr;
}

void render_bands(std::ostringstream& os, const std::vector<BandCheck>& checks,
                  bool& all_pass) {
    for (const auto& c : checks) {
        os << (c.pass ? "  [PASS] " : "  [FAIL] ") << c.name << " = " << fmt(c.value)
           << "  (" << c.requirement << ")\n";
        all_pass = all_pass && c.pass;
    }
}

Bands load_bands(const RunConfig& config) {
    if (config.spec.bands_file.empty()) return Bands::defaults();
    return Bands::load(config.spec.bands_file);
}

std::vector<double> grid_axis(const RunConfig& config, const std::string& name,
                              std::vector<double> fallback) {
    const auto it = config.spec.grid.find(name);
    return it == config.spec.grid.end() ? fallback : it->second;
}

double stable_fraction(const std::vector<RunStats>& stats) {
    if (stats.empty()) return 0.0;
    int ok = 0;
    for (const auto& s : stats)
        if (!s.unstable) ++ok;
    return static_cast<double>(ok) / static_cast<double>(stats.size());
}

template <typename F>
std::vector<double> collect(const std::vector<RunStats>& stats, F&& get,
                            bool stable_only = true) {
    std::vector<double> out;
    out.reserve(stats.size());
    for (const auto& s : stats) {
        if (stable_only && (s.unstable || !s.has_metrics)) continue;
        out.push_back(get(s));
    }
    return out;
}

}  // namespace

RunStats analyze_run(const abm::SimConfig& config, const abm::SimResult& result,
                     const AnalyzeOptions& options) {
    RunStats st;
    st.unstable = result.unstable;
    st.periods = static_cast<int>(result.periods());
    st.min_skill_index = result.min_skill_index;

    const auto& p = result.p;
    const auto& v = result.v;
    const auto& r = result.log_return;
    if (st.periods == 0) return st;

    st.terminal_phi = result.phi.back();
    st.terminal_mean_d = result.mean_d.back();
    st.time_avg_mean_d =
        std::accumulate(result.mean_d.begin(), result.mean_d.end(), 0.0) /
        static_cast<double>(result.mean_d.size());
    st.terminal_mean_sigma_h2 = result.mean_sigma_h2.back();
    st.sigma_h_growth =
        std::sqrt(result.mean_sigma_h2.back() / config.params.sigma_h2_initial());

    // Adoption slope per third of the run.
    const std::size_t third = result.phi.size() / 3;
    if (third >= 2) {
        const auto slope = [&](std::size_t a, std::size_t b) {
            return (result.phi[b - 1] - result.phi[a]) / static_cast<double>(b - a);
        };
        st.slope_first = slope(0, third);
        st.slope_middle = slope(third, 2 * third);
        st.slope_last = slope(2 * third, result.phi.size());
    }

    for (std::size_t t = 0; t < result.phi.size(); ++t) {
        if (result.phi[t] >= options.cross_threshold) {
            st.cross_forward = static_cast<int>(t);
            break;
        }
    }
    if (options.release_start >= 0) {
        for (std::size_t t = static_cast<std::size_t>(options.release_start);
             t < result.phi.size(); ++t) {
            if (result.phi[t] <= options.cross_threshold) {
                st.cross_backward = static_cast<int>(t);
                break;
            }
        }
    }

    st.pi_early = st.pi_late = kNaN;
    st.persist_early = st.persist_late = kNaN;
    st.dispersion_ai = kNaN;
    st.rec.empirical_multiplier = kNaN;
    st.rec.dispersion_ratio_ai = kNaN;
    st.rec.performativity_index = kNaN;

    if (result.unstable || st.periods < 120) return st;

    st.rec = metrics::basic_record(r, p);
    st.has_metrics = true;

    std::vector<double> gaps(p.size());
    for (std::size_t t = 0; t < p.size(); ++t) gaps[t] = std::abs(p[t] - v[t]);
    st.cte95_gap = metrics::cte_alpha(gaps, 0.95, metrics::Tail::Upper);

    {
        const double n = static_cast<double>(r.size());
        double mean = std::accumulate(r.begin(), r.end(), 0.0) / n;
        double ss = 0.0;
        for (const double x : r) ss += (x - mean) * (x - mean);
        st.vol_daily = std::sqrt(ss / (n - 1.0));
    }
    static const double cte99_factor = normal_cte_factor(0.99);
    st.tail_ratio99 = -st.rec.cte99 / (cte99_factor * st.vol_daily);

    // Common-noise share: R^2 of returns on common-noise increments.
    {
        std::vector<double> deta(result.eta.size() - 1);
        for (std::size_t t = 1; t < result.eta.size(); ++t)
            deta[t - 1] = result.eta[t] - result.eta[t - 1];
        const double corr = metrics::pearson(
            std::span<const double>(r.data() + 1, r.size() - 1), deta);
        st.common_share = std::isfinite(corr) ? corr * corr : 0.0;
    }

    // Performativity index series and early/late medians.
    if (options.pi_window > 0 &&
        static_cast<std::size_t>(options.pi_window) + 2 < p.size()) {
        const auto pi =
            metrics::performativity_index(p, v, options.pi_window, config.params.mu);
        const std::size_t quarter = std::max<std::size_t>(pi.size() / 4, 1);
        st.pi_early = median(std::vector<double>(pi.begin(), pi.begin() + quarter));
        st.pi_late = median(std::vector<double>(pi.end() - quarter, pi.end()));
        st.rec.performativity_index = median(pi);
    }

    // Squared-return persistence on the first/last third.
    if (third > 12) {
        st.persist_early = metrics::autocorr(
            std::span<const double>(r.data(), third), metrics::Transform::Square, 1);
        st.persist_late = metrics::autocorr(
            std::span<const double>(r.data() + 2 * third, r.size() - 2 * third),
            metrics::Transform::Square, 1);
    }

    // Within-AI-group dispersion of demand positions, stress = top-decile
    // absolute market returns.
    if (options.want_dispersion && !result.agent_q.empty()) {
        const int n_agents = result.n_agents;
        std::vector<int> group;
        for (const auto& a : result.agents)
            if (a.strategy != abm::Strategy::Human) group.push_back(a.id);
        if (group.size() >= 2) {
            std::vector<std::vector<double>> by_agent(
                static_cast<std::size_t>(n_agents),
                std::vector<double>(p.size(), 0.0));
            for (std::size_t t = 0; t < p.size(); ++t)
                for (int a = 0; a < n_agents; ++a)
                    by_agent[static_cast<std::size_t>(a)][t] =
                        result.agent_q[t * static_cast<std::size_t>(n_agents) +
                                       static_cast<std::size_t>(a)];
            std::vector<double> abs_r(r.size());
            for (std::size_t t = 0; t < r.size(); ++t) abs_r[t] = std::abs(r[t]);
            std::vector<double> sorted = abs_r;
            std::sort(sorted.begin(), sorted.end());
            const double cutoff = sorted[static_cast<std::size_t>(0.9 * sorted.size())];
            std::vector<char> stress(r.size());
            for (std::size_t t = 0; t < r.size(); ++t) stress[t] = abs_r[t] >= cutoff;
            st.dispersion_ai = metrics::dispersion_ratio(by_agent, group, stress);
            st.rec.dispersion_ratio_ai = st.dispersion_ai;
        }
    }
    return st;
}

// --------------------------------------------------------------------------
// Monoculture emergence (adoption S-curve, dependency ratchet, skill floor)
// --------------------------------------------------------------------------

ExperimentReport run_monoculture(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::Monoculture;
    const Bands bands = load_bands(config);
    const std::uint64_t chash = config_hash(config);

    SimProto proto;
    proto.params = config.params;
    if (!config.is_explicit("phi")) proto.params.phi = 0.1;
    proto.record_agents = true;

    AnalyzeOptions options;
    options.want_dispersion = true;

    std::vector<SeriesBundle> series;
    const auto stats = run_ensemble(proto, config.spec.seeds_per_cell, manifest, chash,
                                    options, &series);

    // Cells
    report.cells.columns = {"seed", "unstable", "terminal_phi", "terminal_mean_d",
                            "time_avg_mean_d", "min_skill_index", "slope_first",
                            "slope_middle", "slope_last"};
    append_metrics_columns(report.cells.columns);
    report.cells.columns.push_back("config_hash");
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const auto& s = stats[i];
        std::vector<std::string> row = {
            io::format_u64(run_seed(manifest.master_seed, i)),
            s.unstable ? "1" : "0",
            d17(s.terminal_phi),
            d17(s.terminal_mean_d),
            d17(s.time_avg_mean_d),
            d17(s.min_skill_index),
            d17(s.slope_first),
            d17(s.slope_middle),
            d17(s.slope_last)};
        for (auto& cell : metrics_row(s.rec)) row.push_back(std::move(cell));
        row.push_back(io::format_u64(chash));
        report.cells.add_row(std::move(row));
    }

    // Ensemble median trajectories.
    io::Table traj;
    traj.columns = {"t", "phi_median", "mean_d_median", "mean_sigma_h2_median"};
    std::size_t horizon = 0;
    for (const auto& b : series) horizon = std::max(horizon, b.phi.size());
    for (std::size_t t = 0; t < horizon; ++t) {
        std::vector<double> ph, md, ms;
        for (const auto& b : series) {
            if (t < b.phi.size()) {
                ph.push_back(b.phi[t]);
                md.push_back(b.mean_d[t]);
                ms.push_back(b.mean_sigma_h2[t]);
            }
        }
        traj.add_row({std::to_string(t), d17(median(ph)), d17(median(md)),
                      d17(median(ms))});
    }
    report.extra_tables["trajectory"] = std::move(traj);

    // Bands
    const double term_phi = median(collect(stats, [](const RunStats& s) {
        return s.terminal_phi;
    }));
    const double term_d = median(collect(stats, [](const RunStats& s) {
        return s.terminal_mean_d;
    }));
    const double avg_d = median(collect(stats, [](const RunStats& s) {
        return s.time_avg_mean_d;
    }));
    // At the reduced horizon only the takeoff inflection fits in the window;
    // the saturation phase needs at least half the full horizon.
    const bool expect_plateau = config.params.n_periods >= 2520;
    int floor_hits = 0, s_shaped = 0;
    for (const auto& s : stats) {
        if (s.min_skill_index <= config.params.skill_floor * 1.0001) ++floor_hits;
        const bool takeoff = s.slope_middle > s.slope_first;
        const bool saturates = s.slope_middle > s.slope_last;
        if (expect_plateau ? takeoff && saturates : takeoff) ++s_shaped;
    }
    const double floor_frac = static_cast<double>(floor_hits) / stats.size();
    const double s_frac = static_cast<double>(s_shaped) / stats.size();
    const double disp = median(collect(stats, [](const RunStats& s) {
        return s.dispersion_ai;
    }));

    std::vector<BandCheck> checks;
    checks.push_back({"terminal_phi_median", term_phi,
                      "in [" + fmt(bands.get("monoculture.terminal_phi_min")) + ", " +
                          fmt(bands.get("monoculture.terminal_phi_max")) + "]",
                      term_phi >= bands.get("monoculture.terminal_phi_min") &&
                          term_phi <= bands.get("monoculture.terminal_phi_max")});
    checks.push_back({"terminal_mean_d_median", term_d,
                      "in [" + fmt(bands.get("monoculture.mean_d_min")) + ", " +
                          fmt(bands.get("monoculture.mean_d_max")) + "]",
                      term_d >= bands.get("monoculture.mean_d_min") &&
                          term_d <= bands.get("monoculture.mean_d_max")});
    checks.push_back({"skill_floor_seed_fraction", floor_frac,
                      ">= " + fmt(bands.get("monoculture.skill_floor_seed_frac")),
                      floor_frac >= bands.get("monoculture.skill_floor_seed_frac")});
    checks.push_back({"s_curve_seed_fraction", s_frac,
                      expect_plateau ? ">= 0.5 (slow/fast/slow)" : ">= 0.5 (takeoff)",
                      s_frac >= 0.5});

    std::ostringstream table;
    table << "Monoculture emergence (" << stats.size() << " seeds, T = "
          << config.params.n_periods << ")\n";
    table << "  terminal phi median      " << fmt(term_phi) << "\n";
    table << "  terminal mean d median   " << fmt(term_d) << "\n";
    table << "  time-avg mean d median   " << fmt(avg_d) << "\n";
    table << "  skill-floor seed frac    " << fmt(floor_frac) << "\n";
    table << "  dispersion ratio (AI)    " << fmt(disp) << "\n";
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["seeds"] = stats.size();
    summary["stable_fraction"] = stable_fraction(stats);
    summary["terminal_phi_median"] = term_phi;
    summary["terminal_mean_d_median"] = term_d;
    summary["time_avg_mean_d_median"] = avg_d;
    summary["skill_floor_seed_fraction"] = floor_frac;
    summary["s_curve_seed_fraction"] = s_frac;
    summary["dispersion_ratio_ai_median"] = disp;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    summary["cells_schema"] = metrics::kMetricsSchema;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Tail grid (phi x rho): drawdowns, excess volatility, empirical multiplier
// --------------------------------------------------------------------------

ExperimentReport run_tail_grid(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::TailGrid;
    const Bands bands = load_bands(config);
    const std::uint64_t chash = config_hash(config);

    const std::vector<double> phis =
        grid_axis(config, "phi", {0.1, 0.3, 0.5, 0.7, 0.9});
    const std::vector<double> rhos =
        grid_axis(config, "rho", {0.3, 0.4, 0.5, 0.6, 0.7});
    const int seeds = config.spec.seeds_per_cell;

    AnalyzeOptions options;

    // phi = 0 benchmark ensemble (paired seeds) for the empirical multiplier.
    SimProto base_proto;
    base_proto.params = config.params;
    base_proto.params.phi = 0.0;
    base_proto.freeze_adoption = true;
    const auto base_stats = run_ensemble(base_proto, seeds, manifest, chash, options);

    struct Cell {
        double phi, rho;
        bool rho_zero_extension;
        std::vector<RunStats> stats;
        std::vector<double> multipliers;
    };
    std::vector<Cell> cells;
    for (const double rho : rhos)
        for (const double phi : phis) cells.push_back({phi, rho, false, {}, {}});
    for (const double phi : phis) cells.push_back({phi, 0.0, true, {}, {}});

    for (auto& cell : cells) {
        SimProto proto;
        proto.params = config.params;
        proto.params.phi = cell.phi;
        proto.params.rho = cell.rho;
        proto.freeze_adoption = true;
        cell.stats = run_ensemble(proto, seeds, manifest, chash, options);
        for (int i = 0; i < seeds; ++i) {
            const auto& s = cell.stats[static_cast<std::size_t>(i)];
            const auto& b = base_stats[static_cast<std::size_t>(i)];
            cell.multipliers.push_back(s.has_metrics && b.has_metrics
                                           ? s.cte95_gap / b.cte95_gap
                                           : kNaN);
        }
    }

    report.cells.columns = {"phi", "rho", "seed", "unstable"};
    append_metrics_columns(report.cells.columns);
    report.cells.columns.push_back("cte95_gap");
    report.cells.columns.push_back("common_share");
    report.cells.columns.push_back("config_hash");
    for (const auto& cell : cells) {
        for (int i = 0; i < seeds; ++i) {
            const auto& s = cell.stats[static_cast<std::size_t>(i)];
            metrics::MetricsRecord rec = s.rec;
            rec.empirical_multiplier = cell.multipliers[static_cast<std::size_t>(i)];
            std::vector<std::string> row = {
                d17(cell.phi), d17(cell.rho),
                io::format_u64(run_seed(manifest.master_seed, i)),
                s.unstable ? "1" : "0"};
            for (auto& c : metrics_row(rec)) row.push_back(std::move(c));
            row.push_back(d17(s.cte95_gap));
            row.push_back(d17(s.common_share));
            row.push_back(io::format_u64(chash));
            report.cells.add_row(std::move(row));
        }
    }

    // Per-cell medians.
    const auto cell_at = [&](double phi, double rho) -> const Cell& {
        for (const auto& c : cells)
            if (std::abs(c.phi - phi) < 1e-12 && std::abs(c.rho - rho) < 1e-12 &&
                !c.rho_zero_extension)
                return c;
        throw Error(ErrorCode::Internal, "missing grid cell");
    };
    const auto med_dd = [&](const Cell& c) {
        return median(collect(c.stats, [](const RunStats& s) {
            return std::abs(s.rec.max_drawdown);
        }));
    };
    const auto med_vol = [&](const Cell& c) {
        return median(collect(c.stats, [](const RunStats& s) {
            return s.vol_daily * s.vol_daily;
        }));
    };
    const auto med_common = [&](const Cell& c) {
        return median(collect(c.stats, [](const RunStats& s) {
            return s.common_share * s.vol_daily * s.vol_daily;
        }));
    };

    const Cell& corner_low = cell_at(phis.front(), rhos.front());
    const Cell& corner_high = cell_at(phis.back(), rhos.back());
    const double dd_low = med_dd(corner_low);
    const double dd_high = med_dd(corner_high);
    const double corner_ratio = dd_high / dd_low;

    // Excess volatility: common-noise-attributable variance vs the base cell,
    // as a percentage of the base cell's total variance.
    const double base_var = med_vol(corner_low);
    const double excess_corner_pct =
        100.0 * (med_common(corner_high) - med_common(corner_low)) / base_var;

    // Monotonicity along both axes with at most the allowed inversions/line.
    int worst_row_inversions = 0, worst_col_inversions = 0;
    for (const double rho : rhos) {
        int inv = 0;
        for (std::size_t i = 1; i < phis.size(); ++i)
            if (med_dd(cell_at(phis[i], rho)) < med_dd(cell_at(phis[i - 1], rho)))
                ++inv;
        worst_row_inversions = std::max(worst_row_inversions, inv);
    }
    for (const double phi : phis) {
        int inv = 0;
        for (std::size_t i = 1; i < rhos.size(); ++i)
            if (med_dd(cell_at(phi, rhos[i])) < med_dd(cell_at(phi, rhos[i - 1])))
                ++inv;
        worst_col_inversions = std::max(worst_col_inversions, inv);
    }

    // rho = 0 extension: empirical multiplier about one in every phi row.
    double rho0_mult_min = std::numeric_limits<double>::infinity();
    double rho0_mult_max = -std::numeric_limits<double>::infinity();
    for (const auto& c : cells) {
        if (!c.rho_zero_extension) continue;
        const double m = median(c.multipliers);
        rho0_mult_min = std::min(rho0_mult_min, m);
        rho0_mult_max = std::max(rho0_mult_max, m);
    }

    std::vector<BandCheck> checks;
    checks.push_back({"corner_drawdown_ratio", corner_ratio,
                      "in [" + fmt(bands.get("tail_grid.corner_ratio_min")) + ", " +
                          fmt(bands.get("tail_grid.corner_ratio_max")) + "]",
                      corner_ratio >= bands.get("tail_grid.corner_ratio_min") &&
                          corner_ratio <= bands.get("tail_grid.corner_ratio_max")});
    checks.push_back(
        {"excess_vol_corner_pct", excess_corner_pct,
         "> " + fmt(bands.get("tail_grid.excess_vol_corner_min_pct")),
         excess_corner_pct > bands.get("tail_grid.excess_vol_corner_min_pct")});
    const double max_inv = bands.get("tail_grid.max_inversions_per_line");
    checks.push_back({"max_row_inversions", static_cast<double>(worst_row_inversions),
                      "<= " + fmt(max_inv), worst_row_inversions <= max_inv});
    checks.push_back({"max_col_inversions", static_cast<double>(worst_col_inversions),
                      "<= " + fmt(max_inv), worst_col_inversions <= max_inv});
    checks.push_back({"rho0_multiplier_min", rho0_mult_min, "in [0.8, 1.2]",
                      rho0_mult_min >= 0.8 && rho0_mult_max <= 1.2});

    std::ostringstream table;
    table << "Tail grid (" << phis.size() << " x " << rhos.size() << " cells, "
          << seeds << " seeds each)\n";
    table << "  median |drawdown| by (phi, rho):\n";
    table << "      phi\\rho";
    for (const double rho : rhos) table << "  " << fmt(rho, 3);
    table << "\n";
    for (const double phi : phis) {
        table << "      " << fmt(phi, 3) << "   ";
        for (const double rho : rhos) table << "  " << fmt(med_dd(cell_at(phi, rho)), 3);
        table << "\n";
    }
    table << "  corner ratio |dd(" << fmt(phis.back(), 2) << "," << fmt(rhos.back(), 2)
          << ")| / |dd(" << fmt(phis.front(), 2) << "," << fmt(rhos.front(), 2)
          << ")| = " << fmt(corner_ratio) << "\n";
    table << "  excess common vol at corner = " << fmt(excess_corner_pct) << "%\n";
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["corner_drawdown_ratio"] = corner_ratio;
    summary["excess_vol_corner_pct"] = excess_corner_pct;
    summary["max_row_inversions"] = worst_row_inversions;
    summary["max_col_inversions"] = worst_col_inversions;
    summary["rho0_multiplier_range"] = {rho0_mult_min, rho0_mult_max};
    json grid_summary = json::array();
    for (const auto& c : cells) {
        grid_summary.push_back({{"phi", c.phi},
                                {"rho", c.rho},
                                {"rho_zero_extension", c.rho_zero_extension},
                                {"median_abs_drawdown", med_dd(c)},
                                {"median_multiplier", median(c.multipliers)},
                                {"stable_fraction", stable_fraction(c.stats)}});
    }
    summary["cells"] = grid_summary;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    summary["cells_schema"] = metrics::kMetricsSchema;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Performative feedback sweep over beta
// --------------------------------------------------------------------------

ExperimentReport run_performative(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::Performative;
    const std::uint64_t chash = config_hash(config);

    std::vector<double> betas =
        grid_axis(config, "beta", {0.0, 0.15, 0.3, 0.45, 0.6, 0.7});

    // Clip the axis just below the closed-form stability bound at the
    // baseline (phi, rho, a, lambda0).
    const double lam = kyle_lambda(config.params.phi, config.params.rho, config.params);
    const double bound_gain =
        config.params.phi * config.params.phi * config.params.rho * config.params.rho *
        config.params.a_ai * config.params.a_ai /
        (lam * lam + config.params.phi * config.params.a_ai * config.params.phi *
                         config.params.a_ai);
    const double beta_bound = 1.0 / (1.0 + bound_gain);
    betas.erase(std::remove_if(betas.begin(), betas.end(),
                               [&](double b) { return b >= beta_bound; }),
                betas.end());

    const int seeds = config.spec.seeds_per_cell;
    AnalyzeOptions options;

    struct BetaCell {
        double beta;
        std::vector<RunStats> stats;
    };
    std::vector<BetaCell> cells;
    for (const double beta : betas) {
        SimProto proto;
        proto.params = config.params;
        proto.params.beta = beta;
        // Adoption stays live: progressive self-referentiality builds as the
        // strategy mix and dependency keep evolving through the run.
        cells.push_back({beta, run_ensemble(proto, seeds, manifest, chash, options)});
    }

    report.cells.columns = {"beta", "seed", "unstable"};
    append_metrics_columns(report.cells.columns);
    report.cells.columns.insert(report.cells.columns.end(),
                                {"pi_early", "pi_late", "persist_early", "persist_late",
                                 "config_hash"});
    for (const auto& cell : cells) {
        for (int i = 0; i < seeds; ++i) {
            const auto& s = cell.stats[static_cast<std::size_t>(i)];
            std::vector<std::string> row = {
                d17(cell.beta), io::format_u64(run_seed(manifest.master_seed, i)),
                s.unstable ? "1" : "0"};
            for (auto& c : metrics_row(s.rec)) row.push_back(std::move(c));
            row.push_back(d17(s.pi_early));
            row.push_back(d17(s.pi_late));
            row.push_back(d17(s.persist_early));
            row.push_back(d17(s.persist_late));
            row.push_back(io::format_u64(chash));
            report.cells.add_row(std::move(row));
        }
    }

    const auto pi_med = [&](const BetaCell& c, bool late) {
        return median(collect(c.stats, [late](const RunStats& s) {
            return late ? s.pi_late : s.pi_early;
        }));
    };

    const BetaCell* cell_beta0 = nullptr;
    const BetaCell* cell_beta_mid = nullptr;
    for (const auto& c : cells) {
        if (std::abs(c.beta) < 1e-12) cell_beta0 = &c;
        if (std::abs(c.beta - 0.3) < 1e-9) cell_beta_mid = &c;
    }
    const BetaCell& cell_high = cells.back();

    std::vector<BandCheck> checks;
    if (cell_beta0) {
        const double instab = 1.0 - stable_fraction(cell_beta0->stats);
        const double pi0 = median(collect(cell_beta0->stats, [](const RunStats& s) {
            return std::abs(s.rec.performativity_index);
        }));
        checks.push_back({"beta0_instability", instab, "== 0", instab == 0.0});
        checks.push_back({"beta0_abs_pi_median", pi0, "< 0.05", pi0 < 0.05});
    }
    if (cell_beta_mid) {
        const double early = pi_med(*cell_beta_mid, false);
        const double late = pi_med(*cell_beta_mid, true);
        checks.push_back({"pi_late_minus_early_beta03", late - early, "> 0",
                          late > early});
    }
    {
        const double pe = median(collect(cell_high.stats, [](const RunStats& s) {
            return s.persist_early;
        }));
        const double pl = median(collect(cell_high.stats, [](const RunStats& s) {
            return s.persist_late;
        }));
        checks.push_back({"persistence_late_minus_early_high_beta", pl - pe, "> 0",
                          pl > pe});
    }

    std::ostringstream table;
    table << "Performative sweep (stability bound beta < " << fmt(beta_bound) << ")\n";
    table << "    beta   instab   pi_early   pi_late   persist_early   persist_late\n";
    json beta_rows = json::array();
    for (const auto& c : cells) {
        const double instab = 1.0 - stable_fraction(c.stats);
        const double pe = median(collect(c.stats, [](const RunStats& s) {
            return s.persist_early;
        }));
        const double pl = median(collect(c.stats, [](const RunStats& s) {
            return s.persist_late;
        }));
        table << "    " << fmt(c.beta, 3) << "   " << fmt(instab, 3) << "   "
              << fmt(pi_med(c, false)) << "   " << fmt(pi_med(c, true)) << "   "
              << fmt(pe) << "   " << fmt(pl) << "\n";
        beta_rows.push_back({{"beta", c.beta},
                             {"instability_frequency", instab},
                             {"pi_early", pi_med(c, false)},
                             {"pi_late", pi_med(c, true)},
                             {"persist_early", pe},
                             {"persist_late", pl}});
    }
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["beta_bound"] = beta_bound;
    summary["cells"] = beta_rows;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    summary["cells_schema"] = metrics::kMetricsSchema;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Interventions: paired-seed arm comparison
// --------------------------------------------------------------------------

ExperimentReport run_interventions(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::Interventions;
    const Bands bands = load_bands(config);
    const std::uint64_t chash = config_hash(config);
    const int seeds = config.spec.seeds_per_cell;

    struct Arm {
        std::string name;
        abm::Intervention intervention;
        std::vector<RunStats> stats;
    };
    std::vector<Arm> arms;
    const auto want = [&](const std::string& name) {
        return config.spec.arms.empty() ||
               std::find(config.spec.arms.begin(), config.spec.arms.end(), name) !=
                   config.spec.arms.end();
    };
    const auto& iv = config.spec.intervention;
    if (want("baseline"))
        arms.push_back({"baseline", {abm::InterventionKind::None, iv.rho_cap, iv.d_cap,
                                     iv.speed_k}});
    if (want("diversity-cap"))
        arms.push_back({"diversity-cap", {abm::InterventionKind::DiversityCap, iv.rho_cap,
                                          iv.d_cap, iv.speed_k}});
    if (want("speed-bump"))
        arms.push_back({"speed-bump", {abm::InterventionKind::SpeedBump, iv.rho_cap,
                                       iv.d_cap, iv.speed_k}});
    if (want("dependency-cap"))
        arms.push_back({"dependency-cap", {abm::InterventionKind::DependencyCap,
                                           iv.rho_cap, iv.d_cap, iv.speed_k}});
    if (want("combined"))
        arms.push_back({"combined", {abm::InterventionKind::Combined, iv.rho_cap,
                                     iv.d_cap, iv.speed_k}});

    AnalyzeOptions options;
    for (auto& arm : arms) {
        SimProto proto;
        proto.params = config.params;
        proto.intervention = arm.intervention;
        arm.stats = run_ensemble(proto, seeds, manifest, chash, options);
    }

    report.cells.columns = {"arm", "seed", "unstable"};
    append_metrics_columns(report.cells.columns);
    report.cells.columns.push_back("config_hash");
    for (const auto& arm : arms) {
        for (int i = 0; i < seeds; ++i) {
            const auto& s = arm.stats[static_cast<std::size_t>(i)];
            std::vector<std::string> row = {
                arm.name, io::format_u64(run_seed(manifest.master_seed, i)),
                s.unstable ? "1" : "0"};
            for (auto& c : metrics_row(s.rec)) row.push_back(std::move(c));
            row.push_back(io::format_u64(chash));
            report.cells.add_row(std::move(row));
        }
    }

    const Arm* baseline = nullptr;
    for (const auto& arm : arms)
        if (arm.name == "baseline") baseline = &arm;

    struct ArmSummary {
        std::string name;
        double vol_cut = kNaN;     // paired median of 1 - vol_arm/vol_base
        double cte95_gain = kNaN;  // paired median of cte95_arm - cte95_base (>0 better)
        int cte95_improved = 0;    // sign-test count of improved pairs
        int pairs = 0;
    };
    std::vector<ArmSummary> arm_summaries;
    for (const auto& arm : arms) {
        ArmSummary as;
        as.name = arm.name;
        if (baseline && &arm != baseline) {
            std::vector<double> cuts, gains;
            for (int i = 0; i < seeds; ++i) {
                const auto& a = arm.stats[static_cast<std::size_t>(i)];
                const auto& b = baseline->stats[static_cast<std::size_t>(i)];
                if (!a.has_metrics || !b.has_metrics) continue;
                cuts.push_back(1.0 - a.rec.ann_vol / b.rec.ann_vol);
                const double gain = a.rec.cte95 - b.rec.cte95; // less negative = better
                gains.push_back(gain);
                if (gain > 0.0) ++as.cte95_improved;
                ++as.pairs;
            }
            as.vol_cut = median(cuts);
            as.cte95_gain = median(gains);
        }
        arm_summaries.push_back(as);
    }

    const auto arm_summary = [&](const std::string& name) -> const ArmSummary* {
        for (const auto& as : arm_summaries)
            if (as.name == name) return &as;
        return nullptr;
    };

    const int critical = static_cast<int>(bands.get("interventions.sign_test_critical"));
    std::vector<BandCheck> checks;
    const ArmSummary* dep = arm_summary("dependency-cap");
    const ArmSummary* div = arm_summary("diversity-cap");
    const ArmSummary* speed = arm_summary("speed-bump");
    if (dep) {
        checks.push_back({"depcap_vol_cut", dep->vol_cut,
                          "in [" + fmt(bands.get("interventions.depcap_vol_cut_min")) +
                              ", " + fmt(bands.get("interventions.depcap_vol_cut_max")) +
                              "]",
                          dep->vol_cut >= bands.get("interventions.depcap_vol_cut_min") &&
                              dep->vol_cut <=
                                  bands.get("interventions.depcap_vol_cut_max")});
        checks.push_back({"depcap_cte95_sign_test",
                          static_cast<double>(dep->cte95_improved),
                          ">= " + std::to_string(critical) + " of " +
                              std::to_string(dep->pairs),
                          dep->cte95_improved >= critical});
    }
    if (speed) {
        checks.push_back({"speedbump_cte95_sign_test",
                          static_cast<double>(speed->cte95_improved),
                          "< " + std::to_string(critical) + " (no significant improvement)",
                          speed->cte95_improved < critical});
    }
    if (div && dep) {
        checks.push_back({"divcap_vol_cut", div->vol_cut, "> 0", div->vol_cut > 0.0});
        checks.push_back({"divcap_smaller_than_depcap", dep->vol_cut - div->vol_cut,
                          "> 0", div->vol_cut < dep->vol_cut});
    }

    std::ostringstream table;
    table << "Interventions (paired seeds, " << seeds << " per arm)\n";
    table << "    arm              ann_vol  vol_cut  cte95_gain  improved/pairs\n";
    json arm_rows = json::array();
    for (const auto& arm : arms) {
        const double vol = median(collect(arm.stats, [](const RunStats& s) {
            return s.rec.ann_vol;
        }));
        const ArmSummary* as = arm_summary(arm.name);
        table << "    " << arm.name;
        for (std::size_t pad = arm.name.size(); pad < 17; ++pad) table << ' ';
        table << fmt(vol, 3) << "    " << fmt(as->vol_cut, 3) << "    "
              << fmt(as->cte95_gain, 3) << "      " << as->cte95_improved << "/"
              << as->pairs << "\n";
        arm_rows.push_back({{"arm", arm.name},
                            {"ann_vol_median", vol},
                            {"vol_cut_paired_median", as->vol_cut},
                            {"cte95_gain_paired_median", as->cte95_gain},
                            {"cte95_improved_pairs", as->cte95_improved},
                            {"pairs", as->pairs},
                            {"stable_fraction", stable_fraction(arm.stats)}});
    }
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["arms"] = arm_rows;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    summary["cells_schema"] = metrics::kMetricsSchema;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Hysteresis: ramp career pressure up, hold, ramp down, measure asymmetry
// --------------------------------------------------------------------------

namespace {

std::vector<double> hysteresis_schedule(const ExperimentSpec& spec, int* release_start) {
    const int ramp = spec.hyst_ramp;
    const int hold = spec.hyst_hold;
    const int tail = spec.hyst_tail;
    std::vector<double> schedule;
    schedule.reserve(static_cast<std::size_t>(2 * ramp + hold + tail));
    for (int t = 0; t < ramp; ++t)
        schedule.push_back(spec.hyst_c_low + (spec.hyst_c_high - spec.hyst_c_low) *
                                                 static_cast<double>(t) / ramp);
    for (int t = 0; t < hold; ++t) schedule.push_back(spec.hyst_c_high);
    for (int t = 0; t < ramp; ++t)
        schedule.push_back(spec.hyst_c_high - (spec.hyst_c_high - spec.hyst_c_low) *
                                                  static_cast<double>(t) / ramp);
    for (int t = 0; t < tail; ++t) schedule.push_back(spec.hyst_c_low);
    *release_start = ramp + hold;
    return schedule;
}

struct HystOutcome {
    double ratio_median = kNaN;
    double sigma_growth_median = kNaN;
    double censored_fraction = 0.0;
    std::vector<RunStats> stats;
};

HystOutcome run_hysteresis_arm(const RunConfig& config, const RunManifest& manifest,
                               std::uint64_t chash, double kappa) {
    int release_start = 0;
    const auto schedule = hysteresis_schedule(config.spec, &release_start);

    SimProto proto;
    proto.params = config.params;
    proto.params.kappa = kappa;
    if (!config.is_explicit("phi")) proto.params.phi = 0.1;
    proto.params.n_periods = static_cast<int>(schedule.size());
    proto.career_schedule = schedule;

    AnalyzeOptions options;
    options.cross_threshold = config.spec.hyst_cross;
    options.release_start = release_start;

    HystOutcome out;
    out.stats = run_ensemble(proto, config.spec.seeds_per_cell, manifest, chash, options);

    std::vector<double> ratios, growth;
    int censored = 0;
    for (const auto& s : out.stats) {
        if (s.unstable || s.cross_forward < 0) continue;
        const int total = static_cast<int>(schedule.size());
        int backward = s.cross_backward >= 0 ? s.cross_backward - release_start
                                             : total - release_start;
        if (s.cross_backward < 0) ++censored;
        const double fwd = std::max(s.cross_forward, 1);
        ratios.push_back(static_cast<double>(backward) / fwd);
        growth.push_back(s.sigma_h_growth);
    }
    out.ratio_median = median(ratios);
    out.sigma_growth_median = median(growth);
    out.censored_fraction =
        ratios.empty() ? 0.0 : static_cast<double>(censored) / ratios.size();
    return out;
}

}  // namespace

ExperimentReport run_hysteresis(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::Hysteresis;
    const Bands bands = load_bands(config);
    const std::uint64_t chash = config_hash(config);

    const double kappa_main = config.params.kappa;
    const HystOutcome main_arm = run_hysteresis_arm(config, manifest, chash, kappa_main);
    const HystOutcome zero_arm = run_hysteresis_arm(config, manifest, chash, 0.0);

    int release_start = 0;
    const auto schedule = hysteresis_schedule(config.spec, &release_start);

    report.cells.columns = {"kappa",         "seed",          "unstable",
                            "cross_forward", "cross_backward", "ratio",
                            "sigma_h_growth", "terminal_phi",  "config_hash"};
    const auto emit = [&](const HystOutcome& arm, double kappa) {
        for (std::size_t i = 0; i < arm.stats.size(); ++i) {
            const auto& s = arm.stats[i];
            const int total = static_cast<int>(schedule.size());
            const double backward = s.cross_backward >= 0
                                        ? s.cross_backward - release_start
                                        : total - release_start;
            const double ratio =
                s.cross_forward > 0 ? backward / s.cross_forward : kNaN;
            report.cells.add_row({d17(kappa),
                                  io::format_u64(run_seed(manifest.master_seed, i)),
                                  s.unstable ? "1" : "0",
                                  std::to_string(s.cross_forward),
                                  std::to_string(s.cross_backward), d17(ratio),
                                  d17(s.sigma_h_growth), d17(s.terminal_phi),
                                  io::format_u64(chash)});
        }
    };
    emit(main_arm, kappa_main);
    emit(zero_arm, 0.0);

    const double revert_kappa0 = median(collect(
        zero_arm.stats, [](const RunStats& s) { return s.terminal_phi; }, false));
    const double locked_kappa = median(collect(
        main_arm.stats, [](const RunStats& s) { return s.terminal_phi; }, false));

    std::vector<BandCheck> checks;
    checks.push_back({"ratio_median_kappa", main_arm.ratio_median,
                      ">= " + fmt(bands.get("hysteresis.ratio_min")),
                      main_arm.ratio_median >= bands.get("hysteresis.ratio_min")});
    checks.push_back({"ratio_median_kappa0", zero_arm.ratio_median,
                      "<= " + fmt(bands.get("hysteresis.kappa0_ratio_max")),
                      zero_arm.ratio_median <= bands.get("hysteresis.kappa0_ratio_max")});
    checks.push_back({"terminal_phi_kappa0", revert_kappa0,
                      "<= " + fmt(bands.get("hysteresis.revert_phi_max")) +
                          " (full reversal)",
                      revert_kappa0 <= bands.get("hysteresis.revert_phi_max")});
    checks.push_back({"terminal_phi_kappa", locked_kappa,
                      ">= " + fmt(bands.get("hysteresis.locked_phi_min")) + " (locked in)",
                      locked_kappa >= bands.get("hysteresis.locked_phi_min")});
    checks.push_back({"sigma_h_growth_kappa", main_arm.sigma_growth_median, "> 1",
                      main_arm.sigma_growth_median > 1.0});

    std::ostringstream table;
    table << "Hysteresis protocol (ramp " << config.spec.hyst_ramp << ", hold "
          << config.spec.hyst_hold << ", tail " << config.spec.hyst_tail
          << ", crossing phi = " << fmt(config.spec.hyst_cross) << ")\n";
    table << "    kappa = " << fmt(kappa_main)
          << ": backward/forward ratio median = " << fmt(main_arm.ratio_median)
          << " (censored fraction " << fmt(main_arm.censored_fraction) << ")\n";
    table << "    kappa = 0: ratio median = " << fmt(zero_arm.ratio_median) << "\n";
    table << "    sigma_H(T)/sigma_H(0) median at kappa = " << fmt(kappa_main) << ": "
          << fmt(main_arm.sigma_growth_median) << "\n";
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["kappa"] = kappa_main;
    summary["ratio_median_kappa"] = main_arm.ratio_median;
    summary["ratio_median_kappa0"] = zero_arm.ratio_median;
    summary["censored_fraction_kappa"] = main_arm.censored_fraction;
    summary["sigma_h_growth_median"] = main_arm.sigma_growth_median;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Channel ablation table
// --------------------------------------------------------------------------

ExperimentReport run_ablation(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::Ablation;
    const Bands bands = load_bands(config);
    const std::uint64_t chash = config_hash(config);
    const int seeds = config.spec.seeds_per_cell;

    struct Arm {
        std::string name;
        double rho, beta, kappa;
        bool expect_multiplier, expect_common, expect_hysteresis;
    };
    const std::vector<Arm> arm_defs = {
        {"kyle", 0.0, 0.0, 0.0, false, false, false},
        {"+rho", config.params.rho, 0.0, 0.0, false, true, false},
        {"+rho+beta", config.params.rho, config.params.beta, 0.0, true, true, false},
        {"+rho+beta+kappa", config.params.rho, config.params.beta, config.params.kappa,
         true, true, true},
    };

    AnalyzeOptions options;

    report.cells.columns = {"arm", "role", "seed", "unstable"};
    append_metrics_columns(report.cells.columns);
    report.cells.columns.insert(report.cells.columns.end(),
                                {"cte95_gap", "common_share", "cross_forward",
                                 "cross_backward", "config_hash"});

    struct ArmResult {
        std::string name;
        double multiplier = kNaN;
        double common_share = kNaN;
        double hyst_ratio = kNaN;
        bool flag_multiplier = false, flag_common = false, flag_hysteresis = false;
        bool expected_multiplier = false, expected_common = false,
             expected_hysteresis = false;
    };
    std::vector<ArmResult> results;

    const auto emit_rows = [&](const std::string& arm, const std::string& role,
                               const std::vector<RunStats>& stats) {
        for (std::size_t i = 0; i < stats.size(); ++i) {
            const auto& s = stats[i];
            std::vector<std::string> row = {
                arm, role, io::format_u64(run_seed(manifest.master_seed, i)),
                s.unstable ? "1" : "0"};
            for (auto& c : metrics_row(s.rec)) row.push_back(std::move(c));
            row.push_back(d17(s.cte95_gap));
            row.push_back(d17(s.common_share));
            row.push_back(std::to_string(s.cross_forward));
            row.push_back(std::to_string(s.cross_backward));
            row.push_back(io::format_u64(chash));
            report.cells.add_row(std::move(row));
        }
    };

    for (const auto& def : arm_defs) {
        ModelParams arm_params = config.params;
        arm_params.rho = def.rho;
        arm_params.beta = def.beta;
        arm_params.kappa = def.kappa;

        // Main ensemble at pinned baseline adoption.
        SimProto main_proto;
        main_proto.params = arm_params;
        main_proto.freeze_adoption = true;
        const auto main_stats = run_ensemble(main_proto, seeds, manifest, chash, options);
        emit_rows(def.name, "main", main_stats);

        // phi = 0 benchmark, paired seeds.
        SimProto base_proto = main_proto;
        base_proto.params.phi = 0.0;
        const auto base_stats = run_ensemble(base_proto, seeds, manifest, chash, options);
        emit_rows(def.name, "base", base_stats);

        // Reduced hysteresis protocol with adoption dynamics on.
        RunConfig hyst_config = config;
        hyst_config.params = arm_params;
        hyst_config.spec.hyst_ramp = 250;
        hyst_config.spec.hyst_hold = 250;
        hyst_config.spec.hyst_tail = 600;
        const HystOutcome hyst =
            run_hysteresis_arm(hyst_config, manifest, chash, def.kappa);
        emit_rows(def.name, "hysteresis", hyst.stats);

        ArmResult res;
        res.name = def.name;
        std::vector<double> multipliers;
        for (int i = 0; i < seeds; ++i) {
            const auto& a = main_stats[static_cast<std::size_t>(i)];
            const auto& b = base_stats[static_cast<std::size_t>(i)];
            if (a.has_metrics && b.has_metrics)
                multipliers.push_back(a.cte95_gap / b.cte95_gap);
        }
        res.multiplier = median(multipliers);
        res.common_share = median(collect(main_stats, [](const RunStats& s) {
            return s.common_share;
        }));
        res.hyst_ratio = hyst.ratio_median;
        res.flag_multiplier = res.multiplier > bands.get("ablation.multiplier_threshold");
        res.flag_common = res.common_share > bands.get("ablation.common_share_threshold");
        res.flag_hysteresis =
            res.hyst_ratio > bands.get("ablation.hysteresis_ratio_threshold");
        res.expected_multiplier = def.expect_multiplier;
        res.expected_common = def.expect_common;
        res.expected_hysteresis = def.expect_hysteresis;
        results.push_back(res);
    }

    std::vector<BandCheck> checks;
    bool pattern_ok = true;
    for (const auto& res : results) {
        const bool ok = res.flag_multiplier == res.expected_multiplier &&
                        res.flag_common == res.expected_common &&
                        res.flag_hysteresis == res.expected_hysteresis;
        pattern_ok = pattern_ok && ok;
        checks.push_back({"pattern_" + res.name, ok ? 1.0 : 0.0,
                          "flags match (multiplier, common, hysteresis)", ok});
    }

    std::ostringstream table;
    table << "Channel ablation (" << seeds << " seeds per role)\n";
    table << "    arm               M>1?   common>0?   hysteresis?   (measured values)\n";
    json arm_rows = json::array();
    for (const auto& res : results) {
        table << "    " << res.name;
        for (std::size_t pad = res.name.size(); pad < 18; ++pad) table << ' ';
        table << (res.flag_multiplier ? "yes " : "no  ") << "   "
              << (res.flag_common ? "yes " : "no  ") << "       "
              << (res.flag_hysteresis ? "yes " : "no  ") << "         M=" << fmt(res.multiplier)
              << " share=" << fmt(res.common_share) << " ratio=" << fmt(res.hyst_ratio)
              << "\n";
        arm_rows.push_back({{"arm", res.name},
                            {"multiplier", res.multiplier},
                            {"common_share", res.common_share},
                            {"hysteresis_ratio", res.hyst_ratio},
                            {"flag_multiplier", res.flag_multiplier},
                            {"flag_common", res.flag_common},
                            {"flag_hysteresis", res.flag_hysteresis}});
    }
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["arms"] = arm_rows;
    summary["pattern_ok"] = pattern_ok;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    summary["cells_schema"] = metrics::kMetricsSchema;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Calm before the storm
// --------------------------------------------------------------------------

ExperimentReport run_calm_storm(const RunConfig& config, const RunManifest& manifest) {
    ExperimentReport report;
    report.kind = ExperimentKind::CalmStorm;
    const Bands bands = load_bands(config);
    const std::uint64_t chash = config_hash(config);
    const int seeds = config.spec.seeds_per_cell;

    struct Regime {
        std::string name;
        double phi, rho, beta;
        std::vector<RunStats> stats;
    };
    std::vector<Regime> regimes = {
        {"diversified", config.spec.cs_div_phi, config.spec.cs_div_rho,
         config.params.beta},
        {"monoculture", config.spec.cs_mono_phi, config.spec.cs_mono_rho,
         config.params.beta},
        {"diversified-beta0", config.spec.cs_div_phi, config.spec.cs_div_rho, 0.0},
        {"monoculture-beta0", config.spec.cs_mono_phi, config.spec.cs_mono_rho, 0.0},
    };

    AnalyzeOptions options;
    for (auto& regime : regimes) {
        SimProto proto;
        proto.params = config.params;
        proto.params.phi = regime.phi;
        proto.params.rho = regime.rho;
        proto.params.beta = regime.beta;
        proto.freeze_adoption = true;
        regime.stats = run_ensemble(proto, seeds, manifest, chash, options);
    }

    report.cells.columns = {"regime", "phi", "rho", "beta", "seed", "unstable"};
    append_metrics_columns(report.cells.columns);
    report.cells.columns.insert(report.cells.columns.end(),
                                {"tail_ratio99", "config_hash"});
    for (const auto& regime : regimes) {
        for (int i = 0; i < seeds; ++i) {
            const auto& s = regime.stats[static_cast<std::size_t>(i)];
            std::vector<std::string> row = {
                regime.name,
                d17(regime.phi),
                d17(regime.rho),
                d17(regime.beta),
                io::format_u64(run_seed(manifest.master_seed, i)),
                s.unstable ? "1" : "0"};
            for (auto& c : metrics_row(s.rec)) row.push_back(std::move(c));
            row.push_back(d17(s.tail_ratio99));
            row.push_back(io::format_u64(chash));
            report.cells.add_row(std::move(row));
        }
    }

    const auto regime_at = [&](const std::string& name) -> const Regime& {
        for (const auto& r : regimes)
            if (r.name == name) return r;
        throw Error(ErrorCode::Internal, "missing calm-storm regime");
    };
    const auto med = [&](const Regime& r, auto&& get) {
        return median(collect(r.stats, get));
    };
    const auto vol_of = [](const RunStats& s) { return s.rec.ann_vol; };
    const auto cte99_loss = [](const RunStats& s) { return -s.rec.cte99; };
    const auto tail_ratio = [](const RunStats& s) { return s.tail_ratio99; };

    const Regime& div = regime_at("diversified");
    const Regime& mono = regime_at("monoculture");
    const double vol_div = med(div, vol_of), vol_mono = med(mono, vol_of);
    const double cte_div = med(div, cte99_loss), cte_mono = med(mono, cte99_loss);
    const double ratio_div = med(div, tail_ratio), ratio_mono = med(mono, tail_ratio);
    const double ratio_div0 = med(regime_at("diversified-beta0"), tail_ratio);
    const double ratio_mono0 = med(regime_at("monoculture-beta0"), tail_ratio);

    std::vector<BandCheck> checks;
    checks.push_back({"tail_ratio_mono_minus_div", ratio_mono - ratio_div, "> 0",
                      ratio_mono > ratio_div});
    checks.push_back({"cte99_mono_minus_div", cte_mono - cte_div, "> 0 (strictly)",
                      cte_mono > cte_div});
    checks.push_back({"vol_mono_over_div", vol_mono / vol_div,
                      "<= " + fmt(bands.get("calm_storm.vol_slack")),
                      vol_mono <= bands.get("calm_storm.vol_slack") * vol_div});
    checks.push_back({"beta0_tail_ratio_gap", std::abs(ratio_mono0 - ratio_div0),
                      "< 0.25 (indistinguishable)",
                      std::abs(ratio_mono0 - ratio_div0) < 0.25});

    std::ostringstream table;
    table << "Calm before the storm (" << seeds << " paired seeds)\n";
    table << "    regime         ann_vol   cte99_loss   tail/unconditional\n";
    json rows = json::array();
    for (const auto& regime : regimes) {
        table << "    " << regime.name;
        for (std::size_t pad = regime.name.size(); pad < 15; ++pad) table << ' ';
        table << fmt(med(regime, vol_of), 3) << "     " << fmt(med(regime, cte99_loss), 3)
              << "      " << fmt(med(regime, tail_ratio), 3) << "\n";
        rows.push_back({{"regime", regime.name},
                        {"ann_vol_median", med(regime, vol_of)},
                        {"cte99_loss_median", med(regime, cte99_loss)},
                        {"tail_ratio_median", med(regime, tail_ratio)},
                        {"stable_fraction", stable_fraction(regime.stats)}});
    }
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["regimes"] = rows;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    summary["cells_schema"] = metrics::kMetricsSchema;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Closed-form bifurcation sweep
// --------------------------------------------------------------------------

ExperimentReport run_bifurcation(const RunConfig& config, const RunManifest& manifest) {
    (void)manifest;
    ExperimentReport report;
    report.kind = ExperimentKind::Bifurcation;
    const std::uint64_t chash = config_hash(config);
    const ExperimentSpec& spec = config.spec;

    std::vector<double> c_grid;
    for (int i = 0; i < spec.game_c_steps; ++i)
        c_grid.push_back(spec.game_c_min + (spec.game_c_max - spec.game_c_min) *
                                               static_cast<double>(i) /
                                               (spec.game_c_steps - 1));

    const auto result = analytic::bifurcation_sweep(
        spec.game, c_grid, config.params.kappa, spec.game_duration, spec.game_u_skill,
        spec.game_dbar);

    // Fixed column order: c, root count, root slots, then stability slots.
    constexpr int kMaxRoots = 5;
    report.cells.columns = {"c", "root_count"};
    for (int i = 1; i <= kMaxRoots; ++i)
        report.cells.columns.push_back("phi_" + std::to_string(i));
    for (int i = 1; i <= kMaxRoots; ++i)
        report.cells.columns.push_back("stable_" + std::to_string(i));
    report.cells.columns.push_back("config_hash");

    for (std::size_t i = 0; i < result.c_grid.size(); ++i) {
        const auto& pts = result.fixed_points_per_c[i];
        std::vector<std::string> row = {d17(result.c_grid[i]),
                                        std::to_string(pts.size())};
        for (int slot = 0; slot < kMaxRoots; ++slot)
            row.push_back(slot < static_cast<int>(pts.size())
                              ? d17(pts[static_cast<std::size_t>(slot)].phi)
                              : "nan");
        for (int slot = 0; slot < kMaxRoots; ++slot)
            row.push_back(slot < static_cast<int>(pts.size())
                              ? (pts[static_cast<std::size_t>(slot)].stable ? "1" : "0")
                              : "-1");
        row.push_back(io::format_u64(chash));
        report.cells.add_row(std::move(row));
    }

    std::vector<BandCheck> checks;
    checks.push_back({"fold_found", result.fold_found ? 1.0 : 0.0, "== 1",
                      result.fold_found});
    if (result.fold_found)
        checks.push_back({"hysteresis_gap", result.hysteresis_gap,
                          ">= 0 (kappa > 0: strictly)",
                          result.hysteresis_gap >= 0.0});

    std::ostringstream table;
    table << "Bifurcation sweep (c in [" << fmt(spec.game_c_min) << ", "
          << fmt(spec.game_c_max) << "], " << spec.game_c_steps << " steps)\n";
    if (result.fold_found) {
        table << "    c*  = " << fmt(result.c_star) << "\n";
        table << "    c** = " << fmt(result.c_star_star) << " (kappa = "
              << fmt(config.params.kappa) << ", T = " << fmt(spec.game_duration) << ")\n";
        table << "    gap = " << fmt(result.hysteresis_gap) << "\n";
    } else {
        table << "    no fold detected in range\n";
    }
    render_bands(table, checks, report.all_bands_pass);
    report.table_text = table.str();

    json summary;
    summary["experiment"] = experiment_name(report.kind);
    summary["fold_found"] = result.fold_found;
    summary["c_star"] = result.c_star;
    summary["c_star_star"] = result.c_star_star;
    summary["gap"] = result.hysteresis_gap;
    summary["kappa"] = config.params.kappa;
    summary["duration"] = spec.game_duration;
    summary["bands"] = band_json(checks);
    summary["config_hash"] = chash;
    report.summary_json = summary.dump(2);
    return report;
}

// --------------------------------------------------------------------------
// Dispatcher + writers
// --------------------------------------------------------------------------

ExperimentReport run_experiment(const RunConfig& config, const RunManifest& manifest) {
    RunConfig effective = config;
    effective.spec.kind = manifest.experiment;
    apply_horizon(effective, manifest.horizon);
    effective.params.validate();

    ExperimentReport report;
    switch (manifest.experiment) {
        case ExperimentKind::Monoculture: report = run_monoculture(effective, manifest); break;
        case ExperimentKind::TailGrid: report = run_tail_grid(effective, manifest); break;
        case ExperimentKind::Performative: report = run_performative(effective, manifest); break;
        case ExperimentKind::Interventions: report = run_interventions(effective, manifest); break;
        case ExperimentKind::Hysteresis: report = run_hysteresis(effective, manifest); break;
        case ExperimentKind::Ablation: report = run_ablation(effective, manifest); break;
        case ExperimentKind::CalmStorm: report = run_calm_storm(effective, manifest); break;
        case ExperimentKind::Bifurcation: report = run_bifurcation(effective, manifest); break;
    }

    const std::string dir =
        manifest.out_dir + "/" + experiment_name(manifest.experiment);
    io::ensure_directory(dir);
    io::write_csv(dir + "/cells.csv", report.cells);
    for (const auto& [stem, table] : report.extra_tables)
        io::write_csv(dir + "/" + stem + ".csv", table);
    io::write_text(dir + "/summary.json", report.summary_json + "\n");
    io::write_text(dir + "/report.txt", report.table_text);

    // Manifest copy; the only artifact carrying a timestamp.
    json mani;
    mani["experiment"] = experiment_name(manifest.experiment);
    mani["config_path"] = manifest.config_path;
    mani["master_seed"] = manifest.master_seed;
    mani["jobs"] = manifest.jobs;
    mani["horizon"] = manifest.horizon == Horizon::Full ? "full" : "reduced";
    mani["n_periods"] = effective.params.n_periods;
    mani["config_hash"] = config_hash(effective);
    mani["canonical_config"] = canonical_config(effective);
    mani["timestamp_utc"] = []() {
        char buf[32];
        const std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
        return std::string(buf);
    }();
    io::write_text(dir + "/manifest.json", mani.dump(2) + "\n");
    return report;
}

// --------------------------------------------------------------------------
// Closed-form battery (check-analytic)
// --------------------------------------------------------------------------

namespace {

ModelParams analytic_params() {
    ModelParams p;
    p.sigma_v = 1.0;
    p.sigma_u = 1.0;
    p.sigma_eta = 1.0;
    p.rho = 0.6;
    p.beta = 0.3;
    p.n_agents = 500;
    return p;
}

struct Battery {
    std::ostringstream& os;
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail) {
        os << (ok ? "[ok]   " : "[FAIL] ") << name << ": " << detail << "\n";
        if (!ok) ++failures;
    }
};

}  // namespace

int check_analytic(std::string& out) {
    std::ostringstream os;
    Battery bat{os};
    const ModelParams p = analytic_params();

    {
        const double m15 = analytic::multiplier_m(0.15);
        const double m35 = analytic::multiplier_m(0.35);
        bat.check("multiplier identities",
                  std::abs(m15 - 1.1765) < 5e-5 && std::abs(m35 - 1.5385) < 5e-5,
                  "M(0.15) = " + fmt(m15, 6) + ", M(0.35) = " + fmt(m35, 6));
    }
    {
        bool ok = true;
        for (int i = 0; i < 50; ++i) {
            const double phi = 0.02 + 0.96 * i / 49.0;
            const double r = analytic::coupling_r(phi, 0.6, 0.0, p);
            ok = ok && r == 0.0 && analytic::multiplier_m(r) == 1.0;
        }
        bat.check("beta = 0 nullification", ok, "r = 0 and M = 1 on 50-point phi grid");
    }
    {
        const double lam = kyle_lambda(1.0, 1.0, p);
        const double lam0 = kyle_lambda(0.0, 0.7, p);
        bat.check("kyle lambda closed form",
                  std::abs(lam - 0.5 / std::sqrt(2.0)) < 1e-12 &&
                      std::abs(lam0 - 0.5) < 1e-12,
                  "lambda(1,1) = " + fmt(lam, 6) + ", lambda(0,.) = " + fmt(lam0, 6));
    }
    {
        const double le = effective_lambda(0.7, 0.6, 0.3, p);
        const double r = analytic::coupling_r(0.7, 0.6, 0.3, p);
        bat.check("effective lambda and coupling",
                  std::abs(le - 0.461212) < 1e-4 && std::abs(r - 0.27320) < 1e-4 &&
                      r > 0.15 && r < 0.35,
                  "lambda' = " + fmt(le, 6) + ", r = " + fmt(r, 6));
    }
    {
        // Raw (undivided) second differences: the curvature estimate
        // Delta2/h^2 is also required to agree between h and h/2 within 1%.
        bool ok = true;
        const double h = 1e-4;
        double last_curv = 0.0;
        for (double phi = 0.05; phi <= 0.9 + 1e-12; phi += 0.05) {
            const auto r_at = [&](double x) { return analytic::coupling_r(x, 0.6, 0.3, p); };
            const double d2 = r_at(phi + h) - 2.0 * r_at(phi) + r_at(phi - h);
            const double d2_half =
                r_at(phi + h / 2) - 2.0 * r_at(phi) + r_at(phi - h / 2);
            const double curv = d2 / (h * h);
            const double curv_half = d2_half / (h * h / 4.0);
            ok = ok && d2 > 0.0 && std::abs(curv - curv_half) < 0.01 * std::abs(curv_half);
            last_curv = curv;
        }
        double frozen_max = 0.0;
        const double lam_frozen = effective_lambda(0.5, 0.6, 0.3, p);
        for (double phi = 0.05; phi <= 0.9 + 1e-12; phi += 0.05) {
            const auto r_at = [&](double x) { return x * 0.6 * 0.3 / lam_frozen; };
            const double d2 = r_at(phi + h) - 2.0 * r_at(phi) + r_at(phi - h);
            frozen_max = std::max(frozen_max, std::abs(d2));
        }
        bat.check("coupling convexity", ok && frozen_max < 1e-10,
                  "endogenous curvature > 0 (last = " + fmt(last_curv) +
                      "), frozen max |Delta2 r| = " + fmt(frozen_max));
    }
    {
        bool ok = true;
        double worst = 0.0;
        for (const double phi : {0.4, 0.5, 0.6})
            for (const double rho : {0.5, 0.6, 0.7})
                for (const double beta : {0.2, 0.3, 0.4}) {
                    const auto chk = analytic::excess_sensitivity(phi, rho, beta, p);
                    const double err =
                        std::abs(chk.finite_difference_lhs - chk.analytic_rhs);
                    worst = std::max(worst, err);
                    ok = ok && err < 1e-6;
                }
        bat.check("excess-sensitivity identity", ok,
                  "27 grid points, worst |LHS - RHS| = " + fmt(worst));
    }
    {
        const double h = 0.05;
        const auto m_at = [&](double phi, double rho, double beta) {
            return analytic::multiplier_m(analytic::coupling_r(phi, rho, beta, p));
        };
        double diff = 0.0;
        for (int i : {-1, 1})
            for (int j : {-1, 1})
                for (int k : {-1, 1})
                    diff += i * j * k *
                            m_at(0.5 + i * h, 0.5 + j * h, 0.2 + k * h);
        diff /= 8.0 * h * h * h;
        bat.check("multiplier cross-partial", diff > 0.0,
                  "discrete d3M/dphi drho dbeta = " + fmt(diff));
    }
    {
        const double r1 = analytic::rho_of_phi(0.5, [] {
            ModelParams q;
            q.rho0 = 0.2;
            q.rho_bar = 0.8;
            q.alpha_rho = 2.0;
            return q;
        }());
        const double b1 = analytic::beta_of_phi(0.5, [] {
            ModelParams q;
            q.beta_max = 0.4;
            q.delta_share = 0.5;
            return q;
        }());
        bat.check("endogenous channel maps",
                  std::abs(r1 - 0.579273) < 1e-6 && std::abs(b1 - 0.266667) < 1e-6,
                  "rho(0.5) = " + fmt(r1, 6) + ", beta(0.5) = " + fmt(b1, 6));
    }
    {
        // Curvature and elasticity: endogenous channels vs frozen at phi = 0.5.
        const double h = 1e-3;
        const double phi = 0.5;
        const auto r_endo = [&](double x) { return analytic::unified_coupling(x, p); };
        const double rho_fix = analytic::rho_of_phi(phi, p);
        const double beta_fix = analytic::beta_of_phi(phi, p);
        const auto r_exo = [&](double x) {
            return analytic::coupling_r(x, rho_fix, beta_fix, p);
        };
        const double d2_endo =
            (r_endo(phi + h) - 2.0 * r_endo(phi) + r_endo(phi - h)) / (h * h);
        const double d2_exo =
            (r_exo(phi + h) - 2.0 * r_exo(phi) + r_exo(phi - h)) / (h * h);
        const auto m_of = [&](double r) { return analytic::multiplier_m(r); };
        const double el_endo = (m_of(r_endo(phi + h)) - m_of(r_endo(phi - h))) /
                               (2.0 * h) * phi / m_of(r_endo(phi));
        const double el_exo = (m_of(r_exo(phi + h)) - m_of(r_exo(phi - h))) /
                              (2.0 * h) * phi / m_of(r_exo(phi));
        bat.check("channel inseparability", d2_endo > d2_exo && el_endo > el_exo,
                  "d2r endo = " + fmt(d2_endo) + " > exo = " + fmt(d2_exo) +
                      "; elasticity endo = " + fmt(el_endo) + " > exo = " + fmt(el_exo));
    }
    {
        const double m = analytic::stability_margin(1.0, 1.0, 0.6, 1.0, 0.5);
        bat.check("stability margin", std::abs(m - (-0.08)) < 1e-12,
                  "margin(1,1,0.6,1,0.5) = " + fmt(m, 6));
    }
    {
        ModelParams q = p;
        q.phi = 0.0;
        const double lv = analytic::limit_variance(0.6, q);
        bat.check("limit variance", std::abs(lv - 2.44) < 1e-12,
                  "sigma_v^2 + rho^2 sigma_eta^2/lambda'^2 = " + fmt(lv, 6));
    }
    {
        const double ami = analytic::ami_index(0.70, 0.60, 0.28);
        bat.check("AMI product", std::abs(ami - 0.1176) < 1e-12, "AMI = " + fmt(ami, 6));
    }
    {
        // Coarse bifurcation sweep: fold exists, kappa = 0 gap within a step,
        // gap increasing in kappa.
        analytic::AdoptionGameSpec game;
        game.grid_points = 2000;
        std::vector<double> c_grid;
        for (int i = 0; i <= 70; ++i) c_grid.push_back(i * 0.05);
        const auto r0 = analytic::bifurcation_sweep(game, c_grid, 0.0, 2520, 0.001);
        const auto r1 = analytic::bifurcation_sweep(game, c_grid, 0.01, 2520, 0.001);
        const auto r2 = analytic::bifurcation_sweep(game, c_grid, 0.04, 2520, 0.001);
        const bool ok = r0.fold_found && r1.fold_found && r2.fold_found &&
                        std::abs(r0.hysteresis_gap) <= 0.05 + 1e-12 &&
                        r1.hysteresis_gap > 0.0 &&
                        r2.hysteresis_gap > r1.hysteresis_gap;
        bat.check("bifurcation sweep", ok,
                  "c* = " + fmt(r0.c_star) + ", gap(0) = " + fmt(r0.hysteresis_gap) +
                      ", gap(0.01) = " + fmt(r1.hysteresis_gap) +
                      ", gap(0.04) = " + fmt(r2.hysteresis_gap));
    }

    out += os.str();
    return bat.failures;
}

}  // namespace sysrisk::experiments
