#pragma once

#include <span>
#include <vector>

namespace sysrisk::metrics {

enum class Tail { Upper, Lower };

// Mean of the most extreme ceil(n*(1-alpha)) observations. Upper keeps the
// largest values (|p-v| tails), Lower the smallest (loss tails, losses
// negative by convention). Throws InsufficientTail when no sample lands in
// the tail and DomainError for alpha outside (0,1).
double cte_alpha(std::span<const double> values, double alpha, Tail tail = Tail::Upper);

// CTE_alpha ratio of two |p-v| gap series; the denominator run is the phi=0
// benchmark. Identical series give exactly 1.
double empirical_multiplier(std::span<const double> gaps_hi,
                            std::span<const double> gaps_base, double alpha);

// Most negative peak-to-trough fraction, min_t (p_t - runmax_t)/runmax_t; 0
// for a monotone increasing series. Prices must be positive.
double max_drawdown(std::span<const double> prices);

struct Moments {
    double ann_vol = 0.0;   // sample sd * sqrt(periods_per_year)
    double skew = 0.0;      // NaN for a constant series
    double kurtosis = 0.0;  // raw (normal = 3); NaN for a constant series
};
Moments return_moments(std::span<const double> returns, double periods_per_year = 252.0);

enum class Transform { None, Abs, Square };

// Pearson autocorrelation of the transformed series at the given lag; NaN
// when either slice is degenerate.
double autocorr(std::span<const double> series, Transform transform, int lag);

double pearson(std::span<const double> x, std::span<const double> y);

// Within-group dispersion ratio: variance of pairwise differences (over all
// ordered pairs of group members, pooled over periods) in stress periods
// divided by the same in calm periods. series_by_agent is indexed
// [agent][period]; group lists agent indices; stress_mask flags stress
// periods (calm = the complement). Throws EmptyRegime if either regime has
// no periods or the group has fewer than two members.
double dispersion_ratio(const std::vector<std::vector<double>>& series_by_agent,
                        std::span<const int> group, std::span<const char> stress_mask);

// Rolling-window correlation between the price-fundamental gap (p_t - v_t)
// and the next-period fundamental innovation net of drift
// (v_{t+1} - v_t - mu). One value per window end, starting at index
// window-1 of the usable range. Throws WindowTooLong when the series cannot
// fit a single window.
std::vector<double> performativity_index(std::span<const double> prices,
                                         std::span<const double> fundamentals,
                                         int window, double mu);

// One row of the metrics table; NaN where the context (base run, agent data)
// was not supplied. kurtosis is stored as excess (raw - 3).
struct MetricsRecord {
    double ann_vol = 0.0;
    double skew = 0.0;
    double excess_kurtosis = 0.0;
    double max_drawdown = 0.0;
    double cte95 = 0.0; // lower-tail CTE of returns; <= 0 (losses negative)
    double cte99 = 0.0;
    double abs_autocorr_lag1 = 0.0;
    double sq_autocorr_lag1 = 0.0;
    double empirical_multiplier = 0.0;
    double dispersion_ratio_ai = 0.0;
    double performativity_index = 0.0; // median of the PI series
    double vol_persistence = 0.0;      // squared-return autocorr, late third
};

// Column names, fixed order, shared by every cells CSV (schema below).
extern const char* const kMetricsSchema;
std::vector<const char*> metrics_columns();
std::vector<double> metrics_values(const MetricsRecord& rec);

// Moments, tails and autocorrelations of a return series (the fields that
// need no companion run).
MetricsRecord basic_record(std::span<const double> returns,
                           std::span<const double> prices);

}  // namespace sysrisk::metrics
