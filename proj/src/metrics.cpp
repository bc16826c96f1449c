#include "sysrisk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sysrisk/errors.hpp"

namespace sysrisk::metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

double cte_alpha(std::span<const double> values, double alpha, Tail tail) {
    if (alpha <= 0.0 || alpha >= 1.0) {
        std::ostringstream os;
        os << "alpha = " << alpha << " outside (0,1)";
        throw DomainError(os.str());
    }
    const std::size_t n = values.size();
    // ceil with a guard so exact multiples (e.g. 100 * 0.05) are not bumped
    // up by the binary representation of 1 - alpha.
    const double tail_size = static_cast<double>(n) * (1.0 - alpha);
    const std::size_t k = static_cast<std::size_t>(
        std::ceil(tail_size - 1e-9 * std::max(1.0, tail_size)));
    if (n == 0 || k == 0)
        throw InsufficientTail("no observations beyond the alpha quantile");

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    if (tail == Tail::Upper) {
        for (std::size_t i = n - k; i < n; ++i) sum += sorted[i];
    } else {
        for (std::size_t i = 0; i < k; ++i) sum += sorted[i];
    }
    return sum / static_cast<double>(k);
}

double empirical_multiplier(std::span<const double> gaps_hi,
                            std::span<const double> gaps_base, double alpha) {
    return cte_alpha(gaps_hi, alpha, Tail::Upper) /
           cte_alpha(gaps_base, alpha, Tail::Upper);
}

double max_drawdown(std::span<const double> prices) {
    double run_max = -std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (const double p : prices) {
        run_max = std::max(run_max, p);
        const double dd = (p - run_max) / run_max;
        worst = std::min(worst, dd);
    }
    return worst;
}

Moments return_moments(std::span<const double> returns, double periods_per_year) {
    if (returns.size() < 30)
        throw DomainError("return series shorter than 30 observations");

    const double n = static_cast<double>(returns.size());
    const double mean = mean_of(returns);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (const double r : returns) {
        const double d = r - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    // A constant series accumulates only rounding residue in m2; report it
    // as exactly degenerate.
    if (m2 <= 1e-28 * std::max(1.0, mean * mean)) m2 = m3 = m4 = 0.0;

    Moments m;
    const double var_unbiased = m2 * n / (n - 1.0);
    m.ann_vol = std::sqrt(var_unbiased * periods_per_year);
    if (m2 <= 0.0) {
        m.skew = kNaN;
        m.kurtosis = kNaN;
    } else {
        m.skew = m3 / std::pow(m2, 1.5);
        m.kurtosis = m4 / (m2 * m2);
    }
    return m;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return kNaN;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return kNaN;
    return sxy / std::sqrt(sxx * syy);
}

double autocorr(std::span<const double> series, Transform transform, int lag) {
    if (lag < 1 || series.size() < static_cast<std::size_t>(lag) + 3)
        throw DomainError("series too short for the requested lag");

    std::vector<double> t(series.size());
    switch (transform) {
        case Transform::None:
            std::copy(series.begin(), series.end(), t.begin());
            break;
        case Transform::Abs:
            std::transform(series.begin(), series.end(), t.begin(),
                           [](double v) { return std::abs(v); });
            break;
        case Transform::Square:
            std::transform(series.begin(), series.end(), t.begin(),
                           [](double v) { return v * v; });
            break;
    }
    const std::size_t n = t.size() - static_cast<std::size_t>(lag);
    return pearson(std::span<const double>(t.data(), n),
                   std::span<const double>(t.data() + lag, n));
}

double dispersion_ratio(const std::vector<std::vector<double>>& series_by_agent,
                        std::span<const int> group, std::span<const char> stress_mask) {
    if (group.size() < 2) throw EmptyRegime("dispersion group needs at least 2 agents");

    // Pooled variance of ordered pairwise differences. Per period the mean
    // over ordered pairs is exactly zero, so the pooled variance reduces to
    // sum_t [2k sum r^2 - 2 (sum r)^2] / [T k (k-1)].
    double sq_sum[2] = {0.0, 0.0}; // [calm, stress]
    std::size_t count[2] = {0, 0};
    const double k = static_cast<double>(group.size());

    const std::size_t periods = stress_mask.size();
    for (std::size_t t = 0; t < periods; ++t) {
        double s = 0.0, s2 = 0.0;
        for (const int a : group) {
            const double r = series_by_agent[static_cast<std::size_t>(a)][t];
            s += r;
            s2 += r * r;
        }
        const int regime = stress_mask[t] ? 1 : 0;
        sq_sum[regime] += 2.0 * k * s2 - 2.0 * s * s;
        count[regime] += static_cast<std::size_t>(k * (k - 1.0));
    }
    if (count[0] == 0 || count[1] == 0)
        throw EmptyRegime("stress or calm regime contains no periods");

    const double stress_var = sq_sum[1] / static_cast<double>(count[1]);
    const double calm_var = sq_sum[0] / static_cast<double>(count[0]);
    return stress_var / calm_var;
}

std::vector<double> performativity_index(std::span<const double> prices,
                                         std::span<const double> fundamentals,
                                         int window, double mu) {
    const std::size_t n = std::min(prices.size(), fundamentals.size());
    if (n < 2 || window < 3 || static_cast<std::size_t>(window) > n - 1) {
        std::ostringstream os;
        os << "window " << window << " does not fit a series of length " << n;
        throw WindowTooLong(os.str());
    }

    std::vector<double> gap(n - 1), innov(n - 1);
    for (std::size_t t = 0; t + 1 < n; ++t) {
        gap[t] = prices[t] - fundamentals[t];
        innov[t] = fundamentals[t + 1] - fundamentals[t] - mu;
    }

    std::vector<double> out;
    const std::size_t w = static_cast<std::size_t>(window);
    for (std::size_t end = w; end <= gap.size(); ++end) {
        out.push_back(pearson(std::span<const double>(gap.data() + end - w, w),
                              std::span<const double>(innov.data() + end - w, w)));
    }
    return out;
}

const char* const kMetricsSchema = "sysrisk.metrics.v1";

std::vector<const char*> metrics_columns() {
    return {"ann_vol",
            "skew",
            "excess_kurtosis",
            "max_drawdown",
            "cte95",
            "cte99",
            "abs_autocorr_lag1",
            "sq_autocorr_lag1",
            "empirical_multiplier",
            "dispersion_ratio_ai",
            "performativity_index",
            "vol_persistence"};
}

std::vector<double> metrics_values(const MetricsRecord& rec) {
    return {rec.ann_vol,
            rec.skew,
            rec.excess_kurtosis,
            rec.max_drawdown,
            rec.cte95,
            rec.cte99,
            rec.abs_autocorr_lag1,
            rec.sq_autocorr_lag1,
            rec.empirical_multiplier,
            rec.dispersion_ratio_ai,
            rec.performativity_index,
            rec.vol_persistence};
}

MetricsRecord basic_record(std::span<const double> returns,
                           std::span<const double> prices) {
    MetricsRecord rec;
    rec.empirical_multiplier = kNaN;
    rec.dispersion_ratio_ai = kNaN;
    rec.performativity_index = kNaN;

    const Moments m = return_moments(returns);
    rec.ann_vol = m.ann_vol;
    rec.skew = m.skew;
    rec.excess_kurtosis = m.kurtosis - 3.0;
    rec.max_drawdown = max_drawdown(prices);
    rec.cte95 = cte_alpha(returns, 0.95, Tail::Lower);
    rec.cte99 = cte_alpha(returns, 0.99, Tail::Lower);
    rec.abs_autocorr_lag1 = autocorr(returns, Transform::Abs, 1);
    rec.sq_autocorr_lag1 = autocorr(returns, Transform::Square, 1);

    // Volatility persistence on the late third of the run.
    const std::size_t third = returns.size() / 3;
    if (returns.size() - 2 * third > 8) {
        rec.vol_persistence = autocorr(
            std::span<const double>(returns.data() + 2 * third, returns.size() - 2 * third),
            Transform::Square, 1);
    } else {
        rec.vol_persistence = kNaN;
    }
    return rec;
}

}  // namespace sysrisk::metrics
