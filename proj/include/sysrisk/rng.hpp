#pragma once

#include <cmath>
#include <cstdint>

namespace sysrisk {

// Self-contained random source: xoshiro256** seeded through splitmix64, with
// inverse-CDF normal and Knuth Poisson draws. std::<distribution>s are
// implementation-defined, so rolling our own keeps every trajectory
// bit-reproducible across compilers and platforms.
//
// Streams: derive_stream(master, index) gives statistically independent
// engines for parallel runs; the mapping depends only on (master, index), so
// scheduling order can never change results.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static Rng derive_stream(std::uint64_t master, std::uint64_t stream_index) {
        std::uint64_t sm = master;
        std::uint64_t a = splitmix64(sm);
        // Fold the stream index in through a second scramble pass so adjacent
        // indices land far apart.
        std::uint64_t mix = stream_index * 0xda942042e4dd58b5ull + a;
        return Rng(splitmix64(mix));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1), safe to feed into inverse CDFs.
    double uniform_open() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() { return inverse_normal_cdf(uniform_open()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Knuth's product method; fine for the small intensities used here.
    int poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        const double limit = std::exp(-lambda);
        int k = 0;
        double prod = uniform_open();
        while (prod > limit) {
            ++k;
            prod *= uniform_open();
        }
        return k;
    }

    // Acklam's rational approximation with one Halley refinement step;
    // accurate to close to machine precision over (0,1).
    static double inverse_normal_cdf(double p) {
        static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                        -2.759285104469687e+02, 1.383577518672690e+02,
                                        -3.066479806614716e+01, 2.506628277459239e+00};
        static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                        -1.556989798598866e+02, 6.680131188771972e+01,
                                        -1.328068155288572e+01};
        static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                        -2.400758277161838e+00, -2.549732539343734e+00,
                                        4.374664141464968e+00,  2.938163982698783e+00};
        static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                        2.445134137142996e+00, 3.754408661907416e+00};
        constexpr double p_low = 0.02425;
        constexpr double p_high = 1.0 - p_low;

        double x;
        if (p < p_low) {
            const double q = std::sqrt(-2.0 * std::log(p));
            x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        } else if (p <= p_high) {
            const double q = p - 0.5;
            const double r = q * q;
            x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
                (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
        } else {
            const double q = std::sqrt(-2.0 * std::log(1.0 - p));
            x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
        }

        // Halley refinement against the exact CDF.
        static const double sqrt2 = std::sqrt(2.0);
        static const double sqrt_2pi = std::sqrt(8.0 * std::atan(1.0));
        const double e = 0.5 * std::erfc(-x / sqrt2) - p;
        const double u = e * sqrt_2pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
        return x;
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) {
        return (v << k) | (v >> (64 - k));
    }

    std::uint64_t state_[4]{};
};

}  // namespace sysrisk
