#include <cmath>
#include <doctest.h>

#include "sysrisk/rng.hpp"

using sysrisk::Rng;

TEST_CASE("inverse normal CDF hits reference quantiles") {
    CHECK(std::abs(Rng::inverse_normal_cdf(0.5)) < 1e-12);
    CHECK(Rng::inverse_normal_cdf(0.975) == doctest::Approx(1.959964).epsilon(1e-5));
    CHECK(Rng::inverse_normal_cdf(0.99) == doctest::Approx(2.326348).epsilon(1e-5));
    CHECK(Rng::inverse_normal_cdf(0.0013498980316301) ==
          doctest::Approx(-3.0).epsilon(1e-6));
}

TEST_CASE("normal draws match first and second moments") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum2 += z * z;
    }
    CHECK(sum / n == doctest::Approx(0.0).epsilon(0.01));
    CHECK(sum2 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("poisson mean matches intensity") {
    Rng rng(11);
    const int n = 200000;
    long total = 0;
    for (int i = 0; i < n; ++i) total += rng.poisson(0.016);
    const double mean = static_cast<double>(total) / n;
    // 3 sigma band for the sample mean of Poisson(0.016).
    const double sd = std::sqrt(0.016 / n);
    CHECK(std::abs(mean - 0.016) < 3.0 * sd + 1e-12);
    CHECK(rng.poisson(0.0) == 0);
}

TEST_CASE("streams are reproducible and stream-index sensitive") {
    Rng a = Rng::derive_stream(42, 3);
    Rng b = Rng::derive_stream(42, 3);
    Rng c = Rng::derive_stream(42, 4);
    bool identical = true, different = false;
    for (int i = 0; i < 64; ++i) {
        const auto x = a.next_u64();
        identical = identical && x == b.next_u64();
        different = different || x != c.next_u64();
    }
    CHECK(identical);
    CHECK(different);
}
