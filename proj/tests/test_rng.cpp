#include <doctest.h>

#include <cmath>
#include <set>

#include "netval/errors.hpp"
#include "netval/rng.hpp"

using namespace netval;

TEST_SUITE("rng") {

TEST_CASE("inverse normal cdf hits known quantiles") {
    CHECK(inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.84134474606854293) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(inverse_normal_cdf(0.0013498980316300933) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("inverse cdf round-trips the cdf across the range") {
    for (double x = -6.0; x <= 6.0; x += 0.037) {
        const double back = inverse_normal_cdf(normal_cdf(x));
        CHECK(std::abs(back - x) < 5e-9 * (1.0 + std::abs(x)));
    }
}

TEST_CASE("inverse cdf rejects endpoints") {
    CHECK_THROWS_AS(inverse_normal_cdf(0.0), PreconditionError);
    CHECK_THROWS_AS(inverse_normal_cdf(1.0), PreconditionError);
}

TEST_CASE("draws are pure functions of (seed, path, dim)") {
    CHECK(normal_variate(7, 123, 0) == normal_variate(7, 123, 0));
    CHECK(normal_variate(7, 123, 0) != normal_variate(7, 124, 0));
    CHECK(normal_variate(7, 123, 0) != normal_variate(7, 123, 1));
    CHECK(normal_variate(7, 123, 0) != normal_variate(8, 123, 0));
}

TEST_CASE("uniforms stay inside the open interval and spread out") {
    std::set<double> seen;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        const double u = uniform_variate(42, k, 0);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        seen.insert(u);
    }
    CHECK(seen.size() == 1000);
}

TEST_CASE("normal draws have the right first moments") {
    const std::size_t n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const double z = normal_variate(2024, k, 0);
        sum += z;
        sumsq += z * z;
    }
    const double mean = sum / double(n);
    const double var = sumsq / double(n) - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 6.0 / std::sqrt(double(n)));
}

TEST_CASE("philox block matches itself and differs across keys") {
    const auto a = philox4x32({1, 2, 3, 4}, {5, 6});
    const auto b = philox4x32({1, 2, 3, 4}, {5, 6});
    const auto c = philox4x32({1, 2, 3, 4}, {5, 7});
    CHECK(a == b);
    CHECK(a != c);
}

}  // TEST_SUITE
