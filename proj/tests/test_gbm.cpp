#include <doctest.h>

#include <cmath>
#include <random>

#include "netval/errors.hpp"
#include "netval/gbm.hpp"
#include "netval/rng.hpp"

using namespace netval;

TEST_SUITE("gbm") {

TEST_CASE("cholesky: identity, the 2x2 hand case, and rank deficiency") {
    CHECK(cholesky(Matrix::identity(3)).max_abs_diff(Matrix::identity(3)) == 0.0);

    // vols (0.2, 0.4), correlation 0.5
    const Matrix cov{{0.04, 0.04}, {0.04, 0.16}};
    const Matrix l = cholesky(cov);
    CHECK(l(0, 0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(l(0, 1) == 0.0);
    CHECK(l(1, 0) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(l(1, 1) == doctest::Approx(0.2 * std::sqrt(3.0)).epsilon(1e-15));

    // comonotonic assets: a zero pivot, not an error
    const Matrix ones{{1.0, 1.0}, {1.0, 1.0}};
    const Matrix lc = cholesky(ones);
    CHECK(lc(1, 1) == 0.0);
    CHECK((lc * lc.transposed()).max_abs_diff(ones) < 1e-15);
}

TEST_CASE("cholesky recovers the correlation from its coefficients") {
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> rho_dist(-0.99, 0.99);
    for (int rep = 0; rep < 50; ++rep) {
        const double rho = rho_dist(gen);
        const Matrix l = cholesky(Matrix{{1.0, rho}, {rho, 1.0}});
        const double back = l(1, 0) / std::sqrt(l(1, 0) * l(1, 0) + l(1, 1) * l(1, 1));
        CHECK(back == doctest::Approx(rho).epsilon(1e-12));
    }
}

TEST_CASE("cholesky reconstructs random PSD matrices") {
    std::mt19937_64 gen(10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 2 + rep % 5;
        Matrix b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) b(i, j) = u(gen);
        const Matrix psd = b * b.transposed();
        const Matrix l = cholesky(psd);
        CHECK((l * l.transposed()).max_abs_diff(psd) <= 1e-12);
    }
}

TEST_CASE("cholesky rejects asymmetric and indefinite inputs") {
    CHECK_THROWS_AS(cholesky(Matrix{{1.0, 0.2}, {0.3, 1.0}}), NotSymmetricError);
    CHECK_THROWS_AS(cholesky(Matrix{{1.0, 1.5}, {1.5, 1.0}}), NotPsdError);
}

TEST_CASE("market validation") {
    CHECK_NOTHROW(require_valid(MarketParams::two_firm(0.02, 0.2, 0.3, 0.5, 1.0)));
    CHECK_THROWS_AS(require_valid(MarketParams::two_firm(0.02, -0.2, 0.3, 0.5, 1.0)),
                    PreconditionError);
    CHECK_THROWS_AS(require_valid(MarketParams::two_firm(0.02, 0.2, 0.3, 0.5, -1.0)),
                    PreconditionError);
    CHECK_THROWS_AS(require_valid(MarketParams::two_firm(0.02, 0.2, 0.3, 1.5, 1.0)),
                    PreconditionError);
    MarketParams asym = MarketParams::two_firm(0.0, 0.2, 0.2, 0.5, 1.0);
    asym.corr(0, 1) = 0.4;
    CHECK_THROWS_AS(require_valid(asym), PreconditionError);
}

TEST_CASE("zero draw gives the pure drift path") {
    const MarketParams params = MarketParams::two_firm(0.03, 0.2, 0.4, 0.5, 2.0);
    const std::vector<double> spot{1.0, 3.0};
    const std::vector<double> z{0.0, 0.0};
    const std::vector<double> a_T = sample_terminal_assets(params, spot, z);
    CHECK(a_T[0] == doctest::Approx(1.0 * std::exp((0.03 - 0.02) * 2.0)).epsilon(1e-15));
    CHECK(a_T[1] == doctest::Approx(3.0 * std::exp((0.03 - 0.08) * 2.0)).epsilon(1e-15));
}

TEST_CASE("vanishing volatility gives deterministic growth") {
    const MarketParams params = MarketParams::single(0.05, 1e-12, 1.0);
    const std::vector<double> spot{2.0};
    const std::vector<double> z{1.7};
    const std::vector<double> a_T = sample_terminal_assets(params, spot, z);
    CHECK(a_T[0] == doctest::Approx(2.0 * std::exp(0.05)).epsilon(1e-10));
}

TEST_CASE("discounted assets are a martingale") {
    const MarketParams params = MarketParams::two_firm(0.04, 0.2, 0.4, 0.3, 1.0);
    const std::vector<double> spot{1.0, 1.0};
    const TerminalSampler sampler(params, spot);
    const std::size_t n = 1000000;
    double sum[2] = {}, sumsq[2] = {};
    double z[2], a_T[2];
    for (std::uint64_t k = 0; k < n; ++k) {
        z[0] = normal_variate(31, k, 0);
        z[1] = normal_variate(31, k, 1);
        sampler.sample(z, a_T);
        for (int i = 0; i < 2; ++i) {
            sum[i] += a_T[i];
            sumsq[i] += a_T[i] * a_T[i];
        }
        CHECK(a_T[0] > 0.0);
        CHECK(a_T[1] > 0.0);
    }
    const double target = std::exp(0.04);
    for (int i = 0; i < 2; ++i) {
        const double mean = sum[i] / double(n);
        const double sd = std::sqrt((sumsq[i] / double(n) - mean * mean) / double(n));
        CHECK(std::abs(mean - target) < 3.0 * sd);
    }
}

TEST_CASE("log growth matches the exact terminal law") {
    const double rate = 0.01, s1 = 0.25, s2 = 0.5, rho = -0.6, tau = 2.0;
    const MarketParams params = MarketParams::two_firm(rate, s1, s2, rho, tau);
    const std::vector<double> spot{1.4, 0.7};
    const TerminalSampler sampler(params, spot);
    const std::size_t n = 400000;
    double mean[2] = {}, cov[3] = {};
    double z[2], a_T[2];
    std::vector<double> lg1(n), lg2(n);
    for (std::uint64_t k = 0; k < n; ++k) {
        z[0] = normal_variate(77, k, 0);
        z[1] = normal_variate(77, k, 1);
        sampler.sample(z, a_T);
        lg1[k] = std::log(a_T[0] / spot[0]);
        lg2[k] = std::log(a_T[1] / spot[1]);
        mean[0] += lg1[k];
        mean[1] += lg2[k];
    }
    mean[0] /= double(n);
    mean[1] /= double(n);
    for (std::size_t k = 0; k < n; ++k) {
        cov[0] += (lg1[k] - mean[0]) * (lg1[k] - mean[0]);
        cov[1] += (lg1[k] - mean[0]) * (lg2[k] - mean[1]);
        cov[2] += (lg2[k] - mean[1]) * (lg2[k] - mean[1]);
    }
    for (double& c : cov) c /= double(n - 1);

    const double tol = 4.0 / std::sqrt(double(n));
    CHECK(std::abs(mean[0] - (rate - 0.5 * s1 * s1) * tau) < tol * s1 * std::sqrt(tau));
    CHECK(std::abs(mean[1] - (rate - 0.5 * s2 * s2) * tau) < tol * s2 * std::sqrt(tau));
    CHECK(std::abs(cov[0] - s1 * s1 * tau) < 2.0 * tol * s1 * s1 * tau);
    CHECK(std::abs(cov[2] - s2 * s2 * tau) < 2.0 * tol * s2 * s2 * tau);
    CHECK(std::abs(cov[1] - rho * s1 * s2 * tau) < 2.0 * tol * s1 * s2 * tau);
}

TEST_CASE("asset vol factor factors the covariance") {
    const MarketParams params = MarketParams::two_firm(0.0, 0.3, 0.7, 0.25, 1.0);
    const Matrix l = asset_vol_factor(params);
    CHECK((l * l.transposed()).max_abs_diff(asset_covariance(params)) < 1e-15);
}

}  // TEST_SUITE
