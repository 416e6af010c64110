#include <doctest.h>

#include <cmath>
#include <random>

#include "netval/errors.hpp"
#include "netval/two_firm.hpp"
#include "test_helpers.hpp"

using namespace netval;
using netval::testing::random_network;

namespace {

double inf_norm_diff(const ClaimVector& a, const ClaimVector& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
        m = std::max(m, std::abs(a.s[i] - b.s[i]));
        m = std::max(m, std::abs(a.r[i] - b.r[i]));
    }
    return m;
}

}  // namespace

TEST_SUITE("two_firm") {

TEST_CASE("both solvent: the symmetric debt network") {
    const FirmNetwork net = FirmNetwork::two_firm(1.0, 1.0, 0.0, 0.0, 0.5, 0.5);
    const TwoFirmKernel kernel(net);
    const auto p = kernel.evaluate(2.0, 2.0);
    CHECK(p.region == SuzukiRegion::SS);
    CHECK(p.s1 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p.s2 == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(p.r1 == 1.0);
    CHECK(p.r2 == 1.0);
}

TEST_CASE("both defaulted: recoveries circulate") {
    const FirmNetwork net = FirmNetwork::two_firm(1.0, 1.0, 0.0, 0.0, 0.5, 0.5);
    const TwoFirmKernel kernel(net);
    const auto p = kernel.evaluate(0.4, 0.4);
    CHECK(p.region == SuzukiRegion::DD);
    CHECK(p.s1 == 0.0);
    CHECK(p.s2 == 0.0);
    // r = (0.4 + 0.5 * 0.4) / (1 - 0.25)
    CHECK(p.r1 == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(p.r2 == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("mixed case with equity and debt holdings, worked by hand") {
    // d = (1, 1), ms12 = 0.2, ms21 = 0.3, md12 = 0.4, md21 = 0.1,
    // a = (2.0, 0.3): firm 2 defaults, firm 1 stays solvent.
    //   s1 = (2 - 1 + 0.4 (0.3 + 0.1)) / (1 - 0.4 * 0.3) = 1.16 / 0.88
    //   r2 = 0.3 + 0.1 + 0.3 s1 = 17.5 / 22
    const FirmNetwork net = FirmNetwork::two_firm(1.0, 1.0, 0.2, 0.3, 0.4, 0.1);
    const TwoFirmKernel kernel(net);
    const auto p = kernel.evaluate(2.0, 0.3);
    CHECK(p.region == SuzukiRegion::SD);
    CHECK(p.s1 == doctest::Approx(1.16 / 0.88).epsilon(1e-15));
    CHECK(p.s2 == 0.0);
    CHECK(p.r1 == 1.0);
    CHECK(p.r2 == doctest::Approx(17.5 / 22.0).epsilon(1e-15));
}

TEST_CASE("without holdings the closed form is the plain option payoff") {
    const FirmNetwork net = FirmNetwork::without_holdings({1.0, 2.0});
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> dist(0.01, 5.0);
    for (int rep = 0; rep < 200; ++rep) {
        const double a1 = dist(gen), a2 = dist(gen);
        const ClaimVector c = closed_form_payoff(std::vector<double>{a1, a2}, net);
        CHECK(c.s[0] == std::max(0.0, a1 - 1.0));
        CHECK(c.s[1] == std::max(0.0, a2 - 2.0));
        CHECK(c.r[0] == std::min(1.0, a1));
        CHECK(c.r[1] == std::min(2.0, a2));
    }
}

TEST_CASE("region classification: extremes and agreement of both routes") {
    const FirmNetwork net = FirmNetwork::two_firm(1.0, 1.0, 0.0, 0.0, 0.5, 0.5);
    CHECK(classify_region(std::vector<double>{10.0, 10.0}, net) == SuzukiRegion::SS);
    CHECK(classify_region(std::vector<double>{0.01, 0.01}, net) == SuzukiRegion::DD);

    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> dist(0.05, 10.0);
    for (int rep = 0; rep < 300; ++rep) {
        const FirmNetwork rnd = random_network(gen, 2);
        const std::vector<double> a{dist(gen), dist(gen)};
        const TwoFirmKernel kernel(rnd);
        CHECK(kernel.evaluate(a[0], a[1]).region == classify_region(a, rnd));
    }
}

TEST_CASE("closed form equals the iterative fixed point") {
    std::mt19937_64 gen(1234);
    std::uniform_real_distribution<double> asset(0.05, 10.0);
    double worst = 0.0;
    for (int rep = 0; rep < 2000; ++rep) {
        const FirmNetwork net = random_network(gen, 2);
        const std::vector<double> a{asset(gen), asset(gen)};
        const ClaimVector exact = closed_form_payoff(a, net);
        const ClaimVector iterated = solve_clearing(a, net, 1e-12).claims;
        worst = std::max(worst, inf_norm_diff(exact, iterated));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("payoff is continuous across region boundaries") {
    std::mt19937_64 gen(555);
    std::uniform_real_distribution<double> asset(0.05, 10.0);
    int boundaries_found = 0;
    for (int rep = 0; rep < 200 && boundaries_found < 60; ++rep) {
        const FirmNetwork net = random_network(gen, 2);
        const TwoFirmKernel kernel(net);
        const double a2 = asset(gen);
        double lo = 0.01, hi = 20.0;
        const SuzukiRegion rlo = kernel.evaluate(lo, a2).region;
        if (kernel.evaluate(hi, a2).region == rlo) continue;
        for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (kernel.evaluate(mid, a2).region == rlo ? lo : hi) = mid;
        }
        ++boundaries_found;
        const double b = 0.5 * (lo + hi);
        const double eps = 1e-11 * std::max(1.0, b);
        const auto below = kernel.evaluate(b - eps, a2);
        const auto above = kernel.evaluate(b + eps, a2);
        CHECK(std::abs(below.s1 - above.s1) <= 1e-9);
        CHECK(std::abs(below.s2 - above.s2) <= 1e-9);
        CHECK(std::abs(below.r1 - above.r1) <= 1e-9);
        CHECK(std::abs(below.r2 - above.r2) <= 1e-9);
    }
    CHECK(boundaries_found >= 40);
}

TEST_CASE("region denominators stay positive under the holding constraints") {
    std::mt19937_64 gen(888);
    for (int rep = 0; rep < 100; ++rep) {
        const FirmNetwork net = random_network(gen, 2);
        CHECK(1.0 - net.ms(0, 1) * net.ms(1, 0) > 0.0);
        CHECK(1.0 - net.md(0, 1) * net.ms(1, 0) > 0.0);
        CHECK(1.0 - net.ms(0, 1) * net.md(1, 0) > 0.0);
        CHECK(1.0 - net.md(0, 1) * net.md(1, 0) > 0.0);
    }
}

TEST_CASE("two-firm entry points reject other sizes") {
    const FirmNetwork net = FirmNetwork::without_holdings({1.0, 1.0, 1.0});
    const std::vector<double> a{1.0, 1.0, 1.0};
    CHECK_THROWS_AS(closed_form_payoff(a, net), NotTwoFirmsError);
    CHECK_THROWS_AS(classify_region(a, net), NotTwoFirmsError);
    CHECK_THROWS_AS(TwoFirmKernel{net}, NotTwoFirmsError);
}

}  // TEST_SUITE
