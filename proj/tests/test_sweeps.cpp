#include <doctest.h>

#include <cmath>

#include "netval/errors.hpp"
#include "netval/io_json.hpp"
#include "netval/sweeps.hpp"
#include "netval/two_firm.hpp"

using namespace netval;

namespace {

SweepConfig tiny_sweep() {
    SweepConfig cfg;
    cfg.m12d = {0.0, 0.6};
    cfg.m21d = {0.0, 0.6};
    cfg.sigma = {0.2};
    cfg.rho = {0.0};
    cfg.a_min = 0.4;
    cfg.a_max = 3.0;
    cfg.a_points = 5;
    cfg.n_paths = 8000;
    cfg.seed = 7;
    return cfg;
}

}  // namespace

TEST_SUITE("sweeps") {

TEST_CASE("spaced grids hit both endpoints") {
    const auto lin = spaced_grid(1.0, 3.0, 5, false);
    CHECK(lin.front() == doctest::Approx(1.0));
    CHECK(lin.back() == doctest::Approx(3.0));
    CHECK(lin[2] == doctest::Approx(2.0));
    const auto lg = spaced_grid(0.1, 10.0, 3, true);
    CHECK(lg[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(spaced_grid(1.0, 1.0, 4, false), PreconditionError);
    CHECK_THROWS_AS(spaced_grid(-1.0, 1.0, 4, true), PreconditionError);
}

TEST_CASE("figure presets carry the documented grids") {
    const SweepConfig fig1 = default_fig1_config();
    CHECK(fig1.m12d == std::vector<double>{0.0, 0.2, 0.4, 0.6, 0.8});
    CHECK(fig1.sigma == std::vector<double>{0.2, 0.4});
    CHECK(fig1.rho == std::vector<double>{-0.4, 0.0, 0.4, 0.8});
    CHECK(fig1.m12s == std::vector<double>{0.0});
    const SweepConfig fig10 = default_fig10_config();
    CHECK(fig10.m12s == std::vector<double>{0.1});
    CHECK(fig10.m21s == std::vector<double>{0.1});
}

TEST_CASE("a small sweep produces ordered, reproducible rows") {
    const SweepConfig cfg = tiny_sweep();
    const auto rows = run_fig_sweep(cfg);
    REQUIRE(rows.size() == 2 * 2 * 5);
    CHECK(rows[0].m12d == 0.0);
    CHECK(rows[0].m21d == 0.0);
    CHECK(rows[5].m21d == 0.6);
    CHECK(rows[10].m12d == 0.6);
    CHECK(rows[0].a_spot == doctest::Approx(0.4));
    CHECK(rows[4].a_spot == doctest::Approx(3.0));

    const auto again = run_fig_sweep(cfg);
    CHECK(fig_csv(rows) == fig_csv(again));

    // The no-holding curve at rho = 0 must sit near zero when defined.
    for (std::size_t i = 0; i < 5; ++i)
        if (rows[i].defined) CHECK(std::abs(rows[i].rho_s) < 0.06);
}

TEST_CASE("csv schema is pinned") {
    const auto rows = run_fig_sweep(tiny_sweep());
    const std::string csv = fig_csv(rows);
    CHECK(csv.rfind("m12d,m21d,m12s,m21s,sigma,rho_asset,a_spot,s1_price,s1_se,rho_s,rho_s_se,"
                    "sign_source\n", 0) == 0);
    // one header plus one line per row
    std::size_t lines = 0;
    for (char c : csv)
        if (c == '\n') ++lines;
    CHECK(lines == rows.size() + 1);
}

TEST_CASE("surface rows label regions exactly as the classifier does") {
    SurfaceConfig cfg;
    cfg.m12d = 0.5;
    cfg.m21d = 0.5;
    cfg.a_min = 0.1;
    cfg.a_max = 3.0;
    cfg.a_points = 6;
    cfg.n_paths = 3000;
    cfg.seed = 3;
    const SurfaceResult result = run_fig2_surface(cfg);
    REQUIRE(result.rows.size() == 36);

    const FirmNetwork net =
        FirmNetwork::two_firm(cfg.d1, cfg.d2, cfg.m12s, cfg.m21s, cfg.m12d, cfg.m21d);
    for (const SurfaceRow& row : result.rows) {
        CHECK(row.region == classify_region(std::vector<double>{row.a1, row.a2}, net));
    }

    // Symmetric network: the region grid mirrors under swapping the axes.
    for (const SurfaceRow& row : result.rows) {
        for (const SurfaceRow& other : result.rows)
            if (other.a1 == row.a2 && other.a2 == row.a1) {
                const SuzukiRegion mirrored =
                    row.region == SuzukiRegion::SD
                        ? SuzukiRegion::DS
                        : (row.region == SuzukiRegion::DS ? SuzukiRegion::SD : row.region);
                CHECK(other.region == mirrored);
                if (row.defined && other.defined) {
                    const double tol = 4.0 * (row.rho_s_se + other.rho_s_se) + 1e-12;
                    CHECK(std::abs(other.rho_s - row.rho_s) <= tol);
                }
            }
    }

    // Boundary points actually sit on a solvency flip.
    REQUIRE(!result.boundaries.empty());
    const TwoFirmKernel kernel(net);
    for (const BoundaryPoint& p : result.boundaries) {
        const double eps = 1e-9 * std::max(p.a1, p.a2);
        const auto lo = kernel.evaluate(p.firm == 1 ? p.a1 - eps : p.a1,
                                        p.firm == 2 ? p.a2 - eps : p.a2);
        const auto hi = kernel.evaluate(p.firm == 1 ? p.a1 + eps : p.a1,
                                        p.firm == 2 ? p.a2 + eps : p.a2);
        const bool lo_solv = p.firm == 1
                                 ? (lo.region == SuzukiRegion::SS || lo.region == SuzukiRegion::SD)
                                 : (lo.region == SuzukiRegion::SS || lo.region == SuzukiRegion::DS);
        const bool hi_solv = p.firm == 1
                                 ? (hi.region == SuzukiRegion::SS || hi.region == SuzukiRegion::SD)
                                 : (hi.region == SuzukiRegion::SS || hi.region == SuzukiRegion::DS);
        CHECK(!lo_solv);
        CHECK(hi_solv);
    }
}

TEST_CASE("every sweep row is re-derivable from its inputs") {
    const SweepConfig cfg = tiny_sweep();
    const auto rows = run_fig_sweep(cfg);
    for (std::size_t i : {std::size_t(3), std::size_t(12), std::size_t(18)}) {
        const FigRow& row = rows.at(i);
        const FirmNetwork net =
            FirmNetwork::two_firm(cfg.d1, cfg.d2, row.m12s, row.m21s, row.m12d, row.m21d);
        const MarketParams market =
            MarketParams::two_firm(cfg.rate, row.sigma, row.sigma, row.rho_asset, cfg.tau);
        const std::vector<double> spot{row.a_spot, row.a_spot};
        const CorrelationReport rep =
            try_equity_correlation(net, market, spot, cfg.n_paths, cfg.seed);
        CHECK(rep.defined == row.defined);
        CHECK(rep.equity[0] == row.s1_price);
        if (row.defined) CHECK(rep.rho_s == row.rho_s);
    }
}

TEST_CASE("swapping the holding fractions mirrors the correlation") {
    SweepConfig cfg;
    cfg.m12d = {0.2, 0.6};
    cfg.m21d = {0.2, 0.6};
    cfg.sigma = {0.2};
    cfg.rho = {0.0};
    cfg.a_min = 0.6;
    cfg.a_max = 1.5;
    cfg.a_points = 3;
    cfg.n_paths = 40000;
    cfg.seed = 13;
    const auto rows = run_fig_sweep(cfg);
    // With a1 = a2 and equal vols, relabelling the firms swaps m12d and
    // m21d, so those curves estimate the same correlation.
    for (const FigRow& row : rows) {
        if (!row.defined || row.m12d == row.m21d) continue;
        for (const FigRow& other : rows) {
            if (other.m12d == row.m21d && other.m21d == row.m12d &&
                other.a_spot == row.a_spot && other.defined) {
                CHECK(std::abs(other.rho_s - row.rho_s) <=
                      4.0 * (row.rho_s_se + other.rho_s_se) + 1e-12);
            }
        }
    }
}

TEST_CASE("equity cross-holdings preset also shows correlations rising as equity falls") {
    SweepConfig cfg = default_fig10_config();
    cfg.m12d = {0.8};
    cfg.m21d = {0.8};
    cfg.sigma = {0.2};
    cfg.rho = {0.0};
    cfg.a_min = 0.25;
    cfg.a_max = 4.0;
    cfg.a_points = 12;
    cfg.n_paths = 30000;
    cfg.seed = 17;
    const auto rows = run_fig_sweep(cfg);
    const CurveTrend trend = curve_trend(rows);
    CHECK(trend.rises_as_equity_falls);
    const FigRow* lowest = nullptr;
    for (const FigRow& row : rows)
        if (row.defined && (!lowest || row.s1_price < lowest->s1_price)) lowest = &row;
    REQUIRE(lowest != nullptr);
    CHECK(lowest->rho_s > 0.15);
}

TEST_CASE("the stressed joint-default corner carries the highest correlation") {
    SurfaceConfig cfg;
    cfg.m12d = 0.5;
    cfg.m21d = 0.5;
    cfg.a_min = 0.1;
    cfg.a_max = 4.0;
    cfg.a_points = 10;
    cfg.n_paths = 10000;
    cfg.seed = 29;
    const SurfaceResult res = run_fig2_surface(cfg);
    const SurfaceRow* best = nullptr;
    for (const SurfaceRow& row : res.rows)
        if (row.defined && (!best || row.rho_s > best->rho_s)) best = &row;
    REQUIRE(best != nullptr);
    CHECK(best->region == SuzukiRegion::DD);
}

TEST_CASE("a small dominance campaign reports no failures") {
    CampaignConfig cfg;
    cfg.n_configs = 25;
    cfg.n_paths = 20000;
    cfg.seed = 99;
    const CampaignResult result = run_theorem_campaign(cfg);
    CHECK(result.evaluated == 25);
    CHECK(result.defined + result.undefined == 25);
    CHECK(result.failures == 0);
    CHECK(result.defined >= 15);
    CHECK(result.min_margin >= -1e-12);
    for (const CampaignRecord& rec : result.records)
        if (rec.defined) {
            CHECK(std::isfinite(rec.margin));
            CHECK(rec.rho_s_se >= 0.0);
            CHECK(rec.pass);
        }

    const CampaignResult again = run_theorem_campaign(cfg);
    CHECK(campaign_csv(result) == campaign_csv(again));
}

TEST_CASE("sweep config json round trip with diagnostics") {
    const std::string text = R"({
      "network": {"m12d": [0.1, 0.2], "m21d": [0.3], "debt": [1.5, 2.0]},
      "market": {"sigma": [0.25], "rho": [0.1, -0.1], "rate": 0.01, "tau": 2.0},
      "assets": {"min": 0.5, "max": 4.0, "points": 7, "spacing": "linear"},
      "mc": {"paths": 1234, "seed": 77}
    })";
    const SweepConfig cfg = sweep_config_from_json(text, SweepConfig{});
    CHECK(cfg.m12d == std::vector<double>{0.1, 0.2});
    CHECK(cfg.m21d == std::vector<double>{0.3});
    CHECK(cfg.d1 == 1.5);
    CHECK(cfg.d2 == 2.0);
    CHECK(cfg.sigma == std::vector<double>{0.25});
    CHECK(cfg.rate == 0.01);
    CHECK(cfg.tau == 2.0);
    CHECK(cfg.a_points == 7);
    CHECK_FALSE(cfg.log_spacing);
    CHECK(cfg.n_paths == 1234);
    CHECK(cfg.seed == 77);

    CHECK_THROWS_WITH_AS(sweep_config_from_json(R"({"assets": {"spacing": "cubic"}})",
                                                SweepConfig{}),
                         doctest::Contains("spacing"), Error);
    CHECK_THROWS_AS(sweep_config_from_json("{not json", SweepConfig{}), Error);
}

TEST_CASE("scenario json parses networks and markets") {
    const std::string text = R"({
      "network": {"debt": [1.0, 1.0], "md": [[0.0, 0.5], [0.5, 0.0]]},
      "market": {"rate": 0.02, "sigma": [0.2, 0.3], "rho": -0.25, "tau": 1.0},
      "spot": [2.0, 2.0],
      "paths": 5000,
      "seed": 3
    })";
    const Scenario sc = scenario_from_json(text);
    CHECK(sc.network.md(0, 1) == 0.5);
    CHECK(sc.network.ms(0, 1) == 0.0);
    CHECK(sc.market.corr(0, 1) == -0.25);
    CHECK(sc.market.tau() == doctest::Approx(1.0));
    CHECK(sc.n_paths == 5000);

    const std::string shorthand = R"({
      "network": {"d": [1.0, 1.0], "m12d": 0.4, "m21d": 0.2},
      "market": {"rate": 0.0, "sigma": [0.2, 0.2], "rho": 0.0, "tau": 1.0},
      "spot": [1.0, 1.0]
    })";
    const Scenario sc2 = scenario_from_json(shorthand);
    CHECK(sc2.network.md(0, 1) == 0.4);
    CHECK(sc2.network.md(1, 0) == 0.2);

    CHECK_THROWS_WITH_AS(scenario_from_json(R"({"market": {}})"), doctest::Contains("network"),
                         Error);
}

TEST_CASE("network json serialization round trips") {
    const FirmNetwork net = FirmNetwork::two_firm(1.5, 0.7, 0.1, 0.0, 0.45, 0.3);
    const FirmNetwork back = network_from_json(network_to_json(net));
    CHECK(back.debt == net.debt);
    CHECK(back.ms.max_abs_diff(net.ms) == 0.0);
    CHECK(back.md.max_abs_diff(net.md) == 0.0);
}

TEST_CASE("metadata sidecars carry the run parameters and curve trends") {
    const SweepConfig cfg = tiny_sweep();
    const auto rows = run_fig_sweep(cfg);
    const std::string meta = fig_metadata_json(cfg, rows, "netval-fig1-v1", 0.25);
    CHECK(meta.find("netval-fig1-v1") != std::string::npos);
    CHECK(meta.find("curve_trends") != std::string::npos);
    CHECK(meta.find("\"seed\": 7") != std::string::npos);
}

}  // TEST_SUITE
