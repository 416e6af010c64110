#include "netval/sweeps.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "netval/errors.hpp"
#include "netval/gbm.hpp"
#include "netval/rng.hpp"

namespace netval {

std::vector<double> spaced_grid(double lo, double hi, std::size_t points, bool log_spacing) {
    if (!(lo < hi) || points < 2) throw PreconditionError("spaced_grid: need lo < hi and >= 2 points");
    if (log_spacing && !(lo > 0.0)) throw PreconditionError("spaced_grid: log spacing needs lo > 0");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double w = double(i) / double(points - 1);
        grid[i] = log_spacing ? lo * std::pow(hi / lo, w) : lo + w * (hi - lo);
    }
    return grid;
}

SweepConfig default_fig1_config() {
    SweepConfig cfg;
    cfg.m12d = {0.0, 0.2, 0.4, 0.6, 0.8};
    cfg.m21d = {0.0, 0.2, 0.4, 0.6, 0.8};
    cfg.m12s = {0.0};
    cfg.m21s = {0.0};
    cfg.sigma = {0.2, 0.4};
    cfg.rho = {-0.4, 0.0, 0.4, 0.8};
    return cfg;
}

SweepConfig default_fig10_config() {
    SweepConfig cfg = default_fig1_config();
    cfg.m12s = {0.1};
    cfg.m21s = {0.1};
    return cfg;
}

std::vector<FigRow> run_fig_sweep(const SweepConfig& config) {
    const std::vector<double> spots =
        spaced_grid(config.a_min, config.a_max, config.a_points, config.log_spacing);
    std::vector<FigRow> rows;
    rows.reserve(config.m12d.size() * config.m21d.size() * config.m12s.size() *
                 config.m21s.size() * config.sigma.size() * config.rho.size() * spots.size());

    for (double m12d : config.m12d)
        for (double m21d : config.m21d)
            for (double m12s : config.m12s)
                for (double m21s : config.m21s) {
                    const FirmNetwork net =
                        FirmNetwork::two_firm(config.d1, config.d2, m12s, m21s, m12d, m21d);
                    for (double sigma : config.sigma)
                        for (double rho : config.rho) {
                            const MarketParams market = MarketParams::two_firm(
                                config.rate, sigma, sigma, rho, config.tau);
                            for (double a : spots) {
                                const double spot[2] = {a, a};
                                const CorrelationReport rep = try_equity_correlation(
                                    net, market, spot, config.n_paths, config.seed);
                                FigRow row;
                                row.m12d = m12d;
                                row.m21d = m21d;
                                row.m12s = m12s;
                                row.m21s = m21s;
                                row.sigma = sigma;
                                row.rho_asset = rho;
                                row.a_spot = a;
                                row.s1_price = rep.equity[0];
                                row.s1_se = rep.equity_se[0];
                                row.defined = rep.defined;
                                if (rep.defined) {
                                    row.rho_s = rep.rho_s;
                                    row.rho_s_se = rep.rho_s_se;
                                    row.sign_source = rep.sign_source;
                                } else {
                                    row.rho_s = std::numeric_limits<double>::quiet_NaN();
                                    row.rho_s_se = std::numeric_limits<double>::quiet_NaN();
                                    row.sign_source = 0;
                                }
                                rows.push_back(row);
                            }
                        }
                }
    return rows;
}

CurveTrend curve_trend(const std::vector<FigRow>& curve) {
    std::vector<const FigRow*> defined;
    for (const FigRow& row : curve)
        if (row.defined) defined.push_back(&row);
    std::sort(defined.begin(), defined.end(),
              [](const FigRow* a, const FigRow* b) { return a->s1_price < b->s1_price; });
    CurveTrend trend;
    for (std::size_t i = 0; i + 1 < defined.size(); ++i) {
        // Ascending in equity, so rho_s should not rise from i to i+1.
        const double slack = defined[i]->rho_s_se + defined[i + 1]->rho_s_se;
        const double violation = defined[i + 1]->rho_s - defined[i]->rho_s - slack;
        if (violation > 0.0) {
            trend.rises_as_equity_falls = false;
            trend.worst_violation = std::max(trend.worst_violation, violation);
        }
    }
    return trend;
}

namespace {

bool firm_solvent(const TwoFirmKernel& kernel, int firm, double a1, double a2) {
    const SuzukiRegion region = kernel.evaluate(a1, a2).region;
    if (firm == 1) return region == SuzukiRegion::SS || region == SuzukiRegion::SD;
    return region == SuzukiRegion::SS || region == SuzukiRegion::DS;
}

}  // namespace

SurfaceResult run_fig2_surface(const SurfaceConfig& config) {
    const FirmNetwork net = FirmNetwork::two_firm(config.d1, config.d2, config.m12s,
                                                  config.m21s, config.m12d, config.m21d);
    const MarketParams market{config.rate,
                              {config.sigma1, config.sigma2},
                              Matrix{{1.0, config.rho}, {config.rho, 1.0}},
                              0.0,
                              config.tau};
    const TwoFirmKernel kernel(net);
    const std::vector<double> grid =
        spaced_grid(config.a_min, config.a_max, config.a_points, config.log_spacing);

    SurfaceResult result;
    result.rows.reserve(grid.size() * grid.size());
    for (double a1 : grid)
        for (double a2 : grid) {
            const double spot[2] = {a1, a2};
            const CorrelationReport rep =
                try_equity_correlation(net, market, spot, config.n_paths, config.seed);
            SurfaceRow row;
            row.a1 = a1;
            row.a2 = a2;
            row.region = kernel.evaluate(a1, a2).region;
            row.defined = rep.defined;
            if (rep.defined) {
                row.rho_s = rep.rho_s;
                row.rho_s_se = rep.rho_s_se;
                row.sign_source = rep.sign_source;
            } else {
                row.rho_s = std::numeric_limits<double>::quiet_NaN();
                row.rho_s_se = std::numeric_limits<double>::quiet_NaN();
                row.sign_source = 0;
            }
            result.rows.push_back(row);
        }

    // Default boundaries: along each grid line, bisect for the asset level
    // at which the firm's solvency flips. Solvency is monotone in either
    // asset (the fixed point increases in a), so bisection is exact.
    const double lo = config.a_min, hi = config.a_max;
    for (int firm : {1, 2}) {
        for (double fixed : grid) {
            // firm 1's boundary is crossed varying a1 at fixed a2; firm 2's
            // varying a2 at fixed a1.
            auto solvent_at = [&](double moving) {
                return firm == 1 ? firm_solvent(kernel, 1, moving, fixed)
                                 : firm_solvent(kernel, 2, fixed, moving);
            };
            if (solvent_at(lo) == solvent_at(hi)) continue;
            double a = lo, b = hi;
            const bool at_lo = solvent_at(lo);
            for (int iter = 0; iter < 80; ++iter) {
                const double mid = 0.5 * (a + b);
                (solvent_at(mid) == at_lo ? a : b) = mid;
            }
            const double cross = 0.5 * (a + b);
            result.boundaries.push_back(firm == 1 ? BoundaryPoint{1, cross, fixed}
                                                  : BoundaryPoint{2, fixed, cross});
        }
    }
    return result;
}

CampaignResult run_theorem_campaign(const CampaignConfig& config) {
    if (config.n_configs < 1) throw PreconditionError("campaign: need at least one configuration");
    const auto start = std::chrono::steady_clock::now();

    // Configuration draws come from a seed-space separate from the path
    // draws; every configuration shares the same path seed (common random
    // numbers across the whole campaign).
    constexpr std::uint64_t kConfigTag = 0x9E3779B97F4A7C15ull;
    auto draw = [&](std::size_t i, std::uint32_t dim, double lo, double hi) {
        return lo + (hi - lo) * uniform_variate(config.seed ^ kConfigTag, i, dim);
    };

    CampaignResult result;
    result.records.reserve(config.n_configs);
    result.min_margin = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < config.n_configs; ++i) {
        CampaignRecord rec;
        rec.a1 = draw(i, 0, 0.05, 10.0);
        rec.a2 = draw(i, 1, 0.05, 10.0);
        rec.d1 = draw(i, 2, 0.1, 5.0);
        rec.d2 = draw(i, 3, 0.1, 5.0);
        rec.ms12 = draw(i, 4, 0.0, 0.9);
        rec.ms21 = draw(i, 5, 0.0, 0.9);
        rec.md12 = draw(i, 6, 0.0, 0.9);
        rec.md21 = draw(i, 7, 0.0, 0.9);
        rec.rho = draw(i, 8, -0.95, 0.95);
        rec.sigma1 = draw(i, 9, 0.05, 0.8);
        rec.sigma2 = draw(i, 10, 0.05, 0.8);
        rec.rate = draw(i, 11, 0.0, 0.05);

        const FirmNetwork net =
            FirmNetwork::two_firm(rec.d1, rec.d2, rec.ms12, rec.ms21, rec.md12, rec.md21);
        const MarketParams market =
            MarketParams::two_firm(rec.rate, rec.sigma1, rec.sigma2, rec.rho, 1.0);
        const double spot[2] = {rec.a1, rec.a2};
        const CorrelationReport rep =
            try_equity_correlation(net, market, spot, config.n_paths, config.seed);

        rec.defined = rep.defined;
        ++result.evaluated;
        if (!rep.defined) {
            rec.rho_s = std::numeric_limits<double>::quiet_NaN();
            rec.rho_s_se = std::numeric_limits<double>::quiet_NaN();
            rec.margin = std::numeric_limits<double>::quiet_NaN();
            rec.pass = false;
            ++result.undefined;
        } else {
            const DominanceCheck check = check_theorem_dominance(rep);
            rec.rho_s = rep.rho_s;
            rec.rho_s_se = rep.rho_s_se;
            rec.margin = check.margin;
            rec.pass = check.pass;
            ++result.defined;
            if (!check.pass) ++result.failures;
            result.min_margin = std::min(result.min_margin, check.margin);
        }
        result.records.push_back(rec);
    }
    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace netval
