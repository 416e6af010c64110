#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netval/equity_corr.hpp"
#include "netval/network.hpp"
#include "netval/two_firm.hpp"

namespace netval {

std::vector<double> spaced_grid(double lo, double hi, std::size_t points, bool log_spacing);

// Sweep of the equity correlation over debt/equity cross-holding fractions,
// asset vols and correlations, with a symmetric spot a1 = a2 swept across a
// (log) range. One row per grid point; points with undefined correlation
// (equity numerically zero) carry NaN and are marked.
struct SweepConfig {
    std::vector<double> m12d{0.0};
    std::vector<double> m21d{0.0};
    std::vector<double> m12s{0.0};
    std::vector<double> m21s{0.0};
    std::vector<double> sigma{0.2};
    std::vector<double> rho{0.0};
    double rate = 0.0;
    double tau = 1.0;
    double d1 = 1.0;
    double d2 = 1.0;
    double a_min = 0.2;
    double a_max = 5.0;
    std::size_t a_points = 40;
    bool log_spacing = true;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
};

// The grids behind the correlation figures: debt cross-holdings 0..0.8 in
// steps of 0.2, vols {0.2, 0.4}, asset correlations {-0.4, 0, 0.4, 0.8};
// the second preset adds 10% equity cross-holdings both ways.
SweepConfig default_fig1_config();
SweepConfig default_fig10_config();

struct FigRow {
    double m12d, m21d, m12s, m21s;
    double sigma, rho_asset, a_spot;
    double s1_price, s1_se;
    double rho_s, rho_s_se;
    int sign_source;
    bool defined;
};

std::vector<FigRow> run_fig_sweep(const SweepConfig& config);

// Does rho_s rise as equity falls along one curve of the sweep? Checked on
// defined points ordered by equity, allowing one standard error of slack per
// adjacent pair.
struct CurveTrend {
    bool rises_as_equity_falls = true;
    double worst_violation = 0.0;
};

CurveTrend curve_trend(const std::vector<FigRow>& curve);

// Correlation surface over an (a1, a2) grid for one fixed network, plus the
// default-boundary level sets v_i = d_i traced by bisection.
struct SurfaceConfig {
    double m12d = 0.5, m21d = 0.5;
    double m12s = 0.0, m21s = 0.0;
    double sigma1 = 0.2, sigma2 = 0.2;
    double rho = 0.0;
    double rate = 0.0;
    double tau = 1.0;
    double d1 = 1.0, d2 = 1.0;
    double a_min = 0.05, a_max = 5.0;
    std::size_t a_points = 25;
    bool log_spacing = true;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
};

struct SurfaceRow {
    double a1, a2;
    SuzukiRegion region;
    double rho_s, rho_s_se;
    int sign_source;
    bool defined;
};

struct BoundaryPoint {
    int firm;  // 1 or 2: which solvency boundary v_firm = d_firm
    double a1, a2;
};

struct SurfaceResult {
    std::vector<SurfaceRow> rows;
    std::vector<BoundaryPoint> boundaries;
};

SurfaceResult run_fig2_surface(const SurfaceConfig& config);

// Randomized verification of the dominance bound rho_s >= rho: draws valid
// two-firm configurations across wide parameter ranges, estimates rho_s for
// each and records every violation of rho_s >= rho - 3 se. Grid points where
// the correlation is undefined (equity essentially zero) are counted, not
// judged. All configurations share the path seed (common random numbers).
struct CampaignConfig {
    std::size_t n_configs = 1000;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
};

struct CampaignRecord {
    double a1, a2, d1, d2;
    double ms12, ms21, md12, md21;
    double sigma1, sigma2, rho, rate;
    double rho_s, rho_s_se, margin;
    bool defined;
    bool pass;
};

struct CampaignResult {
    std::size_t evaluated = 0;
    std::size_t defined = 0;
    std::size_t undefined = 0;
    std::size_t failures = 0;
    double min_margin = 0.0;  // over defined configurations
    std::vector<CampaignRecord> records;
    double runtime_seconds = 0.0;
};

CampaignResult run_theorem_campaign(const CampaignConfig& config);

}  // namespace netval
