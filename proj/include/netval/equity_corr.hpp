#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "netval/gbm.hpp"
#include "netval/greeks.hpp"
#include "netval/network.hpp"

namespace netval {

// Equity volatility factor: l^s_ij = sum_k Delta_ik a_k l_kj / s_i with l
// the lower-triangular asset covariance factor. Not triangular itself. The
// instantaneous equity covariance is L_s L_s^T. Firms whose equity value is
// at (or numerically indistinguishable from) zero have no defined leverage;
// they raise ZeroEquity.
Matrix equity_vol_matrix(const Matrix& delta_eq, std::span<const double> equity,
                         std::span<const double> spot, const MarketParams& params);

struct ClosedFormCorrelation {
    double rho_s = 0.0;
    int sign = 0;  // sign of l11 l21 + l12 l22, the source of rho_s's sign
};

// Two-firm instantaneous equity correlation from the equity Delta block:
//   rho_s = y / sqrt(x^2 + y^2)
// with x = (D11 a1 D22 a2 - D12 a2 D21 a1) s1 s2^-1... the cross term of the
// equity volatility factor, and y its aligned term; equivalent to inverting
//   1/rho_s^2 = 1 + (x/y)^2
// and taking the sign of y. The equity levels scale x and y identically, so
// rho_s is independent of them. y = 0 returns rho_s = 0. Requires
// D11, D22 > 0.
ClosedFormCorrelation equity_correlation_closed_form(const Matrix& delta_eq,
                                                     std::span<const double> spot,
                                                     std::span<const double> equity,
                                                     std::span<const double> sigma, double rho);

// Full Monte-Carlo equity correlation report for a two-firm network: one
// pass estimates prices and the equity Delta block jointly, the closed form
// maps them to rho_s, and standard errors propagate first order through
// that map using the joint covariance of the estimators.
struct CorrelationReport {
    bool defined = false;
    std::string undefined_reason;

    double rho_s = 0.0;
    double rho_s_se = 0.0;
    double rho_asset = 0.0;
    int sign_source = 0;

    Matrix vol_factor;      // L_s, 2x2
    Matrix vol_factor_se;
    Matrix inst_cov;        // Sigma_s = L_s L_s^T, per unit time
    Matrix inst_cov_se;

    std::array<double, 2> equity{};
    std::array<double, 2> equity_se{};
    Matrix delta_eq;        // 2x2 equity Delta block
    Matrix delta_eq_se;

    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Non-throwing variant: points where the correlation is undefined (equity
// numerically zero, or no solvent paths so an own-Delta vanishes) come back
// with defined = false. Sweeps over stressed grids rely on this.
CorrelationReport try_equity_correlation(const FirmNetwork& net, const MarketParams& params,
                                         std::span<const double> spot, std::size_t n_paths,
                                         std::uint64_t seed);

// Throwing variant: ZeroEquity / PreconditionError instead of an undefined
// report.
CorrelationReport equity_correlation_mc(const FirmNetwork& net, const MarketParams& params,
                                        std::span<const double> spot, std::size_t n_paths,
                                        std::uint64_t seed);

// Monte-Carlo equity volatility factor for any number of firms, with
// delta-method standard errors (used by the single-firm reduction checks).
struct EquityVolEstimate {
    Matrix vol_factor;
    Matrix vol_factor_se;
    std::vector<double> equity;
    std::vector<double> equity_se;
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

EquityVolEstimate equity_vol_mc(const FirmNetwork& net, const MarketParams& params,
                                std::span<const double> spot, std::size_t n_paths,
                                std::uint64_t seed);

// Does the report respect the dominance bound rho_s >= rho - 3 se?
struct DominanceCheck {
    bool pass = false;
    double margin = 0.0;  // rho_s - rho
};

DominanceCheck check_theorem_dominance(const CorrelationReport& report);

}  // namespace netval
