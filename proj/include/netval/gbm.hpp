#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "netval/linalg.hpp"

namespace netval {

// Risk-neutral market inputs: one flat short rate, per-firm asset
// volatilities and an asset correlation matrix, valuation time t and
// maturity T.
struct MarketParams {
    double rate = 0.0;
    std::vector<double> sigma;
    Matrix corr;
    double t = 0.0;
    double maturity = 1.0;

    std::size_t size() const { return sigma.size(); }
    double tau() const { return maturity - t; }

    static MarketParams single(double rate, double sigma, double tau);
    static MarketParams two_firm(double rate, double sigma1, double sigma2, double rho,
                                 double tau);
};

// Throws PreconditionError on non-positive vols, tau <= 0 or a malformed
// correlation matrix (the PSD check happens in cholesky()).
void require_valid(const MarketParams& params);

// Lower-triangular L with L L^T = input. Accepts positive semidefinite
// inputs: a rank-deficient matrix (|rho| = 1 say) yields zeros on the
// trailing diagonal instead of an error. Pivots below -1e-10 raise NotPsd;
// asymmetry beyond 1e-12 raises NotSymmetric.
Matrix cholesky(const Matrix& sym_psd);

// Instantaneous asset covariance diag(sigma) C diag(sigma) and its
// lower-triangular factor.
Matrix asset_covariance(const MarketParams& params);
Matrix asset_vol_factor(const MarketParams& params);

// Exact terminal draw of correlated geometric Brownian motion:
//   A_T[i] = spot[i] * exp((r - sigma_i^2/2) tau + sqrt(tau) (diag(sigma) L z)_i)
// with z a vector of independent standard normals. No time stepping: only
// the terminal law is ever priced.
struct TerminalSampler {
    TerminalSampler(const MarketParams& params, std::span<const double> spot);

    std::size_t size() const { return n_; }
    void sample(std::span<const double> z, std::span<double> out) const;

private:
    std::size_t n_ = 0;
    std::vector<double> spot_;
    std::vector<double> drift_;  // (r - sigma_i^2/2) tau
    std::vector<double> diff_;   // row-major sqrt(tau) * sigma_i * L(i, :)
};

std::vector<double> sample_terminal_assets(const MarketParams& params,
                                           std::span<const double> spot,
                                           std::span<const double> z);

}  // namespace netval
