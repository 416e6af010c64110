#pragma once

#include <cstdint>
#include <span>

#include "netval/gbm.hpp"
#include "netval/network.hpp"

namespace netval {

// Time-t prices of the 2n network claims with per-component Monte-Carlo
// standard errors. Same inputs and seed give bitwise identical estimates.
struct PriceEstimate {
    ClaimVector claims;
    std::vector<double> se;  // length 2n, equity block then debt block
    std::size_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Risk-neutral Monte-Carlo price of every equity and debt claim: the mean of
// the discounted clearing fixed point over exact terminal asset draws. One
// clearing solve per path serves all 2n claims; two-firm networks use the
// closed form instead of the iteration, so clearing_tol only matters for
// three or more firms.
PriceEstimate price_claims(const FirmNetwork& net, const MarketParams& params,
                           std::span<const double> spot, std::size_t n_paths,
                           std::uint64_t seed, double clearing_tol = 1e-12);

double d_plus(double spot, double strike, double rate, double sigma, double tau);
double d_minus(double spot, double strike, double rate, double sigma, double tau);

// Black-Scholes call and put on a lognormal asset.
double merton_call(double spot, double strike, double rate, double sigma, double tau);
double merton_put(double spot, double strike, double rate, double sigma, double tau);

// E[A_T | A_T >= strike] = spot e^{r tau} Phi(d+) / Phi(d-). Throws
// ConditioningDegenerate when the conditioning probability underflows.
double conditional_asset_expectation(double spot, double strike, double rate, double sigma,
                                     double tau);

}  // namespace netval
